// Copyright 2025 The Embayes Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBAYES_SCENARIOS_PERTURB_HPP_
#define EMBAYES_SCENARIOS_PERTURB_HPP_

#include <memory>
#include <string>

#include "embayes/core/dist.hpp"
#include "embayes/core/environment.hpp"
#include "embayes/core/errors.hpp"
#include "embayes/core/policy.hpp"

namespace embayes {
namespace scenarios {

namespace scenarios_detail {

template <class S>
void check_noise(const S& noise) {
  if (noise < 0 || noise > ScalarTraits<S>::one()) {
    throw SupportViolation("smoothing noise outside [0, 1]");
  }
}

template <class S>
Dist<S> toward_uniform(Dist<S> d, const S& noise) {
  Dist<S> u = Dist<S>::uniform(d.size());
  for (int i = 0; i < d.size(); ++i) {
    d[i] = (ScalarTraits<S>::one() - noise) * d[i] + noise * u[i];
  }
  return d;
}

}  // namespace scenarios_detail

// per-node mix toward uniform; moves each conditional by at most noise in
// total variation and makes every symbol fully supported for noise > 0
template <class S>
PolicyPtr<S> smooth_policy(PolicyPtr<S> pi, const S& noise) {
  scenarios_detail::check_noise(noise);
  auto fn = [pi, noise](const History& h) {
    return scenarios_detail::toward_uniform(pi->act(h), noise);
  };
  return std::make_shared<FnPolicy<S>>(pi->space(), fn, pi->name() + "~",
                                       pi->depth());
}

template <class S>
EnvironmentPtr<S> smooth_environment(EnvironmentPtr<S> nu, const S& noise) {
  scenarios_detail::check_noise(noise);
  auto fn = [nu, noise](const History& h, int a) {
    return scenarios_detail::toward_uniform(nu->per(h, a), noise);
  };
  return std::make_shared<FnEnvironment<S>>(nu->space(), fn, nu->name() + "~",
                                            nu->depth());
}

}  // namespace scenarios
}  // namespace embayes

#endif  // EMBAYES_SCENARIOS_PERTURB_HPP_
