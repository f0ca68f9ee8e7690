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

#ifndef EMBAYES_SCENARIOS_MU_RK_HPP_
#define EMBAYES_SCENARIOS_MU_RK_HPP_

#include <memory>
#include <string>
#include <vector>

#include "embayes/core/dist.hpp"
#include "embayes/core/environment.hpp"
#include "embayes/core/errors.hpp"
#include "embayes/core/policy.hpp"
#include "embayes/planning/task.hpp"

namespace embayes {
namespace scenarios {

// Myopia trap with an immediate payout R for staying up and a delayed payout 1
// that needs k+1 consecutive downs. The observation alphabet is a singleton,
// so the percept carries nothing but the reward level.
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;
inline constexpr int kReward0 = 0;
inline constexpr int kRewardR = 1;
inline constexpr int kReward1 = 2;

inline Space mu_rk_space() {
  return Space{Alphabet({"up", "down"}), Alphabet({"r0", "rR", "r1"})};
}

template <class S>
void check_mu_rk_params(const S& r, int k) {
  if (!(r > 0) || !(r < ScalarTraits<S>::one())) {
    throw SupportViolation("mu_rk needs 0 < R < 1");
  }
  if (k < 1) throw SupportViolation("mu_rk needs k >= 1");
}

// deterministic: rR while every action so far (current one included) is up,
// r1 once the last k+1 actions are all down, r0 otherwise
template <class S>
EnvironmentPtr<S> mu_rk(const S& r, int k) {
  check_mu_rk_params(r, k);
  auto fn = [k](const History& h, int a) {
    int level = kReward0;
    if (a == kUp) {
      bool all_up = true;
      for (int t = 0; t < h.length() && all_up; ++t) {
        all_up = h.turn(t).action == kUp;
      }
      if (all_up) level = kRewardR;
    } else if (h.length() >= k) {
      bool tail_down = true;
      for (int t = h.length() - k; t < h.length() && tail_down; ++t) {
        tail_down = h.turn(t).action == kDown;
      }
      if (tail_down) level = kReward1;
    }
    return Dist<S>::point(3, level);
  };
  return std::make_shared<FnEnvironment<S>>(
      mu_rk_space(), fn,
      "mu(R=" + ScalarTraits<S>::str(r) + ",k=" + std::to_string(k) + ")");
}

template <class S>
DiscountedTask<S> mu_rk_task(const S& r, const S& gamma) {
  check_mu_rk_params(r, 1);
  DiscountedTask<S> task;
  task.gamma = gamma;
  task.reward = {ScalarTraits<S>::zero(), r, ScalarTraits<S>::one()};
  task.validate(mu_rk_space());
  return task;
}

template <class S>
PolicyPtr<S> pi_up() {
  return constant_policy<S>(mu_rk_space(), kUp, "pi_up");
}

template <class S>
PolicyPtr<S> pi_down() {
  return constant_policy<S>(mu_rk_space(), kDown, "pi_down");
}

}  // namespace scenarios
}  // namespace embayes

#endif  // EMBAYES_SCENARIOS_MU_RK_HPP_
