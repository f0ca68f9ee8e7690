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

#ifndef EMBAYES_PLANNING_TASK_HPP_
#define EMBAYES_PLANNING_TASK_HPP_

#include <cmath>
#include <vector>

#include "embayes/core/alphabet.hpp"
#include "embayes/core/dist.hpp"

namespace embayes {

// reward extractor over percepts plus geometric discount. values produced by
// the planners are normalized by (1 - gamma) and live in [0, 1].
//
// normal-form payoffs outside [0, 1] must be rescaled before they get here;
// payoff_scale/payoff_shift record the affine map so reported q-values can be
// translated back into raw payoff units (raw = shift + scale * reward).
template <class S>
struct DiscountedTask {
  S gamma;
  std::vector<S> reward;
  S payoff_scale = ScalarTraits<S>::one();
  S payoff_shift = ScalarTraits<S>::zero();

  void validate(const Space& sp) const {
    if (static_cast<int>(reward.size()) != sp.percepts.size()) {
      throw AlphabetMismatch("one reward per percept");
    }
    if (gamma < 0 || gamma >= 1) {
      throw SupportViolation("discount must be in [0,1)");
    }
    for (const auto& r : reward) {
      if (r < 0 || r > 1) throw SupportViolation("reward outside [0,1]");
    }
  }

  S raw_payoff(const S& normalized) const {
    return payoff_shift + payoff_scale * normalized;
  }
};

// lookahead budget. horizon is the total tree depth; gamma^horizon is the
// truncation certificate on every reported value.
struct PlanBudget {
  int horizon = 1;
  double br_slack = 1e-9;  // argmax certification slack

  static PlanBudget from_tolerance(double gamma, double plan_tol,
                                   double br_slack = 1e-9) {
    PlanBudget b;
    b.br_slack = br_slack;
    if (gamma <= 0.0) {
      b.horizon = 1;  // one exact step, zero tail
    } else {
      b.horizon = static_cast<int>(
          std::ceil(std::log(plan_tol) / std::log(gamma)));
      if (b.horizon < 1) b.horizon = 1;
    }
    return b;
  }
};

template <class S>
struct ValueEstimate {
  S value = ScalarTraits<S>::zero();
  double truncation = 0.0;  // gamma^horizon certificate
};

template <class S>
double truncation_certificate(const DiscountedTask<S>& task, int horizon) {
  return std::pow(to_double<S>(task.gamma), horizon);
}

}  // namespace embayes

#endif  // EMBAYES_PLANNING_TASK_HPP_
