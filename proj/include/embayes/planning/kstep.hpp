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

#ifndef EMBAYES_PLANNING_KSTEP_HPP_
#define EMBAYES_PLANNING_KSTEP_HPP_

#include <utility>
#include <vector>

#include "embayes/planning/value.hpp"

namespace embayes {

namespace planning_detail {

// Q^k(h, a) = E_rho(e|ha)[ (1-gamma) r(e) + gamma max_a' Q^{k-1}(hae, a') ],
// with Q^1 closing the recursion on the mixture's own self rollout. steps is
// the remaining total lookahead, shared by the max levels and the rollout.
template <class S>
S q_k(const Universe<S>& rho, const DiscountedTask<S>& task, History& h,
      int a, int k, int steps) {
  Dist<S> pe = rho.cond_percept(h, a);
  S one_minus = ScalarTraits<S>::one() - task.gamma;
  S acc = ScalarTraits<S>::zero();
  for (int e = 0; e < pe.size(); ++e) {
    if (pe[e] == 0) continue;
    S v = one_minus * task.reward[e];
    if (steps > 1 && task.gamma != 0) {
      h.push(a, e);
      if (k > 1) {
        S best = ScalarTraits<S>::zero();
        for (int a2 = 0; a2 < rho.space().actions.size(); ++a2) {
          S q = q_k(rho, task, h, a2, k - 1, steps - 1);
          if (a2 == 0 || q > best) best = q;
        }
        v += task.gamma * best;
      } else {
        v += task.gamma * v_self(rho, task, h, steps - 1);
      }
      h.pop();
    }
    acc += pe[e] * v;
  }
  return acc;
}

}  // namespace planning_detail

// k-step lookahead value of one action
template <class S>
ValueEstimate<S> k_step_q(const Universe<S>& rho, const DiscountedTask<S>& task,
                          const History& h, int a, int k,
                          const PlanBudget& budget) {
  if (k < 1) throw SupportViolation("k_step_q needs k >= 1");
  planning_detail::require_depth(rho, h, budget.horizon);
  History walk = h;
  return ValueEstimate<S>{
      planning_detail::q_k(rho, task, walk, a, k, budget.horizon),
      truncation_certificate(task, budget.horizon)};
}

// the k-step planner's move: argmax_a Q^k, ties to the lowest index
template <class S>
int k_step_action(const Universe<S>& rho, const DiscountedTask<S>& task,
                  const History& h, int k, const PlanBudget& budget) {
  if (k < 1) throw SupportViolation("k_step_action needs k >= 1");
  planning_detail::require_depth(rho, h, budget.horizon);
  History walk = h;
  int best_a = 0;
  S best = ScalarTraits<S>::zero();
  for (int a = 0; a < rho.space().actions.size(); ++a) {
    S q = planning_detail::q_k(rho, task, walk, a, k, budget.horizon);
    if (a == 0 || q > best) {
      best = q;
      best_a = a;
    }
  }
  return best_a;
}

// one move of the approximation-scheduled agent: at step t it plans with
// lookahead k_t and a horizon derived from tolerance eps_t
template <class S>
int approx_agent_step(const Universe<S>& rho, const DiscountedTask<S>& task,
                      const History& h, int k_t, double eps_t,
                      double br_slack = 1e-9) {
  PlanBudget b = PlanBudget::from_tolerance(to_double<S>(task.gamma), eps_t,
                                            br_slack);
  int avail = rho.depth() - h.length();
  if (b.horizon > avail) b.horizon = avail;
  if (b.horizon < 1) throw DepthExceeded("approx_agent_step: no depth left");
  return k_step_action(rho, task, h, k_t, b);
}

// value of rolling the k-step planner itself out against rho's percept
// conditionals (each node replans with the same k and the remaining budget)
template <class S>
ValueEstimate<S> k_step_policy_value(const Universe<S>& rho,
                                     const DiscountedTask<S>& task,
                                     const History& h, int k,
                                     const PlanBudget& budget) {
  planning_detail::require_depth(rho, h, budget.horizon);
  struct Roll {
    const Universe<S>& rho;
    const DiscountedTask<S>& task;
    int k;
    S walk(History& h, int steps) {
      if (steps == 0) return ScalarTraits<S>::zero();
      int a = 0;
      {
        S best = ScalarTraits<S>::zero();
        for (int cand = 0; cand < rho.space().actions.size(); ++cand) {
          S q = planning_detail::q_k(rho, task, h, cand, k, steps);
          if (cand == 0 || q > best) {
            best = q;
            a = cand;
          }
        }
      }
      Dist<S> pe = rho.cond_percept(h, a);
      S one_minus = ScalarTraits<S>::one() - task.gamma;
      S acc = ScalarTraits<S>::zero();
      for (int e = 0; e < pe.size(); ++e) {
        if (pe[e] == 0) continue;
        S v = one_minus * task.reward[e];
        if (steps > 1 && task.gamma != 0) {
          h.push(a, e);
          v += task.gamma * walk(h, steps - 1);
          h.pop();
        }
        acc += pe[e] * v;
      }
      return acc;
    }
  };
  History walk = h;
  return ValueEstimate<S>{Roll{rho, task, k}.walk(walk, budget.horizon),
                          truncation_certificate(task, budget.horizon)};
}

}  // namespace embayes

#endif  // EMBAYES_PLANNING_KSTEP_HPP_
