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

#ifndef EMBAYES_PLANNING_VALUE_HPP_
#define EMBAYES_PLANNING_VALUE_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "embayes/core/universe.hpp"
#include "embayes/planning/task.hpp"

namespace embayes {

// Finite-horizon discounted values over a universe's conditionals. All values
// are normalized by (1 - gamma); truncated branches contribute zero, so every
// result is within gamma^horizon of its infinite-horizon counterpart.
// Semimeasure deficit likewise contributes zero future reward.
//
// The planners guard the universe's declared depth: a budget that would walk
// past it raises DepthExceeded rather than silently truncating.

enum class Continuation { kSelf, kOptimal };

namespace planning_detail {

template <class S>
void require_depth(const Universe<S>& u, const History& h, int steps) {
  if (h.length() + steps > u.depth()) {
    throw DepthExceeded(u.name() + ": budget exceeds universe depth");
  }
}

template <class S>
S v_optimal(const Universe<S>& rho, const DiscountedTask<S>& task, History& h,
            int steps);

template <class S>
S q_optimal(const Universe<S>& rho, const DiscountedTask<S>& task, History& h,
            int a, int steps) {
  Dist<S> pe = rho.cond_percept(h, a);
  S one_minus = ScalarTraits<S>::one() - task.gamma;
  S acc = ScalarTraits<S>::zero();
  for (int e = 0; e < pe.size(); ++e) {
    if (pe[e] == 0) continue;
    S v = one_minus * task.reward[e];
    if (steps > 1 && task.gamma != 0) {
      h.push(a, e);
      v += task.gamma * v_optimal(rho, task, h, steps - 1);
      h.pop();
    }
    acc += pe[e] * v;
  }
  return acc;
}

template <class S>
S v_optimal(const Universe<S>& rho, const DiscountedTask<S>& task, History& h,
            int steps) {
  if (steps == 0) return ScalarTraits<S>::zero();
  S best = ScalarTraits<S>::zero();
  bool first = true;
  for (int a = 0; a < rho.space().actions.size(); ++a) {
    S q = q_optimal(rho, task, h, a, steps);
    if (first || q > best) {
      best = q;
      first = false;
    }
  }
  return best;
}

template <class S>
S v_self(const Universe<S>& rho, const DiscountedTask<S>& task, History& h,
         int steps) {
  if (steps == 0) return ScalarTraits<S>::zero();
  Dist<S> pa = rho.cond_action(h);
  S one_minus = ScalarTraits<S>::one() - task.gamma;
  S acc = ScalarTraits<S>::zero();
  for (int a = 0; a < pa.size(); ++a) {
    if (pa[a] == 0) continue;
    Dist<S> pe = rho.cond_percept(h, a);
    S q = ScalarTraits<S>::zero();
    for (int e = 0; e < pe.size(); ++e) {
      if (pe[e] == 0) continue;
      S v = one_minus * task.reward[e];
      if (steps > 1 && task.gamma != 0) {
        h.push(a, e);
        v += task.gamma * v_self(rho, task, h, steps - 1);
        h.pop();
      }
      q += pe[e] * v;
    }
    acc += pa[a] * q;
  }
  return acc;
}

// rollout of an explicit action rule against rho's percept conditionals
template <class S>
using ActionRule = std::function<Dist<S>(const History&)>;

template <class S>
S v_rule(const Universe<S>& rho, const DiscountedTask<S>& task,
         const ActionRule<S>& rule, History& h, int steps) {
  if (steps == 0) return ScalarTraits<S>::zero();
  Dist<S> pa = rule(static_cast<const History&>(h));
  S one_minus = ScalarTraits<S>::one() - task.gamma;
  S acc = ScalarTraits<S>::zero();
  for (int a = 0; a < pa.size(); ++a) {
    if (pa[a] == 0) continue;
    Dist<S> pe = rho.cond_percept(h, a);
    S q = ScalarTraits<S>::zero();
    for (int e = 0; e < pe.size(); ++e) {
      if (pe[e] == 0) continue;
      S v = one_minus * task.reward[e];
      if (steps > 1 && task.gamma != 0) {
        h.push(a, e);
        v += task.gamma * v_rule(rho, task, rule, h, steps - 1);
        h.pop();
      }
      q += pe[e] * v;
    }
    acc += pa[a] * q;
  }
  return acc;
}

}  // namespace planning_detail

// V of the universe under its own action conditionals (the self rollout)
template <class S>
ValueEstimate<S> policy_value(const Universe<S>& rho,
                              const DiscountedTask<S>& task, const History& h,
                              const PlanBudget& budget) {
  planning_detail::require_depth(rho, h, budget.horizon);
  History walk = h;
  return ValueEstimate<S>{
      planning_detail::v_self(rho, task, walk, budget.horizon),
      truncation_certificate(task, budget.horizon)};
}

// V of an explicit policy rolled out against rho's percept conditionals
template <class S>
ValueEstimate<S> rule_value(const Universe<S>& rho,
                            const DiscountedTask<S>& task,
                            const planning_detail::ActionRule<S>& rule,
                            const History& h, const PlanBudget& budget) {
  planning_detail::require_depth(rho, h, budget.horizon);
  History walk = h;
  return ValueEstimate<S>{
      planning_detail::v_rule(rho, task, rule, walk, budget.horizon),
      truncation_certificate(task, budget.horizon)};
}

// Q(h, a) with the chosen continuation semantics
template <class S>
ValueEstimate<S> q_value(const Universe<S>& rho, const DiscountedTask<S>& task,
                         const History& h, int a, const PlanBudget& budget,
                         Continuation cont) {
  planning_detail::require_depth(rho, h, budget.horizon);
  History walk = h;
  S q;
  if (cont == Continuation::kOptimal) {
    q = planning_detail::q_optimal(rho, task, walk, a, budget.horizon);
  } else {
    // one expectimax-free step then the self rollout
    Dist<S> pe = rho.cond_percept(walk, a);
    S one_minus = ScalarTraits<S>::one() - task.gamma;
    q = ScalarTraits<S>::zero();
    for (int e = 0; e < pe.size(); ++e) {
      if (pe[e] == 0) continue;
      S v = one_minus * task.reward[e];
      if (budget.horizon > 1 && task.gamma != 0) {
        walk.push(a, e);
        v += task.gamma *
             planning_detail::v_self(rho, task, walk, budget.horizon - 1);
        walk.pop();
      }
      q += pe[e] * v;
    }
  }
  return ValueEstimate<S>{q, truncation_certificate(task, budget.horizon)};
}

// V*(h): optimal-continuation value
template <class S>
ValueEstimate<S> optimal_value(const Universe<S>& rho,
                               const DiscountedTask<S>& task, const History& h,
                               const PlanBudget& budget) {
  planning_detail::require_depth(rho, h, budget.horizon);
  History walk = h;
  return ValueEstimate<S>{
      planning_detail::v_optimal(rho, task, walk, budget.horizon),
      truncation_certificate(task, budget.horizon)};
}

struct BestResponse {
  int action = 0;
  std::vector<double> q;       // numeric view of the per-action values
  double truncation = 0.0;
};

// Embedded best response: argmax over optimal-continuation q-values built
// from the mixture's percept conditionals only; the self-model plays no role.
// Ties resolve to the lowest action index.
template <class S>
BestResponse embedded_best_response(const Universe<S>& rho,
                                    const DiscountedTask<S>& task,
                                    const History& h,
                                    const PlanBudget& budget) {
  planning_detail::require_depth(rho, h, budget.horizon);
  History walk = h;
  BestResponse out;
  out.truncation = truncation_certificate(task, budget.horizon);
  S best = ScalarTraits<S>::zero();
  for (int a = 0; a < rho.space().actions.size(); ++a) {
    S q = planning_detail::q_optimal(rho, task, walk, a, budget.horizon);
    out.q.push_back(to_double<S>(q));
    if (a == 0 || q > best) {
      best = q;
      out.action = a;
    }
  }
  return out;
}

}  // namespace embayes

#endif  // EMBAYES_PLANNING_VALUE_HPP_
