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

#ifndef EMBAYES_EQUILIBRIA_CHECKERS_HPP_
#define EMBAYES_EQUILIBRIA_CHECKERS_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/core/multi_agent.hpp"
#include "embayes/core/tv.hpp"
#include "embayes/equilibria/dependency.hpp"
#include "embayes/equilibria/game.hpp"
#include "embayes/equilibria/verdict.hpp"
#include "embayes/planning/value.hpp"

namespace embayes {

// joint profile assembled from one seat's action and a flat co index
inline std::vector<int> joint_with(const JointIndexer& idx, int player,
                                   int own, int co) {
  return idx.with_own(player, own, idx.co_unflat(player, co));
}

// ---------------------------------------------------------------------------
// one-shot checkers, raw payoff units throughout

template <class S>
Verdict check_nash(const NormalFormGame<S>& g,
                   const std::vector<Dist<S>>& profile, double eps = 0.0) {
  g.validate();
  JointIndexer idx = g.indexer();
  if (static_cast<int>(profile.size()) != g.players()) {
    throw AlphabetMismatch(g.name + ": one strategy per player");
  }
  Verdict v;
  v.tolerances["eps"] = eps;
  for (int i = 0; i < g.players(); ++i) {
    // payoff of each own action against the co-profile product
    std::vector<S> value(idx.size(i), ScalarTraits<S>::zero());
    for (int co = 0; co < idx.co_count(i); ++co) {
      std::vector<int> co_acts = idx.co_unflat(i, co);
      S w = ScalarTraits<S>::one();
      int k = 0;
      for (int j = 0; j < g.players(); ++j) {
        if (j == i) continue;
        w = w * profile[j][co_acts[k++]];
      }
      if (w == 0) continue;
      for (int own = 0; own < idx.size(i); ++own) {
        value[own] += w * g.payoff[i][idx.flat(idx.with_own(i, own, co_acts))];
      }
    }
    S actual = ScalarTraits<S>::zero();
    for (int own = 0; own < idx.size(i); ++own) {
      actual += profile[i][own] * value[own];
    }
    for (int own = 0; own < idx.size(i); ++own) {
      double gap = to_double<S>(value[own] - actual);
      if (gap > eps) {
        v.fail(i, "value", g.actions[i].name(own), gap);
      }
    }
  }
  return v;
}

// dependency equilibrium: each action the joint distribution plays must be a
// best response when every candidate action is judged under the conditional
// co-profile distribution given that candidate; completion rows supply the
// conditionals of actions the distribution never plays
template <class S>
Verdict check_dependency_eq(const NormalFormGame<S>& g,
                            const DependencyDistribution<S>& dep,
                            double eps = 0.0) {
  g.validate();
  dep.validate(g);
  JointIndexer idx = g.indexer();
  Verdict v;
  v.tolerances["eps"] = eps;
  for (int i = 0; i < g.players(); ++i) {
    std::vector<S> value(idx.size(i), ScalarTraits<S>::zero());
    for (int own = 0; own < idx.size(i); ++own) {
      std::vector<S> cond = dep.co_conditional(idx, i, own);
      for (int co = 0; co < idx.co_count(i); ++co) {
        value[own] += cond[co] * g.payoff[i][idx.flat(joint_with(idx, i, own, co))];
      }
    }
    for (int own = 0; own < idx.size(i); ++own) {
      if (dep.marginal(idx, i, own) == 0) continue;
      for (int dev = 0; dev < idx.size(i); ++dev) {
        double gap = to_double<S>(value[dev] - value[own]);
        if (gap > eps) {
          v.fail(i, "value",
                 g.actions[i].name(own) + "->" + g.actions[i].name(dev), gap);
        }
      }
    }
  }
  return v;
}

// correlated version: per supported message, the prescribed mixed action must
// weakly beat every deviation, where a deviation the policy never plays after
// this message is judged under the player's deviation kernel q instead of the
// co-players' message-conditional play
template <class S>
Verdict check_cee(const NormalFormGame<S>& g, const CeeInstance<S>& cee,
                  double eps = 0.0) {
  g.validate();
  cee.device.validate();
  JointIndexer aidx = g.indexer();
  JointIndexer midx = cee.device.indexer();
  if (static_cast<int>(cee.policy.size()) != g.players() ||
      static_cast<int>(cee.q.size()) != g.players()) {
    throw AlphabetMismatch(g.name + ": one policy and kernel per player");
  }
  Verdict v;
  v.tolerances["eps"] = eps;
  for (int i = 0; i < g.players(); ++i) {
    for (int m = 0; m < midx.size(i); ++m) {
      if (cee.device.message_marginal(i, m) == 0) continue;
      std::vector<S> co_m = cee.device.co_messages_given(i, m);
      // payoff of each own action against the co-players' policies under the
      // message conditional
      std::vector<S> played(aidx.size(i), ScalarTraits<S>::zero());
      for (int cm = 0; cm < midx.co_count(i); ++cm) {
        if (co_m[cm] == 0) continue;
        std::vector<int> co_msgs = midx.co_unflat(i, cm);
        for (int ca = 0; ca < aidx.co_count(i); ++ca) {
          std::vector<int> co_acts = aidx.co_unflat(i, ca);
          S w = ScalarTraits<S>::one();
          int k = 0;
          for (int j = 0; j < g.players(); ++j) {
            if (j == i) continue;
            w = w * cee.policy[j][co_msgs[k]][co_acts[k]];
            ++k;
          }
          if (w == 0) continue;
          for (int own = 0; own < aidx.size(i); ++own) {
            played[own] += co_m[cm] * w *
                           g.payoff[i][aidx.flat(joint_with(aidx, i, own, ca))];
          }
        }
      }
      const Dist<S>& mix = cee.policy[i][m];
      std::vector<S> judged(aidx.size(i));
      for (int own = 0; own < aidx.size(i); ++own) {
        if (mix[own] > 0) {
          judged[own] = played[own];
        } else {
          S val = ScalarTraits<S>::zero();
          for (int ca = 0; ca < aidx.co_count(i); ++ca) {
            val += cee.q[i][own][ca] *
                   g.payoff[i][aidx.flat(joint_with(aidx, i, own, ca))];
          }
          judged[own] = val;
        }
      }
      S actual = ScalarTraits<S>::zero();
      for (int own = 0; own < aidx.size(i); ++own) {
        actual += mix[own] * played[own];
      }
      for (int own = 0; own < aidx.size(i); ++own) {
        double gap = to_double<S>(judged[own] - actual);
        if (gap > eps) {
          v.fail(i, "value",
                 "m" + std::to_string(m) + ":" + g.actions[i].name(own), gap);
        }
      }
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// sequential checkers, normalized value units

namespace equilibria_detail {

template <class S>
double br_gap(const Universe<S>& rho, const DiscountedTask<S>& task,
              const PolicyPtr<S>& pi, const History& h,
              const PlanBudget& budget) {
  planning_detail::ActionRule<S> rule = [pi](const History& hh) {
    return pi->act(hh);
  };
  S v_pi = rule_value(rho, task, rule, h, budget).value;
  S v_star = optimal_value(rho, task, h, budget).value;
  return to_double<S>(v_star - v_pi);
}

// exact mass agreement on the truth's support and its one-step boundary;
// semimeasure monotonicity extends boundary zeros to everything below them
template <class S>
void walk_masses(const Universe<S>& belief, const Universe<S>& truth,
                 int player, int depth, History& h, Verdict* v) {
  S bm = belief.prefix(h);
  S tm = truth.prefix(h);
  const Space& sp = truth.space();
  if (bm != tm) {
    v->fail(player, "belief", h.token(sp), to_double<S>(abs_val<S>(bm - tm)));
    return;
  }
  if (h.length() == depth) return;
  for (int a = 0; a < sp.actions.size(); ++a) {
    for (int e = 0; e < sp.percepts.size(); ++e) {
      h.push(a, e);
      if (truth.prefix(h) == 0) {
        if (belief.prefix(h) != 0) {
          v->fail(player, "belief", h.token(sp),
                  to_double<S>(belief.prefix(h)));
        }
      } else {
        walk_masses(belief, truth, player, depth, h, v);
      }
      h.pop();
    }
  }
}

}  // namespace equilibria_detail

// the distribution seat i actually faces when everyone plays the profile
template <class S>
std::vector<UniversePtr<S>> profile_truths(
    const std::vector<PolicyPtr<S>>& policies, MultiAgentEnvPtr<S> sigma) {
  if (static_cast<int>(policies.size()) != sigma->players()) {
    throw AlphabetMismatch("profile_truths: one policy per seat");
  }
  std::vector<UniversePtr<S>> out;
  out.reserve(policies.size());
  for (int i = 0; i < sigma->players(); ++i) {
    std::vector<PolicyPtr<S>> co = policies;
    co[i] = nullptr;
    out.push_back(
        interact<S>(policies[i], personal_environment<S>(sigma, co, i)));
  }
  return out;
}

// Subjective equilibrium: every seat plays a best response to its own belief
// (judged at the root over the budget horizon, with deviations priced by the
// belief's completion), and the belief reproduces the true history masses
// exactly wherever play can go. An attached completion must also agree with
// the belief's realized conditionals.
template <class S>
Verdict check_see(const std::vector<PolicyPtr<S>>& policies,
                  const std::vector<UniversePtr<S>>& beliefs,
                  MultiAgentEnvPtr<S> sigma,
                  const std::vector<DiscountedTask<S>>& tasks,
                  const PlanBudget& budget) {
  static_assert(ScalarTraits<S>::exact,
                "subjective equilibrium checks need the exact backend");
  if (beliefs.size() != policies.size() || tasks.size() != policies.size()) {
    throw AlphabetMismatch("check_see: per-player argument size mismatch");
  }
  std::vector<UniversePtr<S>> truths = profile_truths(policies, sigma);
  Verdict v;
  v.tolerances["br_slack"] = budget.br_slack;
  v.tolerances["belief_depth"] = budget.horizon;
  for (size_t i = 0; i < policies.size(); ++i) {
    if (!(beliefs[i]->space() == truths[i]->space())) {
      throw AlphabetMismatch("check_see: belief is on the wrong space");
    }
    tasks[i].validate(beliefs[i]->space());
    if (beliefs[i]->completion()) {
      check_completion_consistency(*beliefs[i], *beliefs[i]->completion(),
                                   budget.horizon);
    }
    History root;
    equilibria_detail::walk_masses(*beliefs[i], *truths[i],
                                   static_cast<int>(i), budget.horizon, root,
                                   &v);
    double gap = equilibria_detail::br_gap(*beliefs[i], tasks[i], policies[i],
                                           History(), budget);
    double tol =
        budget.br_slack + truncation_certificate(tasks[i], budget.horizon);
    if (gap > tol) v.fail(static_cast<int>(i), "value", "root", gap);
  }
  return v;
}

// Objective equilibrium: each seat must best-respond to the q-completed true
// distribution: exact conditionals on the support of play, the q kernel
// everywhere else. The completed object is materialized as a table over the
// support so that the completion, not a counterfactual product form, answers
// off-path queries. q is not required to agree on path.
template <class S>
Verdict check_ee(const std::vector<PolicyPtr<S>>& policies,
                 MultiAgentEnvPtr<S> sigma,
                 const std::vector<EnvironmentPtr<S>>& q,
                 const std::vector<DiscountedTask<S>>& tasks,
                 const PlanBudget& budget, double eps_br = 0.0) {
  if (q.size() != policies.size() || tasks.size() != policies.size()) {
    throw AlphabetMismatch("check_ee: per-player argument size mismatch");
  }
  std::vector<UniversePtr<S>> truths = profile_truths(policies, sigma);
  Verdict v;
  v.tolerances["br_slack"] = budget.br_slack;
  v.tolerances["eps_br"] = eps_br;
  for (size_t i = 0; i < policies.size(); ++i) {
    tasks[i].validate(truths[i]->space());
    UniversePtr<S> truth = truths[i];
    auto act = [truth](const History& h) { return truth->cond_action(h); };
    auto per = [truth](const History& h, int a) {
      return truth->cond_percept(h, a);
    };
    auto upsilon = TableUniverse<S>::from_conditionals(
        truth->space(), budget.horizon, act, per,
        truth->name() + "_qcompleted");
    upsilon->set_completion(
        std::make_shared<PairCompletion<S>>(policies[i], q[i]));
    double gap = equilibria_detail::br_gap(*upsilon, tasks[i], policies[i],
                                           History(), budget);
    double tol = eps_br + budget.br_slack +
                 truncation_certificate(tasks[i], budget.horizon);
    if (gap > tol) v.fail(static_cast<int>(i), "value", "root", gap);
  }
  return v;
}

// relaxed subjective equilibrium: best response against the belief up to
// planning slack, and the belief within eps of the truth in k-turn total
// variation, both judged at the given histories (roots when omitted)
template <class S>
Verdict check_epsilon_see(const std::vector<PolicyPtr<S>>& policies,
                          const std::vector<UniversePtr<S>>& beliefs,
                          MultiAgentEnvPtr<S> sigma, double eps,
                          const std::vector<DiscountedTask<S>>& tasks,
                          const PlanBudget& budget, int k,
                          const std::vector<History>& at = {}) {
  if (beliefs.size() != policies.size() || tasks.size() != policies.size()) {
    throw AlphabetMismatch("check_epsilon_see: per-player size mismatch");
  }
  if (!at.empty() && at.size() != policies.size()) {
    throw AlphabetMismatch("check_epsilon_see: one history per player");
  }
  std::vector<UniversePtr<S>> truths = profile_truths(policies, sigma);
  Verdict v;
  v.tolerances["eps"] = eps;
  v.tolerances["k"] = k;
  v.tolerances["br_slack"] = budget.br_slack;
  for (size_t i = 0; i < policies.size(); ++i) {
    tasks[i].validate(beliefs[i]->space());
    const Space& sp = beliefs[i]->space();
    History h = at.empty() ? History() : at[i];
    double gap =
        equilibria_detail::br_gap(*beliefs[i], tasks[i], policies[i], h, budget);
    double tol =
        budget.br_slack + truncation_certificate(tasks[i], budget.horizon);
    if (gap > tol) v.fail(static_cast<int>(i), "value", h.token(sp), gap);
    double d = to_double<S>(total_variation_k(*beliefs[i], *truths[i], h, k));
    if (d > eps) {
      v.fail(static_cast<int>(i), "belief",
             h.token(sp) + "|k=" + std::to_string(k), d);
    }
  }
  return v;
}

// one seat of a correlated sequential profile after a message: the policy the
// message selects, the belief it conditions, and the true distribution the
// seat then faces
template <class S>
struct TailView {
  PolicyPtr<S> policy;
  UniversePtr<S> belief;
  UniversePtr<S> truth;
};

// correlated relaxed subjective equilibrium: per supported message, the
// selected policy is a (delta + planning slack) best response to the message
// belief; and the device mass of joint messages under which any seat's belief
// strays more than eps from its truth in k-turn total variation is at most
// eps.
template <class S>
Verdict check_eps_delta_scee(const CorrelationDevice<S>& device,
                             const std::vector<std::vector<TailView<S>>>& views,
                             double eps, double delta,
                             const std::vector<DiscountedTask<S>>& tasks,
                             const PlanBudget& budget, int k) {
  device.validate();
  JointIndexer midx = device.indexer();
  int players = midx.players();
  if (static_cast<int>(views.size()) != players ||
      static_cast<int>(tasks.size()) != players) {
    throw AlphabetMismatch("scee check: per-player argument size mismatch");
  }
  Verdict v;
  v.tolerances["eps"] = eps;
  v.tolerances["delta"] = delta;
  v.tolerances["k"] = k;
  v.tolerances["br_slack"] = budget.br_slack;
  std::vector<std::vector<bool>> close(players);
  for (int i = 0; i < players; ++i) {
    if (static_cast<int>(views[i].size()) != midx.size(i)) {
      throw AlphabetMismatch("scee check: one view per message");
    }
    close[i].assign(midx.size(i), true);
    for (int m = 0; m < midx.size(i); ++m) {
      if (device.message_marginal(i, m) == 0) continue;
      const TailView<S>& view = views[i][m];
      tasks[i].validate(view.belief->space());
      double gap = equilibria_detail::br_gap(*view.belief, tasks[i],
                                             view.policy, History(), budget);
      double tol = delta + budget.br_slack +
                   truncation_certificate(tasks[i], budget.horizon);
      if (gap > tol) {
        v.fail(i, "value", "m" + std::to_string(m), gap);
      }
      double d = to_double<S>(
          total_variation_k(*view.belief, *view.truth, History(), k));
      close[i][m] = d <= eps;
    }
  }
  S bad = ScalarTraits<S>::zero();
  for (int jm = 0; jm < midx.count(); ++jm) {
    if (device.p[jm] == 0) continue;
    std::vector<int> msgs = midx.unflat(jm);
    for (int i = 0; i < players; ++i) {
      if (!close[i][msgs[i]]) {
        bad += device.p[jm];
        break;
      }
    }
  }
  if (to_double<S>(bad) > eps) {
    v.fail(-1, "belief", "joint message mass", to_double<S>(bad));
  }
  return v;
}

template <class S>
Verdict check_eps_scee(const CorrelationDevice<S>& device,
                       const std::vector<std::vector<TailView<S>>>& views,
                       double eps, const std::vector<DiscountedTask<S>>& tasks,
                       const PlanBudget& budget, int k) {
  return check_eps_delta_scee(device, views, eps, 0.0, tasks, budget, k);
}

}  // namespace embayes

#endif  // EMBAYES_EQUILIBRIA_CHECKERS_HPP_
