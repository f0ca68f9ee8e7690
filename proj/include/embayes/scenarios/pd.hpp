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

#ifndef EMBAYES_SCENARIOS_PD_HPP_
#define EMBAYES_SCENARIOS_PD_HPP_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "embayes/bayes/mixture.hpp"
#include "embayes/core/dist.hpp"
#include "embayes/core/environment.hpp"
#include "embayes/core/history.hpp"
#include "embayes/core/policy.hpp"
#include "embayes/core/universe.hpp"
#include "embayes/equilibria/game.hpp"
#include "embayes/scenarios/perturb.hpp"

namespace embayes {
namespace scenarios {

// Defect sits at index 0 so the planners' lowest-index tie break defects by
// default, which is the convention the onset boundary cases rely on.
inline constexpr int kDefect = 0;
inline constexpr int kCooperate = 1;

template <class S>
NormalFormGame<S> prisoner_dilemma() {
  NormalFormGame<S> g;
  g.name = "pd";
  g.actions = {Alphabet({"D", "C"}), Alphabet({"D", "C"})};
  // flat order (D,D) (D,C) (C,D) (C,C)
  g.payoff = {{S(1), S(3), ScalarTraits<S>::zero(), S(2)},
              {S(1), ScalarTraits<S>::zero(), S(3), S(2)}};
  return g;
}

// {pi_T}_{T=0..cap} plus always-defect; pi_T defects its first T rounds no
// matter what it sees, then cooperates forever. pi_0 is always-cooperate.
template <class S>
std::vector<PolicyPtr<S>> switch_policy_class(const Space& sp, int cap) {
  if (cap < 0) throw SupportViolation("switch_policy_class needs cap >= 0");
  std::vector<PolicyPtr<S>> cls;
  for (int t = 0; t <= cap; ++t) {
    auto fn = [t, n = sp.actions.size()](const History& h) {
      return Dist<S>::point(n, h.length() < t ? kDefect : kCooperate);
    };
    cls.push_back(std::make_shared<FnPolicy<S>>(sp, fn,
                                                "switch" + std::to_string(t)));
  }
  cls.push_back(constant_policy<S>(sp, kDefect, "all_d"));
  return cls;
}

// w-weighted likelihood of h's action string under the class,
// m(h) = sum_i w_i prod_t pi_i(a_t | h_<t); percepts are inputs only
template <class S>
S class_mass(const std::vector<PolicyPtr<S>>& cls, const Dist<S>& tilde_w,
             const History& h) {
  if (tilde_w.size() != static_cast<int>(cls.size())) {
    throw SupportViolation("class_mass: one weight per policy");
  }
  S acc = ScalarTraits<S>::zero();
  for (size_t i = 0; i < cls.size(); ++i) {
    if (tilde_w[static_cast<int>(i)] == 0) continue;
    S l = ScalarTraits<S>::one();
    History pre;
    for (int t = 0; t < h.length() && l != 0; ++t) {
      l = l * cls[i]->act(pre)[h.turn(t).action];
      pre.push(h.turn(t).action, h.turn(t).percept);
    }
    acc += tilde_w[static_cast<int>(i)] * l;
  }
  return acc;
}

// m(h a): consistent with h and then playing a
template <class S>
S class_mass_act(const std::vector<PolicyPtr<S>>& cls, const Dist<S>& tilde_w,
                 const History& h, int a) {
  S acc = ScalarTraits<S>::zero();
  for (size_t i = 0; i < cls.size(); ++i) {
    if (tilde_w[static_cast<int>(i)] == 0) continue;
    S l = ScalarTraits<S>::one();
    History pre;
    for (int t = 0; t < h.length() && l != 0; ++t) {
      l = l * cls[i]->act(pre)[h.turn(t).action];
      pre.push(h.turn(t).action, h.turn(t).percept);
    }
    if (l == 0) continue;
    acc += tilde_w[static_cast<int>(i)] * l * cls[i]->act(h)[a];
  }
  return acc;
}

// Percept codec for a symmetric two-player repeated game under perfect
// monitoring. Both seats share one view space; a percept decodes to the other
// seat's action, and a history mirrors into the seat across the table.
template <class S>
struct PdCodec {
  NormalFormGame<S> game;
  PersonalGameView<S> view;  // seat 0's; seat 1's is identical by symmetry
  JointIndexer idx;
  std::vector<int> co_action;  // percept index -> other seat's action

  static PdCodec build(const NormalFormGame<S>& g, const S& gamma) {
    g.validate();
    if (g.players() != 2) {
      throw SupportViolation(g.name + ": codec needs two players");
    }
    JointIndexer idx = g.indexer();
    for (int x = 0; x < idx.size(0); ++x) {
      for (int y = 0; y < idx.size(1); ++y) {
        if (!(g.payoff[1][idx.flat({x, y})] == g.payoff[0][idx.flat({y, x})])) {
          throw SupportViolation(g.name + ": codec needs a symmetric game");
        }
      }
    }
    PdCodec c;
    c.game = g;
    c.view = personal_game_view(g, 0, gamma);
    if (!(personal_game_view(g, 1, gamma).space == c.view.space)) {
      throw SupportViolation(g.name + ": seat views disagree");
    }
    c.idx = idx;
    c.co_action.assign(c.view.space.percepts.size(), -1);
    for (int f = 0; f < idx.count(); ++f) {
      c.co_action[c.view.percept_of_joint[f]] = idx.unflat(f)[1];
    }
    return c;
  }

  int joint_percept(int own, int co) const {
    return view.percept_of_joint[idx.flat({own, co})];
  }

  // a turn whose payoff component contradicts its decoded joint has no mass
  // under any policy pairing
  bool consistent(const History& h) const {
    for (int t = 0; t < h.length(); ++t) {
      const Turn& turn = h.turn(t);
      if (turn.percept != joint_percept(turn.action, co_action[turn.percept])) {
        return false;
      }
    }
    return true;
  }

  History mirror(const History& h) const {
    History m;
    for (int t = 0; t < h.length(); ++t) {
      int b = co_action[h.turn(t).percept];
      m.push(b, joint_percept(b, h.turn(t).action));
    }
    return m;
  }
};

// nu_pi: the other seat runs pi on its mirrored history
template <class S>
EnvironmentPtr<S> opponent_environment(const PdCodec<S>& c, PolicyPtr<S> pi) {
  auto fn = [c, pi](const History& h, int a) {
    Dist<S> row = pi->act(c.mirror(h));
    Dist<S> d(c.view.space.percepts.size());
    for (int b = 0; b < row.size(); ++b) {
      if (row[b] == 0) continue;
      d[c.joint_percept(a, b)] += row[b];
    }
    return d;
  };
  return std::make_shared<FnEnvironment<S>>(c.view.space, fn,
                                             "nu(" + pi->name() + ")");
}

// nu_copy: the other seat plays this seat's current action
template <class S>
EnvironmentPtr<S> copy_environment(const PdCodec<S>& c) {
  auto fn = [c](const History&, int a) {
    Dist<S> d(c.view.space.percepts.size());
    d[c.joint_percept(a, a)] = ScalarTraits<S>::one();
    return d;
  };
  return std::make_shared<FnEnvironment<S>>(c.view.space, fn, "nu_copy");
}

template <class S>
PolicyPtr<S> uniform_seat_policy(const Space& sp) {
  auto fn = [n = sp.actions.size()](const History&) {
    return Dist<S>::uniform(n);
  };
  return std::make_shared<FnPolicy<S>>(sp, fn, "uniform_seat");
}

namespace scenarios_detail {

template <class S>
void check_class_prior(const std::vector<PolicyPtr<S>>& cls,
                       const Dist<S>& tilde_w, const S& alpha) {
  if (cls.empty()) throw SupportViolation("empty policy class");
  if (tilde_w.size() != static_cast<int>(cls.size())) {
    throw SupportViolation("one weight per policy");
  }
  tilde_w.validate(0.0);
  if (!(tilde_w.total() == ScalarTraits<S>::one())) {
    throw SupportViolation("tilde_w must be proper");
  }
  if (alpha < 0 || alpha > ScalarTraits<S>::one()) {
    throw SupportViolation("alpha outside [0, 1]");
  }
}

}  // namespace scenarios_detail

// Joint-action universes lambda_{pi, pi'} = pi interacting with nu_pi', one
// per ordered pair, weighted alpha w(pi) on the twin diagonal plus
// (1 - alpha) w(pi) w(pi') everywhere.
template <class S>
std::pair<HypothesisClass<S>, Prior<S>> twin_pd_prior(
    const PdCodec<S>& c, const std::vector<PolicyPtr<S>>& cls,
    const Dist<S>& tilde_w, const S& alpha) {
  scenarios_detail::check_class_prior(cls, tilde_w, alpha);
  std::vector<EnvironmentPtr<S>> envs;
  envs.reserve(cls.size());
  for (const auto& pi : cls) envs.push_back(opponent_environment(c, pi));
  HypothesisClass<S> hc;
  Prior<S> prior;
  for (size_t i = 0; i < cls.size(); ++i) {
    for (size_t j = 0; j < cls.size(); ++j) {
      hc.members.push_back(interact<S>(cls[i], envs[j]));
      hc.labels.push_back(cls[i]->name() + "&" + cls[j]->name());
      S w = (ScalarTraits<S>::one() - alpha) * tilde_w[static_cast<int>(i)] *
            tilde_w[static_cast<int>(j)];
      if (i == j) w += alpha * tilde_w[static_cast<int>(i)];
      prior.w.push_back(w);
    }
  }
  return {std::move(hc), std::move(prior)};
}

// The twin prior's conditional completion. Wherever the mixture has mass the
// formulas below are its exact ratios. At a dead own action the limit taken
// is the one the twin construction singles out: smoothing both seats with the
// same noise makes deviations happen in lockstep, so the twin block moves its
// mass onto the mirrored deviation while the independent block keeps its
// opponent marginal. On a symmetric on-path history this reduces to
//   p(b | h, a) = [alpha 1{b=a} + (1-alpha) m(h b)] / [alpha + (1-alpha) m(h)].
template <class S>
class TwinPdCompletion final : public Completion<S> {
 public:
  TwinPdCompletion(PdCodec<S> c, std::vector<PolicyPtr<S>> cls, Dist<S> tilde_w,
                   S alpha)
      : c_(std::move(c)), cls_(std::move(cls)), tilde_w_(std::move(tilde_w)),
        alpha_(std::move(alpha)) {
    scenarios_detail::check_class_prior(cls_, tilde_w_, alpha_);
  }

  Dist<S> act(const History& h) const override {
    const int n_act = c_.view.space.actions.size();
    if (!c_.consistent(h)) {
      throw UndefinedConditional("twin completion: percepts off the codec");
    }
    Factors f = factors(h);
    std::vector<S> num(n_act, ScalarTraits<S>::zero());
    S z = ScalarTraits<S>::zero();
    for (int a = 0; a < n_act; ++a) {
      for (size_t i = 0; i < cls_.size(); ++i) {
        S pa = cls_[i]->act(h)[a];
        if (pa == 0) continue;
        num[a] += alpha_ * f.w_lh[i] * f.lm[i] * pa;
        num[a] += (ScalarTraits<S>::one() - alpha_) * f.w_lh[i] * pa * f.m_m;
      }
      z += num[a];
    }
    Dist<S> d(n_act);
    if (z == 0) return Dist<S>::uniform(n_act);  // off-support, never ratioed
    for (int a = 0; a < n_act; ++a) d[a] = num[a] / z;
    return d;
  }

  Dist<S> per(const History& h, int a) const override {
    const int n_act = c_.view.space.actions.size();
    if (!c_.consistent(h)) {
      throw UndefinedConditional("twin completion: percepts off the codec");
    }
    Factors f = factors(h);
    std::vector<S> num(n_act, ScalarTraits<S>::zero());
    S z = ScalarTraits<S>::zero();
    S m_ha = ScalarTraits<S>::zero();
    for (size_t i = 0; i < cls_.size(); ++i) {
      m_ha += f.w_lh[i] * cls_[i]->act(h)[a];
    }
    for (int b = 0; b < n_act; ++b) {
      S m_mb = ScalarTraits<S>::zero();
      for (size_t i = 0; i < cls_.size(); ++i) {
        S pb = cls_[i]->act(f.hm)[b];
        if (pb == 0) continue;
        m_mb += tilde_w_[static_cast<int>(i)] * f.lm[i] * pb;
        num[b] += alpha_ * f.w_lh[i] * f.lm[i] * cls_[i]->act(h)[a] * pb;
      }
      num[b] += (ScalarTraits<S>::one() - alpha_) * m_ha * m_mb;
      z += num[b];
    }
    if (z == 0) {
      // lockstep limit at a dead own action
      S m_sym = ScalarTraits<S>::zero();
      for (size_t i = 0; i < cls_.size(); ++i) m_sym += f.w_lh[i] * f.lm[i];
      S one_m = ScalarTraits<S>::one() - alpha_;
      for (int b = 0; b < n_act; ++b) {
        S m_mb = ScalarTraits<S>::zero();
        for (size_t i = 0; i < cls_.size(); ++i) {
          m_mb +=
              tilde_w_[static_cast<int>(i)] * f.lm[i] * cls_[i]->act(f.hm)[b];
        }
        num[b] = one_m * f.m_h * m_mb;
        if (b == a) num[b] += alpha_ * m_sym;
        z += num[b];
      }
      if (z == 0) {
        throw UndefinedConditional("twin completion: both blocks refuted");
      }
    }
    Dist<S> d(c_.view.space.percepts.size());
    for (int b = 0; b < n_act; ++b) {
      if (num[b] == 0) continue;
      d[c_.joint_percept(a, b)] += num[b] / z;
    }
    return d;
  }

 private:
  struct Factors {
    History hm;
    std::vector<S> w_lh;  // w_i * L(pi_i, h)
    std::vector<S> lm;    // L(pi_i, mirror(h))
    S m_h, m_m;
  };

  Factors factors(const History& h) const {
    Factors f;
    f.hm = c_.mirror(h);
    f.w_lh.resize(cls_.size());
    f.lm.resize(cls_.size());
    f.m_h = ScalarTraits<S>::zero();
    f.m_m = ScalarTraits<S>::zero();
    for (size_t i = 0; i < cls_.size(); ++i) {
      f.w_lh[i] = tilde_w_[static_cast<int>(i)] * likelihood(*cls_[i], h);
      f.lm[i] = likelihood(*cls_[i], f.hm);
      f.m_h += f.w_lh[i];
      f.m_m += tilde_w_[static_cast<int>(i)] * f.lm[i];
    }
    return f;
  }

  static S likelihood(const Policy<S>& pi, const History& h) {
    S l = ScalarTraits<S>::one();
    History pre;
    for (int t = 0; t < h.length() && l != 0; ++t) {
      l = l * pi.act(pre)[h.turn(t).action];
      pre.push(h.turn(t).action, h.turn(t).percept);
    }
    return l;
  }

  PdCodec<S> c_;
  std::vector<PolicyPtr<S>> cls_;
  Dist<S> tilde_w_;
  S alpha_;
};

// defect-path mass m((D,D)^k)
template <class S>
History defect_path(const PdCodec<S>& c, int k) {
  History h;
  for (int t = 0; t < k; ++t) {
    h.push(kDefect, c.joint_percept(kDefect, kDefect));
  }
  return h;
}

template <class S>
S m_defect(const PdCodec<S>& c, const std::vector<PolicyPtr<S>>& cls,
           const Dist<S>& tilde_w, int k) {
  return class_mass(cls, tilde_w, defect_path(c, k));
}

// Main-text sufficiency variant: the largest class mass over any reachable
// history of length t. Onset computations below use the defect-path masses;
// this one exists because the two only agree on defect-dominated classes.
template <class S>
S m_star(const PdCodec<S>& c, const std::vector<PolicyPtr<S>>& cls,
         const Dist<S>& tilde_w, int t) {
  struct Walker {
    const PdCodec<S>& c;
    const std::vector<PolicyPtr<S>>& cls;
    const Dist<S>& tilde_w;
    int t;
    S best = ScalarTraits<S>::zero();
    void walk(History& h) {
      S m = class_mass(cls, tilde_w, h);
      if (m == 0) return;
      if (h.length() == t) {
        if (m > best) best = m;
        return;
      }
      for (int a = 0; a < c.view.space.actions.size(); ++a) {
        for (int b = 0; b < c.view.space.actions.size(); ++b) {
          h.push(a, c.joint_percept(a, b));
          walk(h);
          h.pop();
        }
      }
    }
  };
  History h;
  Walker w{c, cls, tilde_w, t};
  w.walk(h);
  return w.best;
}

// Smallest k with alpha > m_k / (1 + m_k), else nullopt (defect forever).
// Requires the defect-path masses to be constant from stable_k on;
// switch_policy_class(cap) stabilizes at cap + 1.
template <class S>
std::optional<int> cooperation_onset(const PdCodec<S>& c,
                                     const std::vector<PolicyPtr<S>>& cls,
                                     const Dist<S>& tilde_w, const S& alpha,
                                     int stable_k) {
  for (int k = 0; k <= stable_k; ++k) {
    S m = m_defect(c, cls, tilde_w, k);
    if (alpha * (ScalarTraits<S>::one() + m) > m) return k;
  }
  return std::nullopt;
}

// ---- electable belief bundles ----

template <class S>
MixturePtr<S> twin_pd_belief(const PdCodec<S>& c,
                             const std::vector<PolicyPtr<S>>& cls,
                             const Dist<S>& tilde_w, const S& alpha) {
  auto [hc, prior] = twin_pd_prior(c, cls, tilde_w, alpha);
  auto rho = make_mixture(std::move(hc), std::move(prior), "twin_pd");
  rho->set_completion(
      std::make_shared<TwinPdCompletion<S>>(c, cls, tilde_w, alpha));
  return rho;
}

// decoupled formulation: one shared fully-mixing own policy, environments
// nu_copy (weight alpha) and nu_pi (weight (1-alpha) w(pi)). Own-action
// factors cancel in every conditional, so this plans exactly like the
// environment mixture alpha nu_copy + (1-alpha) sum_pi w(pi) nu_pi.
template <class S>
std::pair<HypothesisClass<S>, Prior<S>> copy_class(
    const PdCodec<S>& c, const std::vector<PolicyPtr<S>>& cls,
    const Dist<S>& tilde_w, const S& alpha) {
  scenarios_detail::check_class_prior(cls, tilde_w, alpha);
  PolicyPtr<S> own = uniform_seat_policy<S>(c.view.space);
  HypothesisClass<S> hc;
  Prior<S> prior;
  hc.members.push_back(interact<S>(own, copy_environment(c)));
  hc.labels.push_back("copy");
  prior.w.push_back(alpha);
  for (size_t j = 0; j < cls.size(); ++j) {
    hc.members.push_back(interact<S>(own, opponent_environment(c, cls[j])));
    hc.labels.push_back("model(" + cls[j]->name() + ")");
    prior.w.push_back((ScalarTraits<S>::one() - alpha) *
                      tilde_w[static_cast<int>(j)]);
  }
  return {std::move(hc), std::move(prior)};
}

template <class S>
MixturePtr<S> copy_mixture(const PdCodec<S>& c,
                           const std::vector<PolicyPtr<S>>& cls,
                           const Dist<S>& tilde_w, const S& alpha) {
  auto [hc, prior] = copy_class(c, cls, tilde_w, alpha);
  return make_mixture(std::move(hc), std::move(prior), "copy_pd");
}

// fully supported twin variant for the similarity diagnostics: both factor
// kinds mixed toward uniform, factor objects shared across pairs so
// factor_decoupled sees the coupling structure
template <class S>
std::pair<HypothesisClass<S>, Prior<S>> twin_pd_smoothed(
    const PdCodec<S>& c, const std::vector<PolicyPtr<S>>& cls,
    const Dist<S>& tilde_w, const S& alpha, const S& noise) {
  scenarios_detail::check_class_prior(cls, tilde_w, alpha);
  if (noise <= 0 || noise > ScalarTraits<S>::one()) {
    throw SupportViolation("smoothing noise outside (0, 1]");
  }
  std::vector<PolicyPtr<S>> pis;
  std::vector<EnvironmentPtr<S>> nus;
  for (const auto& pi : cls) {
    pis.push_back(smooth_policy(pi, noise));
    nus.push_back(smooth_environment(opponent_environment(c, pi), noise));
  }
  HypothesisClass<S> hc;
  Prior<S> prior;
  for (size_t i = 0; i < cls.size(); ++i) {
    for (size_t j = 0; j < cls.size(); ++j) {
      hc.members.push_back(interact<S>(pis[i], nus[j]));
      hc.labels.push_back(pis[i]->name() + "&" + nus[j]->name());
      S w = (ScalarTraits<S>::one() - alpha) * tilde_w[static_cast<int>(i)] *
            tilde_w[static_cast<int>(j)];
      if (i == j) w += alpha * tilde_w[static_cast<int>(i)];
      prior.w.push_back(w);
    }
  }
  return {std::move(hc), std::move(prior)};
}

// ---- assembled scenarios ----

template <class S>
struct TwinPdScenario {
  NormalFormGame<S> game;
  PdCodec<S> codec;
  std::vector<PersonalGameView<S>> views;
  std::vector<PolicyPtr<S>> policies;
  Dist<S> tilde_w;
  S alpha;
  int switch_cap = 0;
  MixturePtr<S> belief;  // one object, shared by both seats
  MultiAgentEnvPtr<S> stage;

  S m_defect_k(int k) const {
    return m_defect(codec, policies, tilde_w, k);
  }
  std::optional<int> onset() const {
    return cooperation_onset(codec, policies, tilde_w, alpha, switch_cap + 1);
  }
  std::vector<DiscountedTask<S>> tasks() const {
    return {views[0].task, views[1].task};
  }
};

template <class S>
TwinPdScenario<S> make_twin_pd(const S& alpha, int switch_cap) {
  TwinPdScenario<S> sc;
  sc.game = prisoner_dilemma<S>();
  sc.codec = PdCodec<S>::build(sc.game, ScalarTraits<S>::zero());
  sc.views = personal_game_views(sc.game, ScalarTraits<S>::zero());
  sc.policies = switch_policy_class<S>(sc.codec.view.space, switch_cap);
  sc.tilde_w = Dist<S>::uniform(static_cast<int>(sc.policies.size()));
  sc.alpha = alpha;
  sc.switch_cap = switch_cap;
  auto t = sc.onset();
  if (t.has_value() && *t > switch_cap) {
    throw SupportViolation(
        "twin_pd: cooperation onset exceeds the switch cap, the realized "
        "path would leave the class");
  }
  sc.belief = twin_pd_belief(sc.codec, sc.policies, sc.tilde_w, alpha);
  sc.stage = game_multiagent_env(sc.game, sc.views);
  return sc;
}

template <class S>
struct CopyPdScenario {
  NormalFormGame<S> game;
  PdCodec<S> codec;
  std::vector<PersonalGameView<S>> views;
  std::vector<PolicyPtr<S>> policies;
  Dist<S> tilde_w;
  S alpha;
  int switch_cap = 0;
  MixturePtr<S> belief;
  MultiAgentEnvPtr<S> stage;

  std::vector<DiscountedTask<S>> tasks() const {
    return {views[0].task, views[1].task};
  }
};

template <class S>
CopyPdScenario<S> make_copy_pd(const S& alpha, int switch_cap) {
  CopyPdScenario<S> sc;
  sc.game = prisoner_dilemma<S>();
  sc.codec = PdCodec<S>::build(sc.game, ScalarTraits<S>::zero());
  sc.views = personal_game_views(sc.game, ScalarTraits<S>::zero());
  sc.policies = switch_policy_class<S>(sc.codec.view.space, switch_cap);
  sc.tilde_w = Dist<S>::uniform(static_cast<int>(sc.policies.size()));
  sc.alpha = alpha;
  sc.switch_cap = switch_cap;
  sc.belief = copy_mixture(sc.codec, sc.policies, sc.tilde_w, alpha);
  sc.stage = game_multiagent_env(sc.game, sc.views);
  return sc;
}

}  // namespace scenarios
}  // namespace embayes

#endif  // EMBAYES_SCENARIOS_PD_HPP_
