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

#ifndef EMBAYES_EQUILIBRIA_DOGMATIC_HPP_
#define EMBAYES_EQUILIBRIA_DOGMATIC_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/bayes/mixture.hpp"
#include "embayes/equilibria/checkers.hpp"
#include "embayes/planning/value.hpp"

namespace embayes {

// Universe that punishes any departure from a reference policy: while actions
// follow pi, actions and percepts are uniform over the full alphabets; from
// the first deviating turn onward percepts are confined, uniformly, to the
// zero-reward set, so every policy earns nothing there. Actions stay uniform
// throughout, which keeps the action marginal exactly 1/|A| at every node.
template <class S>
class DogmaticUniverse : public Universe<S> {
 public:
  DogmaticUniverse(PolicyPtr<S> pi, std::vector<int> zero_percepts,
                   std::string name = "dogmatic")
      : pi_(std::move(pi)), name_(std::move(name)) {
    const Space& sp = pi_->space();
    if (zero_percepts.empty()) {
      throw SupportViolation(name_ + ": needs a zero-reward percept");
    }
    in_zero_.assign(sp.percepts.size(), false);
    for (int e : zero_percepts) {
      if (e < 0 || e >= sp.percepts.size()) {
        throw AlphabetMismatch(name_ + ": zero-reward percept out of range");
      }
      in_zero_[e] = true;
      ++zero_count_;
    }
  }

  const Space& space() const override { return pi_->space(); }
  int depth() const override { return pi_->depth(); }
  std::string name() const override { return name_; }

  S prefix(const History& h) const override {
    this->check_depth(h);
    const Space& sp = space();
    S m = ScalarTraits<S>::one();
    bool deviated = false;
    History pre;
    for (int t = 0; t < h.length(); ++t) {
      const Turn& turn = h.turn(t);
      m = m / S(sp.actions.size());
      if (!deviated && turn.action != reference_action(pre)) deviated = true;
      if (deviated) {
        if (!in_zero_[turn.percept]) return ScalarTraits<S>::zero();
        m = m / S(zero_count_);
      } else {
        m = m / S(sp.percepts.size());
      }
      pre.push(turn.action, turn.percept);
    }
    return m;
  }

  S prefix_act(const History& h, int a) const override {
    this->check_depth(h, 1);
    (void)a;
    return prefix(h) / S(space().actions.size());
  }

  bool has_product_form() const override { return true; }

  Dist<S> product_action(const History&) const override {
    return Dist<S>::uniform(space().actions.size());
  }

  Dist<S> product_percept(const History& h, int a) const override {
    if (deviated(h) || a != reference_action(h)) {
      Dist<S> d(space().percepts.size());
      for (int e = 0; e < d.size(); ++e) {
        if (in_zero_[e]) d[e] = ScalarTraits<S>::ratio(1, zero_count_);
      }
      return d;
    }
    return Dist<S>::uniform(space().percepts.size());
  }

 private:
  int reference_action(const History& h) const {
    Dist<S> d = pi_->act(h);
    for (int a = 0; a < d.size(); ++a) {
      if (d[a] == ScalarTraits<S>::one()) return a;
    }
    throw SupportViolation(name_ + ": reference policy must be deterministic");
  }

  bool deviated(const History& h) const {
    History pre;
    for (int t = 0; t < h.length(); ++t) {
      if (h.turn(t).action != reference_action(pre)) return true;
      pre.push(h.turn(t).action, h.turn(t).percept);
    }
    return false;
  }

  PolicyPtr<S> pi_;
  std::vector<bool> in_zero_;
  int zero_count_ = 0;
  std::string name_;
};

// Three-member belief: the truth pi^mu with weight 1-eps-eps^2, the dogmatic
// punisher with weight eps, and the uniform-noise universe with weight eps^2.
// The truth is materialized as a table over its support, so with eps = 0 a
// deviation step has no conditional at all and planning against the mixture
// raises UndefinedConditional; any eps > 0 gives every history positive mass
// and the exact ratios take over. The zero-reward percept set comes from the
// task; it must be nonempty for the punisher to exist.
template <class S>
MixturePtr<S> dogmatic_mixture(PolicyPtr<S> pi, EnvironmentPtr<S> mu,
                               const S& eps, const DiscountedTask<S>& task,
                               int depth,
                               std::string name = "dogmatic_mixture") {
  const Space& sp = pi->space();
  task.validate(sp);
  std::vector<int> zero;
  for (int e = 0; e < sp.percepts.size(); ++e) {
    if (task.reward[e] == 0) zero.push_back(e);
  }
  UniversePtr<S> joint = interact<S>(pi, mu);
  auto act = [joint](const History& h) { return joint->cond_action(h); };
  auto per = [joint](const History& h, int a) {
    return joint->cond_percept(h, a);
  };
  UniversePtr<S> truth = TableUniverse<S>::from_conditionals(
      sp, depth, act, per, pi->name() + "^" + mu->name() + "_table");
  UniversePtr<S> dog = std::make_shared<DogmaticUniverse<S>>(
      pi, std::move(zero), name + "_punisher");
  int na = sp.actions.size();
  int ne = sp.percepts.size();
  UniversePtr<S> rnd = interact<S>(
      std::make_shared<FnPolicy<S>>(
          sp, [na](const History&) { return Dist<S>::uniform(na); },
          "uniform_policy"),
      std::make_shared<FnEnvironment<S>>(
          sp, [ne](const History&, int) { return Dist<S>::uniform(ne); },
          "uniform_env"));
  HypothesisClass<S> cls;
  cls.members = {std::move(truth), std::move(dog), std::move(rnd)};
  cls.labels = {"truth", "dogmatic", "random"};
  Prior<S> prior;
  prior.w = {ScalarTraits<S>::one() - eps - eps * eps, eps, eps * eps};
  return make_mixture<S>(std::move(cls), std::move(prior), std::move(name));
}

// eps-scaled slack certified by the construction: a deviation is believed to
// lead to the punisher with posterior 1/(1+eps), so its value is at most
// eps/(1+eps) ~ eps; the factor leaves room for the on-path perturbation the
// other mixture members add.
inline constexpr double kDogmaticEpsSlackFactor = 5.0;

template <class S>
Verdict dogmatic_best_response_check(PolicyPtr<S> pi, EnvironmentPtr<S> mu,
                                     const S& eps,
                                     const DiscountedTask<S>& task,
                                     const PlanBudget& budget) {
  MixturePtr<S> rho = dogmatic_mixture(pi, mu, eps, task, budget.horizon);
  double gap =
      equilibria_detail::br_gap(*rho, task, pi, History(), budget);
  double tol = budget.br_slack +
               truncation_certificate(task, budget.horizon) +
               kDogmaticEpsSlackFactor * to_double<S>(eps);
  Verdict v;
  v.tolerances["value"] = tol;
  v.tolerances["eps"] = to_double<S>(eps);
  if (gap > tol) v.fail(0, "value", "root", gap);
  return v;
}

}  // namespace embayes

#endif  // EMBAYES_EQUILIBRIA_DOGMATIC_HPP_
