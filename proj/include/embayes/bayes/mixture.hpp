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

#ifndef EMBAYES_BAYES_MIXTURE_HPP_
#define EMBAYES_BAYES_MIXTURE_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/core/universe.hpp"

namespace embayes {

// finite hypothesis class over a shared interaction space
template <class S>
struct HypothesisClass {
  std::vector<UniversePtr<S>> members;
  std::vector<std::string> labels;

  const Space& space() const { return members.at(0)->space(); }

  int depth() const {
    int d = kUnboundedDepth;
    for (const auto& m : members) d = std::min(d, m->depth());
    return d;
  }

  void validate() const {
    if (members.empty()) throw SupportViolation("empty hypothesis class");
    if (labels.size() != members.size()) {
      throw SupportViolation("one label per member");
    }
    for (const auto& m : members) {
      if (!(m->space() == space())) {
        throw AlphabetMismatch("class members on different spaces");
      }
    }
  }
};

// prior weights; semipriors (total < 1) are accepted
template <class S>
struct Prior {
  std::vector<S> w;

  void validate(int class_size) const {
    if (static_cast<int>(w.size()) != class_size) {
      throw SupportViolation("prior size mismatch");
    }
    S total = ScalarTraits<S>::zero();
    for (const auto& x : w) {
      if (x < 0) throw SupportViolation("negative prior weight");
      total += x;
    }
    if (to_double<S>(total) > 1.0 + 1e-9) {
      throw SupportViolation("prior mass exceeds one");
    }
    if (total == 0) throw SupportViolation("prior has no mass");
  }
};

// Embedded Bayes mixture rho(.) = sum_i w_i lambda_i(.). Posteriors update on
// the agent's own actions as well as percepts. At a node with zero predictive
// mass the conditional falls back to an attached completion if present, else
// to carrying the posterior weights unchanged across the dead step and mixing
// the members' product-form conditionals (the smoothed-prior limit); members
// without a product form make that step undefined.
template <class S>
class MixtureUniverse : public Universe<S> {
 public:
  MixtureUniverse(HypothesisClass<S> hclass, Prior<S> prior,
                  std::string name = "mixture")
      : class_(std::move(hclass)), prior_(std::move(prior)),
        name_(std::move(name)) {
    class_.validate();
    prior_.validate(static_cast<int>(class_.members.size()));
  }

  const Space& space() const override { return class_.space(); }
  int depth() const override { return class_.depth(); }
  std::string name() const override { return name_; }

  int size() const { return static_cast<int>(class_.members.size()); }
  const HypothesisClass<S>& hypothesis_class() const { return class_; }
  const Prior<S>& prior() const { return prior_; }

  S prefix(const History& h) const override {
    this->check_depth(h);
    S m = ScalarTraits<S>::zero();
    for (int i = 0; i < size(); ++i) {
      if (prior_.w[i] == 0) continue;
      m += prior_.w[i] * class_.members[i]->prefix(h);
    }
    return m;
  }

  S prefix_act(const History& h, int a) const override {
    this->check_depth(h, 1);
    S m = ScalarTraits<S>::zero();
    for (int i = 0; i < size(); ++i) {
      if (prior_.w[i] == 0) continue;
      m += prior_.w[i] * class_.members[i]->prefix_act(h, a);
    }
    return m;
  }

  // closed-form posterior w(lambda | h) = w(lambda) lambda(h) / rho(h)
  std::vector<S> posterior(const History& h) const {
    S denom = prefix(h);
    if (denom == 0) {
      throw ZeroPredictiveMass(name_ + ": posterior at zero-mass history");
    }
    std::vector<S> w(size());
    for (int i = 0; i < size(); ++i) {
      w[i] = prior_.w[i] == 0
                 ? ScalarTraits<S>::zero()
                 : prior_.w[i] * class_.members[i]->prefix(h) / denom;
    }
    return w;
  }

  // posterior with the carry rule applied across zero-mass steps; equals
  // posterior(h) whenever rho(h) > 0
  std::vector<S> posterior_carried(const History& h) const {
    std::vector<S> w = prior_.w;
    normalize(&w);
    History pre;
    for (int t = 0; t < h.length(); ++t) {
      carry_step(&w, pre, h.turn(t).action, h.turn(t).percept);
      pre.push(h.turn(t).action, h.turn(t).percept);
    }
    return w;
  }

  Dist<S> cond_action(const History& h) const override {
    this->check_depth(h, 1);
    // singleton class without a completion: the prefix ratio and the carried
    // posterior both reduce to the lone member's conditional, so skip the
    // prefix products (planners hit this path once per tree node)
    if (size() == 1 && prior_.w[0] != 0 && !this->completion()) {
      return class_.members[0]->cond_action(h);
    }
    if (prefix(h) > 0) return Universe<S>::cond_action(h);
    if (this->completion()) return this->completion()->act(h);
    std::vector<S> w = posterior_carried(h);
    Dist<S> d(space().actions.size());
    mix_actions(w, h, &d);
    return d;
  }

  Dist<S> cond_percept(const History& h, int a) const override {
    this->check_depth(h, 1);
    if (size() == 1 && prior_.w[0] != 0 && !this->completion()) {
      return class_.members[0]->cond_percept(h, a);
    }
    if (prefix_act(h, a) > 0) return Universe<S>::cond_percept(h, a);
    if (this->completion()) return this->completion()->per(h, a);
    // weights after conditioning on h and then on the dead action a
    std::vector<S> w = posterior_carried(h);
    step_action(&w, h, a);
    Dist<S> d(space().percepts.size());
    mix_percepts(w, h, a, &d);
    return d;
  }

 private:
  static void normalize(std::vector<S>* w) {
    S total = ScalarTraits<S>::zero();
    for (const auto& x : *w) total += x;
    if (total == 0) return;
    for (auto& x : *w) x = x / total;
  }

  void mix_actions(const std::vector<S>& w, const History& h,
                   Dist<S>* d) const {
    for (int i = 0; i < size(); ++i) {
      if (w[i] == 0) continue;
      Dist<S> mi = class_.members[i]->cond_action(h);
      for (int a = 0; a < d->size(); ++a) (*d)[a] += w[i] * mi[a];
    }
  }

  void mix_percepts(const std::vector<S>& w, const History& h, int a,
                    Dist<S>* d) const {
    for (int i = 0; i < size(); ++i) {
      if (w[i] == 0) continue;
      Dist<S> mi = class_.members[i]->cond_percept(h, a);
      for (int e = 0; e < d->size(); ++e) (*d)[e] += w[i] * mi[e];
    }
  }

  // one action conditioning step with carry-on-zero
  void step_action(std::vector<S>* w, const History& h, int a) const {
    S denom = ScalarTraits<S>::zero();
    std::vector<S> next(size(), ScalarTraits<S>::zero());
    for (int i = 0; i < size(); ++i) {
      if ((*w)[i] == 0) continue;
      S li = class_.members[i]->cond_action(h)[a];
      next[i] = (*w)[i] * li;
      denom += next[i];
    }
    if (denom == 0) return;  // carry unchanged
    for (int i = 0; i < size(); ++i) (*w)[i] = next[i] / denom;
  }

  void step_percept(std::vector<S>* w, const History& h, int a, int e) const {
    S denom = ScalarTraits<S>::zero();
    std::vector<S> next(size(), ScalarTraits<S>::zero());
    for (int i = 0; i < size(); ++i) {
      if ((*w)[i] == 0) continue;
      S li = class_.members[i]->cond_percept(h, a)[e];
      next[i] = (*w)[i] * li;
      denom += next[i];
    }
    if (denom == 0) return;
    for (int i = 0; i < size(); ++i) (*w)[i] = next[i] / denom;
  }

  void carry_step(std::vector<S>* w, const History& pre, int a, int e) const {
    step_action(w, pre, a);
    step_percept(w, pre, a, e);
  }

  HypothesisClass<S> class_;
  Prior<S> prior_;
  std::string name_;
};

template <class S>
using MixturePtr = std::shared_ptr<MixtureUniverse<S>>;

template <class S>
MixturePtr<S> make_mixture(HypothesisClass<S> hclass, Prior<S> prior,
                           std::string name = "mixture") {
  return std::make_shared<MixtureUniverse<S>>(std::move(hclass),
                                              std::move(prior),
                                              std::move(name));
}

// Immutable belief snapshot for realized interaction. Updates follow the
// embedded recursion: actions rescale by lambda(a|h), percepts by
// lambda(e|ha). Realized symbols with zero predictive mass are errors here;
// hypothetical planning queries go through the mixture's conditionals
// instead.
template <class S>
class BeliefState {
 public:
  BeliefState(MixturePtr<S> mixture, std::vector<S> weights, History h)
      : mixture_(std::move(mixture)), w_(std::move(weights)),
        h_(std::move(h)) {}

  static BeliefState initial(MixturePtr<S> mixture) {
    std::vector<S> w = mixture->prior().w;
    S total = ScalarTraits<S>::zero();
    for (const auto& x : w) total += x;
    for (auto& x : w) x = x / total;
    return BeliefState(std::move(mixture), std::move(w), History());
  }

  const std::vector<S>& weights() const { return w_; }
  const History& history() const { return h_; }
  const MixturePtr<S>& mixture() const { return mixture_; }

  // rho(a | h) under the current posterior
  Dist<S> predict_action() const {
    Dist<S> d(mixture_->space().actions.size());
    for (int i = 0; i < mixture_->size(); ++i) {
      if (w_[i] == 0) continue;
      Dist<S> mi = mixture_->hypothesis_class().members[i]->cond_action(h_);
      for (int a = 0; a < d.size(); ++a) d[a] += w_[i] * mi[a];
    }
    return d;
  }

  // rho(e | h a) under the action-updated posterior
  Dist<S> predict_percept(int a) const {
    BeliefState after = update_on_action(a);
    Dist<S> d(mixture_->space().percepts.size());
    for (int i = 0; i < mixture_->size(); ++i) {
      if (after.w_[i] == 0) continue;
      Dist<S> mi =
          mixture_->hypothesis_class().members[i]->cond_percept(h_, a);
      for (int e = 0; e < d.size(); ++e) d[e] += after.w_[i] * mi[e];
    }
    return d;
  }

  BeliefState update_on_action(int a) const {
    std::vector<S> next(w_.size(), ScalarTraits<S>::zero());
    S denom = ScalarTraits<S>::zero();
    for (int i = 0; i < mixture_->size(); ++i) {
      if (w_[i] == 0) continue;
      next[i] =
          w_[i] * mixture_->hypothesis_class().members[i]->cond_action(h_)[a];
      denom += next[i];
    }
    if (denom == 0) {
      throw ZeroPredictiveMass(mixture_->name() + ": realized action");
    }
    for (auto& x : next) x = x / denom;
    return BeliefState(mixture_, std::move(next), h_);
  }

  // finishes the turn: posterior after a then e, history extended
  BeliefState update_on_percept(int a, int e) const {
    BeliefState mid = update_on_action(a);
    std::vector<S> next(w_.size(), ScalarTraits<S>::zero());
    S denom = ScalarTraits<S>::zero();
    for (int i = 0; i < mixture_->size(); ++i) {
      if (mid.w_[i] == 0) continue;
      next[i] = mid.w_[i] *
                mixture_->hypothesis_class().members[i]->cond_percept(h_, a)[e];
      denom += next[i];
    }
    if (denom == 0) {
      throw ZeroPredictiveMass(mixture_->name() + ": realized percept");
    }
    for (auto& x : next) x = x / denom;
    return BeliefState(mixture_, std::move(next), h_.extended(a, e));
  }

 private:
  MixturePtr<S> mixture_;
  std::vector<S> w_;
  History h_;
};

}  // namespace embayes

#endif  // EMBAYES_BAYES_MIXTURE_HPP_
