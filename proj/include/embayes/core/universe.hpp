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

#ifndef EMBAYES_CORE_UNIVERSE_HPP_
#define EMBAYES_CORE_UNIVERSE_HPP_

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/core/environment.hpp"
#include "embayes/core/policy.hpp"

namespace embayes {

// conditional completion: supplies action and percept conditionals where a
// universe has zero mass. must agree with exact ratios wherever mass is
// positive; check_completion_consistency verifies that.
template <class S>
class Completion {
 public:
  virtual ~Completion() = default;
  virtual Dist<S> act(const History& h) const = 0;
  virtual Dist<S> per(const History& h, int a) const = 0;
};

template <class S>
using CompletionPtr = std::shared_ptr<const Completion<S>>;

template <class S>
class PairCompletion : public Completion<S> {
 public:
  PairCompletion(PolicyPtr<S> pi, EnvironmentPtr<S> nu)
      : pi_(std::move(pi)), nu_(std::move(nu)) {}
  Dist<S> act(const History& h) const override { return pi_->act(h); }
  Dist<S> per(const History& h, int a) const override {
    return nu_->per(h, a);
  }

 private:
  PolicyPtr<S> pi_;
  EnvironmentPtr<S> nu_;
};

// A universe lambda assigns mass to histories and dangling-action prefixes.
// Conditionals are exact ratios where defined; at zero-mass nodes an attached
// completion wins, then an intrinsic product form (policy/environment factor
// universes keep counterfactual conditionals), else UndefinedConditional.
template <class S>
class Universe {
 public:
  virtual ~Universe() = default;

  virtual const Space& space() const = 0;
  virtual int depth() const { return kUnboundedDepth; }
  virtual std::string name() const { return "universe"; }

  // lambda(h); defined for length(h) <= depth
  virtual S prefix(const History& h) const = 0;
  // lambda(h a); defined for length(h) < depth
  virtual S prefix_act(const History& h, int a) const = 0;

  virtual bool has_product_form() const { return false; }
  virtual Dist<S> product_action(const History&) const {
    throw UndefinedConditional(name() + ": no product form");
  }
  virtual Dist<S> product_percept(const History&, int) const {
    throw UndefinedConditional(name() + ": no product form");
  }

  void set_completion(CompletionPtr<S> c) { completion_ = std::move(c); }
  const CompletionPtr<S>& completion() const { return completion_; }

  void check_depth(const History& h, int extra = 0) const {
    if (h.length() + extra > depth()) {
      throw DepthExceeded(name() + ": query beyond depth");
    }
  }

  // lambda(a | h)
  virtual Dist<S> cond_action(const History& h) const {
    check_depth(h, 1);
    S m = prefix(h);
    if (m > 0) {
      Dist<S> d(space().actions.size());
      for (int a = 0; a < d.size(); ++a) d[a] = prefix_act(h, a) / m;
      return d;
    }
    if (completion_) return completion_->act(h);
    if (has_product_form()) return product_action(h);
    throw UndefinedConditional(name() + ": action conditional at zero mass");
  }

  // lambda(e | h a)
  virtual Dist<S> cond_percept(const History& h, int a) const {
    check_depth(h, 1);
    S ma = prefix_act(h, a);
    if (ma > 0) {
      Dist<S> d(space().percepts.size());
      History ext = h;
      for (int e = 0; e < d.size(); ++e) {
        ext.push(a, e);
        d[e] = prefix(ext) / ma;
        ext.pop();
      }
      return d;
    }
    if (completion_) return completion_->per(h, a);
    if (has_product_form()) return product_percept(h, a);
    throw UndefinedConditional(name() + ": percept conditional at zero mass");
  }

 private:
  CompletionPtr<S> completion_;
};

template <class S>
using UniversePtr = std::shared_ptr<Universe<S>>;

// interaction operator: lambda = nu^pi, the joint distribution of histories
// under policy pi acting in environment nu. conditionals keep the product
// form even at zero-mass nodes.
template <class S>
class InteractUniverse : public Universe<S> {
 public:
  InteractUniverse(PolicyPtr<S> pi, EnvironmentPtr<S> nu)
      : pi_(std::move(pi)), nu_(std::move(nu)) {
    if (!(pi_->space() == nu_->space())) {
      throw AlphabetMismatch("interact: policy/environment space mismatch");
    }
  }

  const Space& space() const override { return pi_->space(); }
  int depth() const override { return std::min(pi_->depth(), nu_->depth()); }
  std::string name() const override {
    return pi_->name() + "^" + nu_->name();
  }

  S prefix(const History& h) const override {
    this->check_depth(h);
    S m = ScalarTraits<S>::one();
    History pre;
    for (int t = 0; t < h.length(); ++t) {
      const Turn& turn = h.turn(t);
      m = m * pi_->act(pre)[turn.action];
      if (m == 0) return ScalarTraits<S>::zero();
      m = m * nu_->per(pre, turn.action)[turn.percept];
      if (m == 0) return ScalarTraits<S>::zero();
      pre.push(turn.action, turn.percept);
    }
    return m;
  }

  S prefix_act(const History& h, int a) const override {
    S m = prefix(h);
    if (m == 0) return m;
    return m * pi_->act(h)[a];
  }

  bool has_product_form() const override { return true; }
  Dist<S> product_action(const History& h) const override {
    return pi_->act(h);
  }
  Dist<S> product_percept(const History& h, int a) const override {
    return nu_->per(h, a);
  }

  Dist<S> cond_action(const History& h) const override {
    this->check_depth(h, 1);
    return pi_->act(h);
  }
  Dist<S> cond_percept(const History& h, int a) const override {
    this->check_depth(h, 1);
    return nu_->per(h, a);
  }

  const PolicyPtr<S>& policy() const { return pi_; }
  const EnvironmentPtr<S>& environment() const { return nu_; }

 private:
  PolicyPtr<S> pi_;
  EnvironmentPtr<S> nu_;
};

template <class S>
UniversePtr<S> interact(PolicyPtr<S> pi, EnvironmentPtr<S> nu) {
  return std::make_shared<InteractUniverse<S>>(std::move(pi), std::move(nu));
}

// dense table universe over all prefixes up to depth
template <class S>
class TableUniverse : public Universe<S> {
 public:
  TableUniverse(Space space, int depth, std::map<History, S> node_mass,
                std::map<std::pair<History, int>, S> act_mass,
                std::string name = "table_universe")
      : space_(std::move(space)),
        depth_(depth),
        node_mass_(std::move(node_mass)),
        act_mass_(std::move(act_mass)),
        name_(std::move(name)) {}

  // build from conditional evaluators, enumerating every history to depth
  template <class ActFn, class PerFn>
  static std::shared_ptr<TableUniverse> from_conditionals(
      const Space& sp, int depth, ActFn act, PerFn per,
      const std::string& name = "table_universe") {
    std::map<History, S> node;
    std::map<std::pair<History, int>, S> dangling;
    History h;
    build(sp, depth, act, per, h, ScalarTraits<S>::one(), &node, &dangling);
    return std::make_shared<TableUniverse>(sp, depth, std::move(node),
                                           std::move(dangling), name);
  }

  const Space& space() const override { return space_; }
  int depth() const override { return depth_; }
  std::string name() const override { return name_; }

  S prefix(const History& h) const override {
    this->check_depth(h);
    auto it = node_mass_.find(h);
    return it == node_mass_.end() ? ScalarTraits<S>::zero() : it->second;
  }

  S prefix_act(const History& h, int a) const override {
    this->check_depth(h, 1);
    auto it = act_mass_.find({h, a});
    return it == act_mass_.end() ? ScalarTraits<S>::zero() : it->second;
  }

  const std::map<History, S>& node_rows() const { return node_mass_; }
  const std::map<std::pair<History, int>, S>& act_rows() const {
    return act_mass_;
  }

 private:
  template <class ActFn, class PerFn>
  static void build(const Space& sp, int depth, ActFn& act, PerFn& per,
                    History& h, S mass, std::map<History, S>* node,
                    std::map<std::pair<History, int>, S>* dangling) {
    if (mass == 0) return;
    (*node)[h] = mass;
    if (h.length() == depth) return;
    Dist<S> pa = act(static_cast<const History&>(h));
    for (int a = 0; a < sp.actions.size(); ++a) {
      S ma = mass * pa[a];
      if (ma == 0) continue;
      (*dangling)[{h, a}] = ma;
      Dist<S> pe = per(static_cast<const History&>(h), a);
      for (int e = 0; e < sp.percepts.size(); ++e) {
        S me = ma * pe[e];
        if (me == 0) continue;
        h.push(a, e);
        build(sp, depth, act, per, h, me, node, dangling);
        h.pop();
      }
    }
  }

  Space space_;
  int depth_;
  std::map<History, S> node_mass_;
  std::map<std::pair<History, int>, S> act_mass_;
  std::string name_;
};

// semimeasure sanity: normalized at the root, monotone under extension,
// nonnegative everywhere. walks the whole tree to the given depth.
template <class S>
void check_semimeasure(const Universe<S>& u, int depth, double slack = 1e-9) {
  const Space& sp = u.space();
  if (to_double<S>(abs_val<S>(u.prefix(History()) - ScalarTraits<S>::one())) >
      slack) {
    throw SupportViolation(u.name() + ": root mass not 1");
  }
  struct Walker {
    const Universe<S>& u;
    const Space& sp;
    int depth;
    double slack;
    void walk(History& h) {
      S m = u.prefix(h);
      if (to_double<S>(m) < -slack) {
        throw SupportViolation(u.name() + ": negative mass");
      }
      if (h.length() == depth) return;
      S act_total = ScalarTraits<S>::zero();
      for (int a = 0; a < sp.actions.size(); ++a) {
        S ma = u.prefix_act(h, a);
        if (to_double<S>(ma) < -slack) {
          throw SupportViolation(u.name() + ": negative action mass");
        }
        act_total += ma;
        S per_total = ScalarTraits<S>::zero();
        for (int e = 0; e < sp.percepts.size(); ++e) {
          h.push(a, e);
          per_total += u.prefix(h);
          walk(h);
          h.pop();
        }
        if (to_double<S>(per_total - ma) > slack) {
          throw SupportViolation(u.name() + ": percept mass exceeds action");
        }
      }
      if (to_double<S>(act_total - m) > slack) {
        throw SupportViolation(u.name() + ": action mass exceeds node");
      }
    }
  };
  History h;
  Walker{u, sp, depth, slack}.walk(h);
}

// completions must reproduce exact ratios on positive-mass nodes
template <class S>
void check_completion_consistency(const Universe<S>& u,
                                  const Completion<S>& c, int depth,
                                  double slack = 1e-9) {
  struct Walker {
    const Universe<S>& u;
    const Completion<S>& c;
    int depth;
    double slack;
    void walk(History& h) {
      if (h.length() >= depth) return;
      S m = u.prefix(h);
      if (m > 0) {
        Dist<S> exact = u.cond_action(h);
        Dist<S> comp = c.act(h);
        if (to_double<S>(exact.tv(comp)) > slack) {
          throw InconsistentCompletion(u.name() + ": action completion");
        }
      }
      for (int a = 0; a < u.space().actions.size(); ++a) {
        S ma = u.prefix_act(h, a);
        if (ma > 0) {
          Dist<S> exact = u.cond_percept(h, a);
          Dist<S> comp = c.per(h, a);
          if (to_double<S>(exact.tv(comp)) > slack) {
            throw InconsistentCompletion(u.name() + ": percept completion");
          }
        }
        for (int e = 0; e < u.space().percepts.size(); ++e) {
          h.push(a, e);
          if (u.prefix(h) > 0) walk(h);
          h.pop();
        }
      }
    }
  };
  History h;
  Walker{u, c, depth, slack}.walk(h);
}

}  // namespace embayes

#endif  // EMBAYES_CORE_UNIVERSE_HPP_
