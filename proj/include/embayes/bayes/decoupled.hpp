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

#ifndef EMBAYES_BAYES_DECOUPLED_HPP_
#define EMBAYES_BAYES_DECOUPLED_HPP_

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/bayes/mixture.hpp"

namespace embayes {

// Bayes mixture over policies only; the posterior moves on actions and
// ignores percepts. This is the zeta component of a decoupled prior.
template <class S>
class MixturePolicy : public Policy<S> {
 public:
  MixturePolicy(std::vector<PolicyPtr<S>> policies, std::vector<S> w,
                std::string name = "zeta")
      : policies_(std::move(policies)), w_(std::move(w)),
        name_(std::move(name)) {}

  const Space& space() const override { return policies_.at(0)->space(); }
  int depth() const override {
    int d = kUnboundedDepth;
    for (const auto& p : policies_) d = std::min(d, p->depth());
    return d;
  }
  std::string name() const override { return name_; }

  // posterior over policies given the action string of h
  std::vector<S> posterior(const History& h) const {
    std::vector<S> w = w_;
    History pre;
    for (int t = 0; t < h.length(); ++t) {
      S denom = ScalarTraits<S>::zero();
      for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        w[i] = w[i] * policies_[i]->act(pre)[h.turn(t).action];
        denom += w[i];
      }
      if (denom == 0) {
        throw ZeroPredictiveMass(name_ + ": action string unreachable");
      }
      for (auto& x : w) x = x / denom;
      pre.push(h.turn(t).action, h.turn(t).percept);
    }
    return w;
  }

  Dist<S> act(const History& h) const override {
    std::vector<S> w = posterior(h);
    Dist<S> d(space().actions.size());
    for (size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0) continue;
      Dist<S> di = policies_[i]->act(h);
      for (int a = 0; a < d.size(); ++a) d[a] += w[i] * di[a];
    }
    return d;
  }

  const std::vector<PolicyPtr<S>>& policies() const { return policies_; }
  const std::vector<S>& prior() const { return w_; }

 private:
  std::vector<PolicyPtr<S>> policies_;
  std::vector<S> w_;
  std::string name_;
};

// Bayes mixture over environments only; the posterior moves on percepts and
// ignores actions. This is the xi component of a decoupled prior.
template <class S>
class MixtureEnvironment : public Environment<S> {
 public:
  MixtureEnvironment(std::vector<EnvironmentPtr<S>> envs, std::vector<S> w,
                     std::string name = "xi")
      : envs_(std::move(envs)), w_(std::move(w)), name_(std::move(name)) {}

  const Space& space() const override { return envs_.at(0)->space(); }
  int depth() const override {
    int d = kUnboundedDepth;
    for (const auto& e : envs_) d = std::min(d, e->depth());
    return d;
  }
  std::string name() const override { return name_; }

  std::vector<S> posterior(const History& h) const {
    std::vector<S> w = w_;
    History pre;
    for (int t = 0; t < h.length(); ++t) {
      S denom = ScalarTraits<S>::zero();
      for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        w[i] = w[i] *
               envs_[i]->per(pre, h.turn(t).action)[h.turn(t).percept];
        denom += w[i];
      }
      if (denom == 0) {
        throw ZeroPredictiveMass(name_ + ": percept string unreachable");
      }
      for (auto& x : w) x = x / denom;
      pre.push(h.turn(t).action, h.turn(t).percept);
    }
    return w;
  }

  Dist<S> per(const History& h, int a) const override {
    std::vector<S> w = posterior(h);
    Dist<S> d(space().percepts.size());
    for (size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0) continue;
      Dist<S> di = envs_[i]->per(h, a);
      for (int e = 0; e < d.size(); ++e) d[e] += w[i] * di[e];
    }
    return d;
  }

  const std::vector<EnvironmentPtr<S>>& environments() const { return envs_; }
  const std::vector<S>& prior() const { return w_; }

 private:
  std::vector<EnvironmentPtr<S>> envs_;
  std::vector<S> w_;
  std::string name_;
};

// structural factorization of a class whose members are interaction
// universes nu^pi. identity of factors is by pointer.
template <class S>
struct DecoupledFactorization {
  std::vector<PolicyPtr<S>> policies;
  std::vector<EnvironmentPtr<S>> environments;
  std::vector<S> w_pol;   // marginal over policies
  std::vector<S> w_env;   // marginal over environments
  // member index -> (policy index, environment index)
  std::vector<std::pair<int, int>> factor_of;
  bool decoupled = false;  // prior equals the product of its marginals

  std::shared_ptr<MixturePolicy<S>> zeta() const {
    return std::make_shared<MixturePolicy<S>>(policies, w_pol);
  }
  std::shared_ptr<MixtureEnvironment<S>> xi() const {
    return std::make_shared<MixtureEnvironment<S>>(environments, w_env);
  }
};

// Splits a class of interaction universes into policy and environment factors
// and tests whether the prior is a product of its marginals. Members that are
// not interaction universes are rejected.
template <class S>
DecoupledFactorization<S> factor_decoupled(const HypothesisClass<S>& hclass,
                                           const Prior<S>& prior,
                                           double slack = 0.0) {
  DecoupledFactorization<S> f;
  std::map<const void*, int> pol_ix, env_ix;
  for (size_t i = 0; i < hclass.members.size(); ++i) {
    auto iu =
        std::dynamic_pointer_cast<const InteractUniverse<S>>(hclass.members[i]);
    if (!iu) {
      throw SupportViolation(
          "factor_decoupled: member is not an interaction universe");
    }
    const auto& pi = iu->policy();
    const auto& nu = iu->environment();
    if (!pol_ix.count(pi.get())) {
      pol_ix[pi.get()] = static_cast<int>(f.policies.size());
      f.policies.push_back(pi);
      f.w_pol.push_back(ScalarTraits<S>::zero());
    }
    if (!env_ix.count(nu.get())) {
      env_ix[nu.get()] = static_cast<int>(f.environments.size());
      f.environments.push_back(nu);
      f.w_env.push_back(ScalarTraits<S>::zero());
    }
    f.factor_of.emplace_back(pol_ix[pi.get()], env_ix[nu.get()]);
    f.w_pol[pol_ix[pi.get()]] += prior.w[i];
    f.w_env[env_ix[nu.get()]] += prior.w[i];
  }

  // w(pi, nu) must equal w(pi) w(nu) on every pair, including absent pairs
  // (absent means weight zero)
  std::map<std::pair<int, int>, S> joint;
  for (size_t i = 0; i < hclass.members.size(); ++i) {
    joint[f.factor_of[i]] += prior.w[i];
  }
  f.decoupled = true;
  for (size_t p = 0; p < f.policies.size() && f.decoupled; ++p) {
    for (size_t v = 0; v < f.environments.size(); ++v) {
      S have = ScalarTraits<S>::zero();
      auto it = joint.find({static_cast<int>(p), static_cast<int>(v)});
      if (it != joint.end()) have = it->second;
      S want = f.w_pol[p] * f.w_env[v];
      if (to_double<S>(abs_val<S>(have - want)) > slack) {
        f.decoupled = false;
        break;
      }
    }
  }
  return f;
}

}  // namespace embayes

#endif  // EMBAYES_BAYES_DECOUPLED_HPP_
