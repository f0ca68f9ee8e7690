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

#ifndef EMBAYES_HARNESS_TAIL_HPP_
#define EMBAYES_HARNESS_TAIL_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "embayes/equilibria/checkers.hpp"
#include "embayes/equilibria/dependency.hpp"
#include "embayes/harness/experiment.hpp"

namespace embayes {
namespace harness {

namespace harness_detail {

inline History joined(const History& pre, const History& h) {
  History out = pre;
  for (int t = 0; t < h.length(); ++t) {
    out.push(h.turn(t).action, h.turn(t).percept);
  }
  return out;
}

inline int shifted_depth(int base, int cut) {
  return base == kUnboundedDepth ? kUnboundedDepth : base - cut;
}

}  // namespace harness_detail

// a policy conditioned on a realized prefix
template <class S>
class TailPolicy : public Policy<S> {
 public:
  TailPolicy(PolicyPtr<S> base, History at)
      : base_(std::move(base)), at_(std::move(at)) {}

  const Space& space() const override { return base_->space(); }
  int depth() const override {
    return harness_detail::shifted_depth(base_->depth(), at_.length());
  }
  std::string name() const override {
    return base_->name() + "@t" + std::to_string(at_.length() + 1);
  }

  Dist<S> act(const History& h) const override {
    return base_->act(harness_detail::joined(at_, h));
  }

 private:
  PolicyPtr<S> base_;
  History at_;
};

// a universe conditioned on a positive-mass prefix. conditionals delegate to
// the base object, so its completion keeps pricing off-path futures.
template <class S>
class TailUniverse : public Universe<S> {
 public:
  TailUniverse(UniversePtr<S> base, History at)
      : base_(std::move(base)), at_(std::move(at)) {
    base_mass_ = base_->prefix(at_);
    if (base_mass_ == 0) {
      throw UndefinedConditional(base_->name() +
                                 ": tail at a zero-mass prefix");
    }
  }

  const Space& space() const override { return base_->space(); }
  int depth() const override {
    return harness_detail::shifted_depth(base_->depth(), at_.length());
  }
  std::string name() const override {
    return base_->name() + "@t" + std::to_string(at_.length() + 1);
  }

  S prefix(const History& h) const override {
    return base_->prefix(harness_detail::joined(at_, h)) / base_mass_;
  }
  S prefix_act(const History& h, int a) const override {
    return base_->prefix_act(harness_detail::joined(at_, h), a) / base_mass_;
  }
  Dist<S> cond_action(const History& h) const override {
    return base_->cond_action(harness_detail::joined(at_, h));
  }
  Dist<S> cond_percept(const History& h, int a) const override {
    return base_->cond_percept(harness_detail::joined(at_, h), a);
  }

 private:
  UniversePtr<S> base_;
  History at_;
  S base_mass_;
};

template <class S>
PolicyPtr<S> tail_policy(PolicyPtr<S> base, const History& at) {
  if (at.length() == 0) return base;  // t = 1 is the original object
  return std::make_shared<TailPolicy<S>>(std::move(base), at);
}

template <class S>
UniversePtr<S> tail_universe(UniversePtr<S> base, const History& at) {
  if (at.length() == 0) return base;
  return std::make_shared<TailUniverse<S>>(std::move(base), at);
}

// The tail game a run induces before round t: per seat the conditioned
// policy, belief and truth, plus the correlation device over messages. A
// single record realizes exactly one message tuple (the prefixes), so the
// device is the point mass on it; sweeps report per-seed verdicts instead of
// merging devices.
template <class S>
struct TailGame {
  int at = 1;  // 1-indexed round the tail starts before
  CorrelationDevice<S> device;
  std::vector<std::vector<TailView<S>>> views;  // views[seat][message]
  std::vector<History> prefixes;
};

template <class S>
TailGame<S> tail_extract(const SelfPlayRun<S>& run, int t) {
  if (t < 1 || t > run.record.rounds() + 1) {
    throw SupportViolation("tail_extract: round out of range");
  }
  int n = run.record.players();
  TailGame<S> out;
  out.at = t;
  out.device.counts.assign(n, 1);
  out.device.p = {ScalarTraits<S>::one()};
  for (int i = 0; i < n; ++i) {
    History pre = run.record.personal(i, t - 1);
    TailView<S> view;
    view.policy = tail_policy<S>(run.policies[i], pre);
    if (run.spec.seats[i].mixture) {
      view.belief = tail_universe<S>(run.spec.seats[i].mixture, pre);
    }
    view.truth = tail_universe<S>(run.truths[i], pre);
    out.views.push_back({std::move(view)});
    out.prefixes.push_back(std::move(pre));
  }
  return out;
}

}  // namespace harness
}  // namespace embayes

#endif  // EMBAYES_HARNESS_TAIL_HPP_
