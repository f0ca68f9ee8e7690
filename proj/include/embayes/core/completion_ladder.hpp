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

#ifndef EMBAYES_CORE_COMPLETION_LADDER_HPP_
#define EMBAYES_CORE_COMPLETION_LADDER_HPP_

#include <memory>
#include <utility>
#include <vector>

#include "embayes/core/universe.hpp"

namespace embayes {

// Symbolic limit of the parametric family
//   p_r = (1 - e_r - e_r^2 - ...) u_0 + e_r u_1 + e_r^2 u_2 + ...
// as e_r -> 0: a conditional's limit is decided by the first ladder member
// assigning positive mass to the conditioning node. This is the exact-limit
// evaluation of completion sequences under the rational backend (and the same
// rule under floats).
template <class S>
class LadderCompletion : public Completion<S> {
 public:
  explicit LadderCompletion(std::vector<UniversePtr<S>> ladder)
      : ladder_(std::move(ladder)) {
    if (ladder_.empty()) throw SupportViolation("empty completion ladder");
  }

  Dist<S> act(const History& h) const override {
    for (const auto& u : ladder_) {
      if (u->prefix(h) > 0) return u->cond_action(h);
    }
    throw UndefinedConditional("ladder: zero mass at every level (action)");
  }

  Dist<S> per(const History& h, int a) const override {
    for (const auto& u : ladder_) {
      if (u->prefix_act(h, a) > 0) return u->cond_percept(h, a);
    }
    throw UndefinedConditional("ladder: zero mass at every level (percept)");
  }

  const std::vector<UniversePtr<S>>& ladder() const { return ladder_; }

 private:
  std::vector<UniversePtr<S>> ladder_;
};

}  // namespace embayes

#endif  // EMBAYES_CORE_COMPLETION_LADDER_HPP_
