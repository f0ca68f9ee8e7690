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

#ifndef EMBAYES_CORE_POLICY_HPP_
#define EMBAYES_CORE_POLICY_HPP_

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "embayes/core/dist.hpp"
#include "embayes/core/history.hpp"

namespace embayes {

inline constexpr int kUnboundedDepth = std::numeric_limits<int>::max() / 2;

// behavioral policy pi(a | h). act() is valid while length(h) < depth().
template <class S>
class Policy {
 public:
  virtual ~Policy() = default;
  virtual const Space& space() const = 0;
  virtual int depth() const { return kUnboundedDepth; }
  virtual Dist<S> act(const History& h) const = 0;
  virtual std::string name() const { return "policy"; }

  void check_depth(const History& h) const {
    if (h.length() >= depth()) {
      throw DepthExceeded(name() + ": act beyond depth");
    }
  }
};

template <class S>
using PolicyPtr = std::shared_ptr<const Policy<S>>;

// table-backed policy; rows keyed by history
template <class S>
class TablePolicy : public Policy<S> {
 public:
  TablePolicy(Space space, int depth, std::map<History, Dist<S>> rows,
              std::string name = "table_policy")
      : space_(std::move(space)),
        depth_(depth),
        rows_(std::move(rows)),
        name_(std::move(name)) {}

  const Space& space() const override { return space_; }
  int depth() const override { return depth_; }
  std::string name() const override { return name_; }

  Dist<S> act(const History& h) const override {
    this->check_depth(h);
    auto it = rows_.find(h);
    if (it == rows_.end()) {
      throw UndefinedConditional(name_ + ": no row for history");
    }
    return it->second;
  }

  const std::map<History, Dist<S>>& rows() const { return rows_; }

 private:
  Space space_;
  int depth_;
  std::map<History, Dist<S>> rows_;
  std::string name_;
};

// rule-backed policy from a callable
template <class S>
class FnPolicy : public Policy<S> {
 public:
  using Fn = std::function<Dist<S>(const History&)>;
  FnPolicy(Space space, Fn fn, std::string name = "fn_policy",
           int depth = kUnboundedDepth)
      : space_(std::move(space)),
        fn_(std::move(fn)),
        name_(std::move(name)),
        depth_(depth) {}

  const Space& space() const override { return space_; }
  int depth() const override { return depth_; }
  std::string name() const override { return name_; }

  Dist<S> act(const History& h) const override {
    this->check_depth(h);
    return fn_(h);
  }

 private:
  Space space_;
  Fn fn_;
  std::string name_;
  int depth_;
};

// deterministic helper
template <class S>
PolicyPtr<S> constant_policy(const Space& sp, int action,
                             const std::string& name) {
  int n = sp.actions.size();
  return std::make_shared<FnPolicy<S>>(
      sp, [n, action](const History&) { return Dist<S>::point(n, action); },
      name);
}

}  // namespace embayes

#endif  // EMBAYES_CORE_POLICY_HPP_
