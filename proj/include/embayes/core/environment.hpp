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

#ifndef EMBAYES_CORE_ENVIRONMENT_HPP_
#define EMBAYES_CORE_ENVIRONMENT_HPP_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "embayes/core/policy.hpp"

namespace embayes {

// environment nu(e | h, a). per() is valid while length(h) < depth().
template <class S>
class Environment {
 public:
  virtual ~Environment() = default;
  virtual const Space& space() const = 0;
  virtual int depth() const { return kUnboundedDepth; }
  virtual Dist<S> per(const History& h, int a) const = 0;
  virtual std::string name() const { return "environment"; }

  void check_depth(const History& h) const {
    if (h.length() >= depth()) {
      throw DepthExceeded(name() + ": per beyond depth");
    }
  }
};

template <class S>
using EnvironmentPtr = std::shared_ptr<const Environment<S>>;

template <class S>
class TableEnvironment : public Environment<S> {
 public:
  TableEnvironment(Space space, int depth,
                   std::map<std::pair<History, int>, Dist<S>> rows,
                   std::string name = "table_environment")
      : space_(std::move(space)),
        depth_(depth),
        rows_(std::move(rows)),
        name_(std::move(name)) {}

  const Space& space() const override { return space_; }
  int depth() const override { return depth_; }
  std::string name() const override { return name_; }

  Dist<S> per(const History& h, int a) const override {
    this->check_depth(h);
    auto it = rows_.find({h, a});
    if (it == rows_.end()) {
      throw UndefinedConditional(name_ + ": no row for history/action");
    }
    return it->second;
  }

  const std::map<std::pair<History, int>, Dist<S>>& rows() const {
    return rows_;
  }

 private:
  Space space_;
  int depth_;
  std::map<std::pair<History, int>, Dist<S>> rows_;
  std::string name_;
};

template <class S>
class FnEnvironment : public Environment<S> {
 public:
  using Fn = std::function<Dist<S>(const History&, int)>;
  FnEnvironment(Space space, Fn fn, std::string name = "fn_environment",
                int depth = kUnboundedDepth)
      : space_(std::move(space)),
        fn_(std::move(fn)),
        name_(std::move(name)),
        depth_(depth) {}

  const Space& space() const override { return space_; }
  int depth() const override { return depth_; }
  std::string name() const override { return name_; }

  Dist<S> per(const History& h, int a) const override {
    this->check_depth(h);
    return fn_(h, a);
  }

 private:
  Space space_;
  Fn fn_;
  std::string name_;
  int depth_;
};

}  // namespace embayes

#endif  // EMBAYES_CORE_ENVIRONMENT_HPP_
