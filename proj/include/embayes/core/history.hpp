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

#ifndef EMBAYES_CORE_HISTORY_HPP_
#define EMBAYES_CORE_HISTORY_HPP_

#include <compare>
#include <sstream>
#include <string>
#include <vector>

#include "embayes/core/alphabet.hpp"

namespace embayes {

struct Turn {
  int action = 0;
  int percept = 0;
  auto operator<=>(const Turn&) const = default;
};

// an interaction history a_1 e_1 ... a_t e_t. always a whole number of turns;
// a dangling action is passed alongside where an operation needs one.
class History {
 public:
  History() = default;
  explicit History(std::vector<Turn> turns) : turns_(std::move(turns)) {}

  int length() const { return static_cast<int>(turns_.size()); }
  bool empty() const { return turns_.empty(); }
  const Turn& turn(int t) const { return turns_[t]; }
  const std::vector<Turn>& turns() const { return turns_; }

  void push(int a, int e) { turns_.push_back(Turn{a, e}); }
  void pop() { turns_.pop_back(); }

  History extended(int a, int e) const {
    History h(*this);
    h.push(a, e);
    return h;
  }

  History prefix(int n) const {
    return History(std::vector<Turn>(turns_.begin(), turns_.begin() + n));
  }

  auto operator<=>(const History&) const = default;

  // token form "a/e a/e ..."; the empty history prints as "-"
  std::string token(const Space& sp) const {
    if (turns_.empty()) return "-";
    std::ostringstream os;
    for (int t = 0; t < length(); ++t) {
      if (t) os << ' ';
      os << sp.actions.name(turns_[t].action) << '/'
         << sp.percepts.name(turns_[t].percept);
    }
    return os.str();
  }

  static History parse(const std::string& tok, const Space& sp) {
    History h;
    if (tok.empty() || tok == "-") return h;
    std::istringstream is(tok);
    std::string part;
    while (is >> part) {
      auto slash = part.find('/');
      if (slash == std::string::npos) {
        throw AlphabetMismatch("bad history token: '" + part + "'");
      }
      h.push(sp.actions.index(part.substr(0, slash)),
             sp.percepts.index(part.substr(slash + 1)));
    }
    return h;
  }

 private:
  std::vector<Turn> turns_;
};

}  // namespace embayes

#endif  // EMBAYES_CORE_HISTORY_HPP_
