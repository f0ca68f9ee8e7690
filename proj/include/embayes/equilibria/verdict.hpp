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

#ifndef EMBAYES_EQUILIBRIA_VERDICT_HPP_
#define EMBAYES_EQUILIBRIA_VERDICT_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace embayes {

// one reason a check failed: a profitable deviation, a belief mismatch, or a
// support problem. gap is in the units of the failed condition (raw payoff
// for one-shot games, normalized value for sequential checks, total
// variation for belief conditions).
struct Witness {
  int player = 0;
  std::string kind;    // "value", "belief", "support"
  std::string detail;  // deviation action, history token, or message id
  double gap = 0.0;
};

struct Verdict {
  bool pass = true;
  std::vector<Witness> witnesses;
  std::map<std::string, double> tolerances;

  void fail(int player, std::string kind, std::string detail, double gap) {
    pass = false;
    witnesses.push_back(Witness{player, std::move(kind), std::move(detail), gap});
  }
};

}  // namespace embayes

#endif  // EMBAYES_EQUILIBRIA_VERDICT_HPP_
