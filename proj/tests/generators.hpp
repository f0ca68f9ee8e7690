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

// random instance builders shared by the test binaries

#ifndef EMBAYES_TESTS_GENERATORS_HPP_
#define EMBAYES_TESTS_GENERATORS_HPP_

#include <memory>
#include <string>
#include <vector>

#include "embayes/bayes/mixture.hpp"
#include "embayes/core/universe.hpp"
#include "embayes/harness/rng.hpp"

namespace embayes::testgen {

inline Space binary_space() {
  return Space{Alphabet({"a0", "a1"}), Alphabet({"e0", "e1"})};
}

// proper rational distribution from small integer weights
inline Dist<Rational> random_dist(CounterRng& rng, int n, int max_w = 7,
                                  bool full_support = true) {
  std::vector<Rational> w(n);
  long long total = 0;
  std::vector<long long> c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = full_support ? 1 + rng.next_int(max_w)
                        : rng.next_int(max_w + 1);
    total += c[i];
  }
  if (total == 0) {
    c[rng.next_int(n)] = 1;
    total = 1;
  }
  for (int i = 0; i < n; ++i) w[i] = Rational(c[i], total);
  return Dist<Rational>(std::move(w));
}

// table universe with random conditionals at every node. deficit_percent
// scales percept rows down to produce a strict semimeasure.
inline UniversePtr<Rational> random_universe(CounterRng& rng, const Space& sp,
                                             int depth,
                                             bool full_support = true,
                                             int deficit_percent = 0,
                                             const std::string& name = "rand") {
  auto act = [&rng, &sp, full_support](const History&) {
    return random_dist(rng, sp.actions.size(), 7, full_support);
  };
  auto per = [&rng, &sp, full_support, deficit_percent](const History&, int) {
    Dist<Rational> d = random_dist(rng, sp.percepts.size(), 7, full_support);
    if (deficit_percent > 0 && rng.next_int(100) < deficit_percent) {
      Rational keep(9, 10);
      for (int e = 0; e < d.size(); ++e) d[e] = d[e] * keep;
    }
    return d;
  };
  return TableUniverse<Rational>::from_conditionals(sp, depth, act, per, name);
}

// stochastic policy table over all histories to depth
inline PolicyPtr<Rational> random_policy(CounterRng& rng, const Space& sp,
                                         int depth, bool full_support,
                                         const std::string& name) {
  std::map<History, Dist<Rational>> rows;
  std::function<void(History&)> rec = [&](History& h) {
    if (h.length() >= depth) return;
    rows[h] = random_dist(rng, sp.actions.size(), 7, full_support);
    for (int a = 0; a < sp.actions.size(); ++a) {
      for (int e = 0; e < sp.percepts.size(); ++e) {
        h.push(a, e);
        rec(h);
        h.pop();
      }
    }
  };
  History h;
  rec(h);
  return std::make_shared<TablePolicy<Rational>>(sp, depth, std::move(rows),
                                                 name);
}

// deterministic policy table over all histories to depth
inline PolicyPtr<Rational> random_deterministic_policy(CounterRng& rng,
                                                       const Space& sp,
                                                       int depth,
                                                       const std::string& name) {
  struct Node {
    std::map<History, Dist<Rational>> rows;
  };
  Node n;
  std::function<void(History&)> rec = [&](History& h) {
    if (h.length() >= depth) return;
    n.rows[h] = Dist<Rational>::point(sp.actions.size(),
                                      rng.next_int(sp.actions.size()));
    for (int a = 0; a < sp.actions.size(); ++a) {
      for (int e = 0; e < sp.percepts.size(); ++e) {
        h.push(a, e);
        rec(h);
        h.pop();
      }
    }
  };
  History h;
  rec(h);
  return std::make_shared<TablePolicy<Rational>>(sp, depth, std::move(n.rows),
                                                 name);
}

// proper stochastic environment table over all histories to depth
inline EnvironmentPtr<Rational> random_environment(CounterRng& rng,
                                                   const Space& sp, int depth,
                                                   bool full_support,
                                                   const std::string& name) {
  std::map<std::pair<History, int>, Dist<Rational>> rows;
  std::function<void(History&)> rec = [&](History& h) {
    if (h.length() >= depth) return;
    for (int a = 0; a < sp.actions.size(); ++a) {
      rows[{h, a}] = random_dist(rng, sp.percepts.size(), 7, full_support);
      for (int e = 0; e < sp.percepts.size(); ++e) {
        h.push(a, e);
        rec(h);
        h.pop();
      }
    }
  };
  History h;
  rec(h);
  return std::make_shared<TableEnvironment<Rational>>(sp, depth,
                                                      std::move(rows), name);
}

// random mixture of random table universes
inline MixturePtr<Rational> random_mixture(CounterRng& rng, const Space& sp,
                                           int depth, int members,
                                           bool full_support = true,
                                           int deficit_percent = 0) {
  HypothesisClass<Rational> cls;
  for (int i = 0; i < members; ++i) {
    cls.members.push_back(random_universe(rng, sp, depth, full_support,
                                          deficit_percent,
                                          "rand" + std::to_string(i)));
    cls.labels.push_back("rand" + std::to_string(i));
  }
  Prior<Rational> prior;
  Dist<Rational> w = random_dist(rng, members, 7, true);
  prior.w = w.weights();
  return make_mixture(std::move(cls), std::move(prior));
}

}  // namespace embayes::testgen

#endif  // EMBAYES_TESTS_GENERATORS_HPP_
