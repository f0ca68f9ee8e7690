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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "embayes/core/completion_ladder.hpp"
#include "embayes/core/logvalue.hpp"
#include "embayes/core/multi_agent.hpp"
#include "embayes/core/tv.hpp"
#include "embayes/core/universe.hpp"
#include "generators.hpp"

using namespace embayes;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

// single-action space with a Bernoulli percept
UniversePtr<Rational> bernoulli_universe(const Space& sp, Rational p_e0,
                                         int depth) {
  auto act = [&sp](const History&) {
    return Dist<Rational>::point(sp.actions.size(), 0);
  };
  auto per = [&sp, p_e0](const History&, int) {
    Dist<Rational> d(sp.percepts.size());
    d[0] = p_e0;
    d[1] = Rational(1) - p_e0;
    return d;
  };
  return TableUniverse<Rational>::from_conditionals(sp, depth, act, per,
                                                    "bernoulli");
}

}  // namespace

TEST_CASE("history tokens round trip") {
  Space sp{Alphabet({"C", "D"}), Alphabet({"C", "D"})};
  History h;
  h.push(0, 0);
  h.push(0, 1);
  CHECK(h.token(sp) == "C/C C/D");
  CHECK(History::parse("C/C C/D", sp) == h);
  CHECK(History::parse("-", sp) == History());
  CHECK(History().token(sp) == "-");
  CHECK_THROWS_AS(History::parse("C/X", sp), AlphabetMismatch);
}

TEST_CASE("alphabet rejects bad symbols") {
  CHECK_THROWS_AS(Alphabet({"a/b"}), AlphabetMismatch);
  CHECK_THROWS_AS(Alphabet({""}), AlphabetMismatch);
  Alphabet a({"x", "y"});
  CHECK(a.index("y") == 1);
  CHECK_THROWS_AS(a.index("z"), AlphabetMismatch);
}

TEST_CASE("interact equals the explicit product") {
  CounterRng rng(7);
  Space sp = testgen::binary_space();
  auto pi = testgen::random_deterministic_policy(rng, sp, 3, "pi");
  auto nu = testgen::random_environment(rng, sp, 3, true, "nu");
  auto u = interact<Rational>(pi, nu);
  check_semimeasure(*u, 3);

  // independent route: accumulate the product by hand over every history
  std::function<void(History&, Rational)> rec = [&](History& h, Rational m) {
    CHECK(u->prefix(h) == m);
    if (h.length() == 3) return;
    Dist<Rational> pa = pi->act(h);
    for (int a = 0; a < sp.actions.size(); ++a) {
      CHECK(u->prefix_act(h, a) == m * pa[a]);
      Dist<Rational> pe = nu->per(h, a);
      for (int e = 0; e < sp.percepts.size(); ++e) {
        h.push(a, e);
        rec(h, m * pa[a] * pe[e]);
        h.pop();
      }
    }
  };
  History h;
  rec(h, Rational(1));
}

TEST_CASE("interact keeps counterfactual conditionals at zero mass") {
  Space sp = testgen::binary_space();
  auto pi = constant_policy<Rational>(sp, 0, "always0");
  CounterRng rng(9);
  auto nu = testgen::random_environment(rng, sp, 4, true, "nu");
  auto u = interact<Rational>(pi, nu);
  History off;
  off.push(1, 0);  // action 1 is off-policy, mass zero
  CHECK(u->prefix(off) == 0);
  CHECK(u->cond_action(off)[0] == 1);          // product form survives
  CHECK(u->cond_percept(off, 1) == nu->per(off, 1));
}

TEST_CASE("table universe conditionals are exact ratios") {
  CounterRng rng(21);
  Space sp = testgen::binary_space();
  auto u = testgen::random_universe(rng, sp, 3, true, 0);
  History h;
  h.push(0, 1);
  Dist<Rational> pa = u->cond_action(h);
  for (int a = 0; a < 2; ++a) {
    CHECK(pa[a] == u->prefix_act(h, a) / u->prefix(h));
  }
  Dist<Rational> pe = u->cond_percept(h, 1);
  for (int e = 0; e < 2; ++e) {
    CHECK(pe[e] == u->prefix(h.extended(1, e)) / u->prefix_act(h, 1));
  }
}

TEST_CASE("undefined conditional at zero mass without completion") {
  Space sp = testgen::binary_space();
  // table with support only on action 0
  auto act = [&sp](const History&) {
    return Dist<Rational>::point(sp.actions.size(), 0);
  };
  auto per = [&sp](const History&, int) {
    return Dist<Rational>::uniform(sp.percepts.size());
  };
  auto u = TableUniverse<Rational>::from_conditionals(sp, 2, act, per, "t");
  History dead;
  dead.push(1, 0);
  CHECK_THROWS_AS(u->cond_action(dead), UndefinedConditional);
  CHECK_THROWS_AS(u->cond_percept(dead, 0), UndefinedConditional);
}

TEST_CASE("ladder completion takes the first positive level") {
  Space sp = testgen::binary_space();
  auto main_u = interact<Rational>(constant_policy<Rational>(sp, 0, "p0"),
                                   std::make_shared<FnEnvironment<Rational>>(
                                       sp,
                                       [](const History&, int) {
                                         return Dist<Rational>::point(2, 0);
                                       },
                                       "e0"));
  auto fallback = interact<Rational>(constant_policy<Rational>(sp, 1, "p1"),
                                     std::make_shared<FnEnvironment<Rational>>(
                                         sp,
                                         [](const History&, int) {
                                           return Dist<Rational>::point(2, 1);
                                         },
                                         "e1"));
  auto table = TableUniverse<Rational>::from_conditionals(
      sp, 3,
      [&](const History&) { return Dist<Rational>::point(2, 0); },
      [&](const History&, int) { return Dist<Rational>::point(2, 0); }, "t");
  table->set_completion(std::make_shared<LadderCompletion<Rational>>(
      std::vector<UniversePtr<Rational>>{main_u, fallback}));

  History h;
  h.push(0, 0);
  // on the main path the ladder agrees with the exact conditionals
  CHECK(table->cond_action(h)[0] == 1);
  // off the main support the first ladder level is dead too, so the
  // fallback's conditionals decide the limit
  History off;
  off.push(1, 1);
  CHECK(table->cond_action(off)[1] == 1);
  CHECK(table->cond_percept(off, 1)[1] == 1);
  check_completion_consistency(*table, *table->completion(), 3);
}

TEST_CASE("semimeasure validation catches violations") {
  Space sp = testgen::binary_space();
  std::map<History, Rational> node;
  std::map<std::pair<History, int>, Rational> act;
  History root;
  node[root] = 1;
  act[{root, 0}] = rat(3, 4);
  act[{root, 1}] = rat(1, 2);  // 3/4 + 1/2 > 1: monotonicity violation
  auto bad = std::make_shared<TableUniverse<Rational>>(sp, 1, node, act, "bad");
  CHECK_THROWS_AS(check_semimeasure(*bad, 1), SupportViolation);

  CounterRng rng(5);
  for (int i = 0; i < 10; ++i) {
    auto ok = testgen::random_universe(rng, sp, 3, false, 40);
    check_semimeasure(*ok, 3);
  }
}

TEST_CASE("D_1 between two Bernoulli universes") {
  Space sp = testgen::binary_space();
  auto u1 = bernoulli_universe(sp, rat(2, 5), 3);
  auto u2 = bernoulli_universe(sp, rat(7, 10), 3);
  // same action part, percept parts differ by 3/10 on each symbol
  CHECK(total_variation_k(*u1, *u2, History(), 1) == rat(3, 10));
  CHECK(total_variation_k(*u1, *u1, History(), 2) == 0);
}

TEST_CASE("D_k is nondecreasing in k, deficits included") {
  CounterRng rng(31);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 25; ++trial) {
    auto u1 = testgen::random_universe(rng, sp, 4, false, 30);
    auto u2 = testgen::random_universe(rng, sp, 4, false, 30);
    Rational prev(0);
    for (int k = 0; k <= 4; ++k) {
      Rational d = total_variation_k(*u1, *u2, History(), k);
      CHECK(d >= prev);
      CHECK(d <= 1);
      prev = d;
    }
  }
}

TEST_CASE("D_k conditional on a positive-mass history") {
  CounterRng rng(33);
  Space sp = testgen::binary_space();
  auto u1 = testgen::random_universe(rng, sp, 4, true, 0);
  auto u2 = testgen::random_universe(rng, sp, 4, true, 0);
  History h;
  h.push(0, 0);
  // oracle: direct sum over the four (a,e) continuations at k=1
  Rational acc(0);
  for (int a = 0; a < 2; ++a) {
    for (int e = 0; e < 2; ++e) {
      History x = h.extended(a, e);
      acc += abs_val<Rational>(u1->prefix(x) / u1->prefix(h) -
                               u2->prefix(x) / u2->prefix(h));
    }
  }
  CHECK(total_variation_k(*u1, *u2, h, 1) == acc / 2);
}

TEST_CASE("depth guards fire") {
  CounterRng rng(41);
  Space sp = testgen::binary_space();
  auto u = testgen::random_universe(rng, sp, 2, true, 0);
  History h;
  h.push(0, 0);
  h.push(0, 0);
  CHECK_THROWS_AS(u->cond_action(h), DepthExceeded);
  CHECK_THROWS_AS(total_variation_k(*u, *u, h, 1), DepthExceeded);
}

TEST_CASE("personal environment matches brute-force marginalization") {
  // two seats, perfect monitoring of the co-player's action as the percept
  Space seat{Alphabet({"x", "y"}), Alphabet({"x", "y"})};
  CounterRng rng(55);

  // co-player policy: stochastic, history dependent
  auto co = std::make_shared<FnPolicy<Rational>>(
      seat,
      [](const History& h) {
        Dist<Rational> d(2);
        if (h.length() % 2 == 0) {
          d[0] = rat(1, 3);
          d[1] = rat(2, 3);
        } else {
          d[0] = rat(3, 4);
          d[1] = rat(1, 4);
        }
        return d;
      },
      "co");

  // joint env: each seat observes the other's action, deterministically
  auto sigma = std::make_shared<FnMultiAgentEnv<Rational>>(
      std::vector<Space>{seat, seat},
      [](const JointHistory&, const std::vector<int>& acts) {
        typename MultiAgentEnv<Rational>::JointDist out;
        out.push_back({{acts[1], acts[0]}, Rational(1)});
        return out;
      },
      "perfect_monitor");

  auto env = personal_environment<Rational>(
      sigma, {nullptr, PolicyPtr<Rational>(co)}, 0);

  // my percept should be the co-player's policy applied to the mirrored
  // personal history
  History mine;
  mine.push(0, 1);  // i played x, saw y  => co played y, saw x
  History theirs;
  theirs.push(1, 0);
  Dist<Rational> pred = env->per(mine, 1);
  Dist<Rational> want = co->act(theirs);
  CHECK(pred[0] == want[0]);
  CHECK(pred[1] == want[1]);
}

TEST_CASE("personal environment filters noisy joint percepts") {
  // seat 0 observes the co action through symmetric noise of 1/5; the filter
  // has to mix over joint histories consistent with the personal one
  Space seat{Alphabet({"x", "y"}), Alphabet({"x", "y"})};
  auto co = std::make_shared<FnPolicy<Rational>>(
      seat,
      [](const History& h) {
        // co player repeats what it saw last turn, starts with x
        if (h.empty()) return Dist<Rational>::point(2, 0);
        return Dist<Rational>::point(2, h.turn(h.length() - 1).percept);
      },
      "mirror_co");
  Rational noise(1, 5);
  auto sigma = std::make_shared<FnMultiAgentEnv<Rational>>(
      std::vector<Space>{seat, seat},
      [noise](const JointHistory&, const std::vector<int>& acts) {
        typename MultiAgentEnv<Rational>::JointDist out;
        // seat 1 sees acts[0] exactly; seat 0 sees acts[1] with noise
        out.push_back({{acts[1], acts[0]}, Rational(1) - noise});
        out.push_back({{1 - acts[1], acts[0]}, noise});
        return out;
      },
      "noisy_monitor");
  auto env = personal_environment<Rational>(
      sigma, {nullptr, PolicyPtr<Rational>(co)}, 0);

  // brute force over co-player trajectories gives the same one-step
  // prediction from the empty history
  Dist<Rational> got = env->per(History(), 0);
  // co plays x surely on turn 1; i see x with prob 4/5
  CHECK(got[0] == rat(4, 5));
  CHECK(got[1] == rat(1, 5));

  // after i saw a noisy y, the filter must still predict from the joint
  // posterior: co saw my action x surely, so next co action copies x
  History h1;
  h1.push(0, 1);
  Dist<Rational> got2 = env->per(h1, 0);
  CHECK(got2[0] == rat(4, 5));
  CHECK(got2[1] == rat(1, 5));
}

TEST_CASE("formal log values canonicalize and certify") {
  LogValue a;
  a.add_term(Rational(2), rat(2, 1));   // 2 log 2
  LogValue b;
  b.add_term(Rational(1), rat(4, 1));   // log 4
  CHECK(a == b);
  CHECK((a - b).is_zero());

  LogValue c;
  c.add_term(rat(1, 3), rat(9, 8));
  CHECK_FALSE(c.is_zero());
  CHECK(c.to_double() == doctest::Approx(std::log(9.0 / 8.0) / 3.0));

  LogTermSum s;
  s.add(rat(1, 2), rat(3, 2));
  s.add(rat(1, 4), rat(9, 7));
  CHECK(s.nonnegative_termwise());
  CHECK(s.exact_lower_bound() >= 0);

  LogTermSum mixed;
  mixed.add(Rational(1), rat(3, 2));
  mixed.add(Rational(-1), rat(10, 9));
  // log(3/2) - log(10/9) = log(27/20) > 0, certified by the rational bound
  CHECK_FALSE(mixed.nonnegative_termwise());
  CHECK(mixed.exact_lower_bound() >= 0);
}

TEST_CASE("factorization handles large prime bases") {
  // 1000003 is prime and beyond the trial-division window times itself
  auto f = LogValue::factorize(BigInt(1000003) * 8);
  bool saw_prime = false;
  for (auto& [p, k] : f) {
    if (p == 1000003) saw_prime = true;
  }
  CHECK(saw_prime);
  LogValue v;
  v.add_term(Rational(1), Rational(BigInt(1000003) * 2, BigInt(1000003)));
  LogValue two;
  two.add_term(Rational(1), Rational(2));
  CHECK(v == two);
}
