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

#include "embayes/planning/kstep.hpp"
#include "embayes/planning/value.hpp"
#include "generators.hpp"

using namespace embayes;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

// deterministic echo world: action 0 yields percept 0 (reward 1),
// action 1 yields percept 1 (reward 0); the self model always plays 0
UniversePtr<Rational> echo_world(const Space& sp) {
  auto nu = std::make_shared<FnEnvironment<Rational>>(
      sp,
      [](const History&, int a) { return Dist<Rational>::point(2, a); },
      "echo");
  return interact<Rational>(constant_policy<Rational>(sp, 0, "self0"),
                            EnvironmentPtr<Rational>(nu));
}

DiscountedTask<Rational> unit_task(Rational gamma) {
  DiscountedTask<Rational> t;
  t.gamma = gamma;
  t.reward = {Rational(1), Rational(0)};
  return t;
}

}  // namespace

TEST_CASE("discount zero collapses planning to one exact step") {
  Space sp = testgen::binary_space();
  auto u = echo_world(sp);
  DiscountedTask<Rational> task = unit_task(Rational(0));
  PlanBudget b = PlanBudget::from_tolerance(0.0, 1e-6);
  CHECK(b.horizon == 1);
  CHECK(q_value(*u, task, History(), 0, b, Continuation::kOptimal).value == 1);
  CHECK(q_value(*u, task, History(), 1, b, Continuation::kOptimal).value == 0);
  BestResponse br = embedded_best_response(*u, task, History(), b);
  CHECK(br.action == 0);
  CHECK(br.truncation == 0.0);
}

TEST_CASE("two-step values on the echo world by hand") {
  Space sp = testgen::binary_space();
  auto u = echo_world(sp);
  DiscountedTask<Rational> task = unit_task(rat(1, 2));
  PlanBudget b;
  b.horizon = 2;
  // self rollout: (1-g)(1 + g*1) = 3/4
  CHECK(policy_value(*u, task, History(), b).value == rat(3, 4));
  CHECK(optimal_value(*u, task, History(), b).value == rat(3, 4));
  // taking the bad action once, then recovering optimally: (1-g) g = 1/4
  CHECK(q_value(*u, task, History(), 1, b, Continuation::kOptimal).value ==
        rat(1, 4));
  // bad action with the self continuation recovers too (self plays 0)
  CHECK(q_value(*u, task, History(), 1, b, Continuation::kSelf).value ==
        rat(1, 4));
  CHECK(truncation_certificate(task, 2) == doctest::Approx(0.25));
}

TEST_CASE("one-step lookahead equals the self-continuation q") {
  CounterRng rng(211);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 10; ++trial) {
    auto rho = testgen::random_mixture(rng, sp, 4, 3, true, 0);
    DiscountedTask<Rational> task = unit_task(rat(7, 10));
    PlanBudget b;
    b.horizon = 4;
    History h;
    h.push(static_cast<int>(rng.next_int(2)), static_cast<int>(rng.next_int(2)));
    for (int a = 0; a < 2; ++a) {
      CHECK(k_step_q(*rho, task, h, a, 1, PlanBudget{3}).value ==
            q_value(*rho, task, h, a, PlanBudget{3}, Continuation::kSelf).value);
    }
  }
}

TEST_CASE("full-depth lookahead equals the optimal continuation") {
  CounterRng rng(223);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 10; ++trial) {
    auto rho = testgen::random_mixture(rng, sp, 4, 2, true, 0);
    DiscountedTask<Rational> task = unit_task(rat(3, 10));
    PlanBudget b;
    b.horizon = 4;
    for (int a = 0; a < 2; ++a) {
      CHECK(k_step_q(*rho, task, History(), a, 4, b).value ==
            q_value(*rho, task, History(), a, b, Continuation::kOptimal).value);
      // extra lookahead levels beyond the horizon change nothing
      CHECK(k_step_q(*rho, task, History(), a, 9, b).value ==
            k_step_q(*rho, task, History(), a, 4, b).value);
    }
  }
}

TEST_CASE("lookahead values grow with k up to truncation") {
  CounterRng rng(227);
  Space sp = testgen::binary_space();
  for (Rational gamma : {rat(3, 10), rat(7, 10)}) {
    double slack = 2 * std::pow(to_double<Rational>(gamma), 4);
    for (int trial = 0; trial < 15; ++trial) {
      auto rho = testgen::random_mixture(rng, sp, 4, 3, true, 0);
      DiscountedTask<Rational> task = unit_task(gamma);
      PlanBudget b;
      b.horizon = 4;
      for (int a = 0; a < 2; ++a) {
        double prev = -1.0;
        for (int k = 1; k <= 4; ++k) {
          double q = to_double<Rational>(
              k_step_q(*rho, task, History(), a, k, b).value);
          CHECK(q >= prev - slack);
          prev = q;
        }
      }
    }
  }
}

TEST_CASE("planner rollouts sandwich the self value") {
  CounterRng rng(229);
  Space sp = testgen::binary_space();
  Rational gamma = rat(7, 10);
  double g4 = std::pow(0.7, 4);
  for (int trial = 0; trial < 15; ++trial) {
    auto rho = testgen::random_mixture(rng, sp, 4, 3, true, 0);
    DiscountedTask<Rational> task = unit_task(gamma);
    PlanBudget b;
    b.horizon = 4;
    for (int k = 1; k <= 3; ++k) {
      double v_roll = to_double<Rational>(
          k_step_policy_value(*rho, task, History(), k, b).value);
      double q_k_best = -1.0, q_1_best = -1.0;
      for (int a = 0; a < 2; ++a) {
        q_k_best = std::max(q_k_best, to_double<Rational>(
            k_step_q(*rho, task, History(), a, k, b).value));
        q_1_best = std::max(q_1_best, to_double<Rational>(
            k_step_q(*rho, task, History(), a, 1, b).value));
      }
      double v_self =
          to_double<Rational>(policy_value(*rho, task, History(), b).value);
      CHECK(v_roll >= q_k_best - 2 * g4);
      CHECK(q_k_best >= q_1_best - 2 * g4);
      // max_a Q^1 >= V_self holds exactly at a shared horizon
      CHECK(q_1_best >= v_self - 1e-15);
    }
  }
}

TEST_CASE("ties resolve to the lowest action index") {
  Space sp = testgen::binary_space();
  auto u = echo_world(sp);
  DiscountedTask<Rational> task;
  task.gamma = rat(1, 2);
  task.reward = {rat(1, 2), rat(1, 2)};  // flat rewards make every q equal
  PlanBudget b;
  b.horizon = 3;
  BestResponse br = embedded_best_response(*u, task, History(), b);
  CHECK(br.action == 0);
  CHECK(br.q[0] == doctest::Approx(br.q[1]));
  CHECK(k_step_action(*u, task, History(), 2, b) == 0);
}

TEST_CASE("horizon truncation is certified by gamma to the H") {
  CounterRng rng(233);
  Space sp = testgen::binary_space();
  Rational gamma = rat(1, 2);
  for (int trial = 0; trial < 10; ++trial) {
    auto rho = testgen::random_mixture(rng, sp, 8, 2, true, 0);
    DiscountedTask<Rational> task = unit_task(gamma);
    PlanBudget shallow{3};
    PlanBudget deep{8};
    double vs =
        to_double<Rational>(optimal_value(*rho, task, History(), shallow).value);
    double vd =
        to_double<Rational>(optimal_value(*rho, task, History(), deep).value);
    CHECK(std::abs(vs - vd) <= std::pow(0.5, 3) + 1e-15);
    CHECK(optimal_value(*rho, task, History(), shallow).truncation ==
          doctest::Approx(0.125));
  }
}

TEST_CASE("tolerance picks the matching horizon") {
  PlanBudget b = PlanBudget::from_tolerance(0.5, 1e-6);
  CHECK(b.horizon == 20);
  CHECK(std::pow(0.5, b.horizon) <= 1e-6);
  CHECK(PlanBudget::from_tolerance(0.0, 1e-6).horizon == 1);
  CHECK(PlanBudget::from_tolerance(0.9, 0.5).horizon >= 1);
}

TEST_CASE("budgets beyond the universe depth are refused") {
  CounterRng rng(239);
  Space sp = testgen::binary_space();
  auto rho = testgen::random_mixture(rng, sp, 3, 2, true, 0);
  DiscountedTask<Rational> task = unit_task(rat(1, 2));
  History h;
  h.push(0, 0);
  CHECK_THROWS_AS(optimal_value(*rho, task, h, PlanBudget{3}),
                  DepthExceeded);
  CHECK_THROWS_AS(k_step_q(*rho, task, h, 0, 2, PlanBudget{3}),
                  DepthExceeded);
  // the approximation-scheduled agent clamps instead
  CHECK_NOTHROW(approx_agent_step(*rho, task, h, 2, 1e-9));
  History full;
  full.push(0, 0);
  full.push(0, 0);
  full.push(0, 0);
  CHECK_THROWS_AS(approx_agent_step(*rho, task, full, 1, 1e-9),
                  DepthExceeded);
}

TEST_CASE("rule rollouts reproduce the self value") {
  CounterRng rng(241);
  Space sp = testgen::binary_space();
  auto rho = testgen::random_mixture(rng, sp, 4, 3, true, 0);
  DiscountedTask<Rational> task = unit_task(rat(7, 10));
  PlanBudget b;
  b.horizon = 4;
  planning_detail::ActionRule<Rational> own = [&rho](const History& h) {
    return rho->cond_action(h);
  };
  CHECK(rule_value(*rho, task, own, History(), b).value ==
        policy_value(*rho, task, History(), b).value);
}
