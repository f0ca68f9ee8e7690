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

#include "embayes/bayes/loss.hpp"
#include "embayes/bayes/similarity.hpp"
#include "generators.hpp"

using namespace embayes;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

PolicyPtr<Rational> bernoulli_policy(const Space& sp, Rational p_a0,
                                     const std::string& name) {
  return std::make_shared<FnPolicy<Rational>>(
      sp,
      [p_a0](const History&) {
        Dist<Rational> d(2);
        d[0] = p_a0;
        d[1] = Rational(1) - p_a0;
        return d;
      },
      name);
}

EnvironmentPtr<Rational> bernoulli_env(const Space& sp, Rational p_e0,
                                       const std::string& name) {
  return std::make_shared<FnEnvironment<Rational>>(
      sp,
      [p_e0](const History&, int) {
        Dist<Rational> d(2);
        d[0] = p_e0;
        d[1] = Rational(1) - p_e0;
        return d;
      },
      name);
}

// grid class over shared policy and environment factors
MixturePtr<Rational> grid_mixture(const std::vector<PolicyPtr<Rational>>& pols,
                                  const std::vector<EnvironmentPtr<Rational>>& envs,
                                  const std::vector<std::vector<Rational>>& w) {
  HypothesisClass<Rational> cls;
  Prior<Rational> prior;
  for (size_t i = 0; i < pols.size(); ++i) {
    for (size_t j = 0; j < envs.size(); ++j) {
      if (w[i][j] == 0) continue;
      cls.members.push_back(interact<Rational>(pols[i], envs[j]));
      cls.labels.push_back(pols[i]->name() + "*" + envs[j]->name());
      prior.w.push_back(w[i][j]);
    }
  }
  return make_mixture(std::move(cls), std::move(prior));
}

}  // namespace

TEST_CASE("posterior closed form agrees with sequential belief updates") {
  CounterRng rng(101);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 20; ++trial) {
    auto rho = testgen::random_mixture(rng, sp, 4, 3, true, 0);
    BeliefState<Rational> b = BeliefState<Rational>::initial(rho);
    History h;
    for (int t = 0; t < 4; ++t) {
      int a = static_cast<int>(rng.next_int(2));
      int e = static_cast<int>(rng.next_int(2));
      b = b.update_on_percept(a, e);
      h.push(a, e);
      std::vector<Rational> closed = rho->posterior(h);
      std::vector<Rational> carried = rho->posterior_carried(h);
      for (int i = 0; i < rho->size(); ++i) {
        CHECK(b.weights()[i] == closed[i]);
        CHECK(carried[i] == closed[i]);
      }
    }
  }
}

TEST_CASE("belief predictions match mixture conditionals") {
  CounterRng rng(103);
  Space sp = testgen::binary_space();
  auto rho = testgen::random_mixture(rng, sp, 3, 4, true, 0);
  BeliefState<Rational> b = BeliefState<Rational>::initial(rho);
  History h;
  for (int t = 0; t < 3; ++t) {
    CHECK(b.predict_action() == rho->cond_action(h));
    for (int a = 0; a < 2; ++a) {
      CHECK(b.predict_percept(a) == rho->cond_percept(h, a));
    }
    int a = static_cast<int>(rng.next_int(2));
    int e = static_cast<int>(rng.next_int(2));
    b = b.update_on_percept(a, e);
    h.push(a, e);
  }
}

TEST_CASE("posterior moves on actions alone") {
  Space sp = testgen::binary_space();
  auto nu = bernoulli_env(sp, rat(1, 2), "nu");
  // two members share the environment and differ only in the action rule,
  // so one action observation must already shift the posterior
  auto rho = grid_mixture({bernoulli_policy(sp, rat(9, 10), "mostly0"),
                           bernoulli_policy(sp, rat(1, 10), "mostly1")},
                          {nu}, {{rat(1, 2)}, {rat(1, 2)}});
  BeliefState<Rational> b =
      BeliefState<Rational>::initial(rho).update_on_action(0);
  CHECK(b.weights()[0] == rat(9, 10));
  CHECK(b.weights()[1] == rat(1, 10));
}

TEST_CASE("realized zero-mass symbols raise errors") {
  Space sp = testgen::binary_space();
  auto rho = grid_mixture({bernoulli_policy(sp, Rational(1), "always0")},
                          {bernoulli_env(sp, rat(1, 2), "nu")},
                          {{Rational(1)}});
  BeliefState<Rational> b = BeliefState<Rational>::initial(rho);
  CHECK_THROWS_AS(b.update_on_action(1), ZeroPredictiveMass);
  History dead;
  dead.push(1, 0);
  CHECK_THROWS_AS(rho->posterior(dead), ZeroPredictiveMass);
}

TEST_CASE("carry rule holds beliefs across dead steps") {
  Space sp = testgen::binary_space();
  // both members refuse action 1; their environments tell them apart
  auto rho = grid_mixture(
      {bernoulli_policy(sp, Rational(1), "always0")},
      {bernoulli_env(sp, rat(1, 4), "nuA"), bernoulli_env(sp, rat(3, 4), "nuB")},
      {{rat(1, 2), rat(1, 2)}});

  // hypothetical percept prediction after the dead action mixes the members'
  // product-form conditionals under the carried prior
  Dist<Rational> pe = rho->cond_percept(History(), 1);
  CHECK(pe[0] == rat(1, 2));

  // after a dead turn the percept part still updates the carried weights
  History h;
  h.push(1, 0);  // percept e0 favors nuA 1/4 vs 3/4: weights (1/4, 3/4)?
  CHECK(rho->prefix(h) == 0);
  std::vector<Rational> w = rho->posterior_carried(h);
  CHECK(w[0] == rat(1, 4));
  CHECK(w[1] == rat(3, 4));
  Dist<Rational> pe2 = rho->cond_percept(h, 0);
  // mixed prediction: 1/4 * 1/4 + 3/4 * 3/4 = 10/16 = 5/8
  CHECK(pe2[0] == rat(5, 8));
  // and the action conditional at the dead node keeps the members' rule
  CHECK(rho->cond_action(h)[0] == 1);
}

TEST_CASE("coupled prior beats the product of its marginals") {
  Space sp = testgen::binary_space();
  Rational eps(1, 4);
  std::vector<PolicyPtr<Rational>> pols = {
      bernoulli_policy(sp, Rational(1) - eps, "p0"),
      bernoulli_policy(sp, eps, "p1")};
  std::vector<EnvironmentPtr<Rational>> envs = {
      bernoulli_env(sp, Rational(1) - eps, "n0"),
      bernoulli_env(sp, eps, "n1")};
  // perfectly correlated coupling
  auto rho = grid_mixture(pols, envs,
                          {{rat(1, 2), Rational(0)}, {Rational(0), rat(1, 2)}});
  // rho(e0 | a0) = (1-eps)^2 + eps^2 = 1 - 2 eps (1-eps) = 5/8 at eps = 1/4
  CHECK(rho->cond_percept(History(), 0)[0] == rat(5, 8));

  auto f = factor_decoupled(rho->hypothesis_class(), rho->prior());
  CHECK_FALSE(f.decoupled);
  CHECK(f.w_pol[0] == rat(1, 2));
  CHECK(f.w_env[0] == rat(1, 2));
  // the decoupled environment mixture ignores the policy-environment link
  CHECK(f.xi()->per(History(), 0)[0] == rat(1, 2));
}

TEST_CASE("product priors factor and predict through zeta and xi") {
  CounterRng rng(107);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<PolicyPtr<Rational>> pols = {
        testgen::random_policy(rng, sp, 3, true, "p0"),
        testgen::random_policy(rng, sp, 3, true, "p1")};
    std::vector<EnvironmentPtr<Rational>> envs = {
        testgen::random_environment(rng, sp, 3, true, "n0"),
        testgen::random_environment(rng, sp, 3, true, "n1"),
        testgen::random_environment(rng, sp, 3, true, "n2")};
    Dist<Rational> wp = testgen::random_dist(rng, 2, 7, true);
    Dist<Rational> we = testgen::random_dist(rng, 3, 7, true);
    std::vector<std::vector<Rational>> w(2, std::vector<Rational>(3));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 3; ++j) w[i][j] = wp[i] * we[j];
    }
    auto rho = grid_mixture(pols, envs, w);
    auto f = factor_decoupled(rho->hypothesis_class(), rho->prior());
    CHECK(f.decoupled);
    auto zeta = f.zeta();
    auto xi = f.xi();

    // exhaustive agreement of conditionals to depth 3
    std::function<void(History&)> walk = [&](History& h) {
      CHECK(rho->cond_action(h) == zeta->act(h));
      for (int a = 0; a < 2; ++a) {
        CHECK(rho->cond_percept(h, a) == xi->per(h, a));
      }
      if (h.length() == 2) return;
      for (int a = 0; a < 2; ++a) {
        for (int e = 0; e < 2; ++e) {
          h.push(a, e);
          walk(h);
          h.pop();
        }
      }
    };
    History h;
    walk(h);
  }
}

TEST_CASE("per-step prediction loss telescopes to the history KL") {
  CounterRng rng(109);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 10; ++trial) {
    auto rho = testgen::random_mixture(rng, sp, 4, 3, trial % 2 == 0, 0);
    for (int m = 0; m < rho->size(); ++m) {
      const auto& lambda = *rho->hypothesis_class().members[m];
      LogTermSum loss = prediction_loss(*rho, lambda, 3);
      LogTermSum kl = kl_histories(lambda, *rho, 3);
      CHECK(loss.canonical() == kl.canonical());
    }
  }
}

TEST_CASE("prediction loss is bounded by the log prior weight") {
  CounterRng rng(113);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 10; ++trial) {
    int deficit = trial % 2 == 0 ? 0 : 40;
    auto rho = testgen::random_mixture(rng, sp, 3, 3, trial % 3 == 0, deficit);
    for (int m = 0; m < rho->size(); ++m) {
      SolomonoffCertificate cert = solomonoff_bound_certificate(*rho, m, 3);
      CHECK(cert.valid);
      if (deficit == 0) {
        double loss =
            prediction_loss(*rho, *rho->hypothesis_class().members[m], 3)
                .to_double();
        double budget = -std::log(
            to_double<Rational>(rho->prior().w[m]));
        CHECK(loss <= budget + 1e-12);
      }
    }
  }
}

TEST_CASE("dominance failures are rejected, not averaged over") {
  Space sp = testgen::binary_space();
  auto truth = grid_mixture({bernoulli_policy(sp, rat(1, 2), "p")},
                            {bernoulli_env(sp, rat(1, 2), "n")},
                            {{Rational(1)}});
  auto narrow = grid_mixture({bernoulli_policy(sp, Rational(1), "only0")},
                             {bernoulli_env(sp, rat(1, 2), "n")},
                             {{Rational(1)}});
  CHECK_THROWS_AS(prediction_loss(*narrow, *truth, 2), SupportViolation);
  CHECK_THROWS_AS(kl_histories(*truth, *narrow, 2), SupportViolation);
}

TEST_CASE("loss gap between coupled and decoupled priors") {
  CounterRng rng(127);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<PolicyPtr<Rational>> pols = {
        testgen::random_policy(rng, sp, 3, true, "p0"),
        testgen::random_policy(rng, sp, 3, true, "p1")};
    std::vector<EnvironmentPtr<Rational>> envs = {
        testgen::random_environment(rng, sp, 3, true, "n0"),
        testgen::random_environment(rng, sp, 3, true, "n1")};
    // random coupled prior over the grid
    Dist<Rational> raw = testgen::random_dist(rng, 4, 7, true);
    auto rho = grid_mixture(pols, envs, {{raw[0], raw[1]}, {raw[2], raw[3]}});
    auto f = factor_decoupled(rho->hypothesis_class(), rho->prior());
    std::vector<std::vector<Rational>> wd(2, std::vector<Rational>(2));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) wd[i][j] = f.w_pol[i] * f.w_env[j];
    }
    auto rho_d = grid_mixture(pols, envs, wd);

    LossGap gap = avg_loss_gap(*rho, *rho_d, 3);
    CHECK(gap.weighted_loss_difference.canonical() ==
          gap.mixture_log_ratio.canonical());
    CHECK(gap.mixture_log_ratio.exact_lower_bound() >= 0);
  }
}

TEST_CASE("structural similarity of a correlated pair is one bit") {
  Space sp = testgen::binary_space();
  std::vector<PolicyPtr<Rational>> pols = {
      bernoulli_policy(sp, rat(1, 3), "p0"),
      bernoulli_policy(sp, rat(2, 3), "p1")};
  std::vector<EnvironmentPtr<Rational>> envs = {
      bernoulli_env(sp, rat(1, 3), "n0"), bernoulli_env(sp, rat(2, 3), "n1")};
  auto rho = grid_mixture(pols, envs,
                          {{rat(1, 2), Rational(0)}, {Rational(0), rat(1, 2)}});
  auto f = factor_decoupled(rho->hypothesis_class(), rho->prior());

  SimilarityReport rep = structural_similarity(*rho, f, 0, 3);
  LogValue log2;
  log2.add_term(Rational(1), Rational(2));
  CHECK(rep.exact == log2);
  CHECK(rep.bits == doctest::Approx(1.0));

  AvgSimilarityReport avg = avg_structural_similarity(*rho, f, 3);
  CHECK(avg.exact.canonical() == log2);
  CHECK(avg.nonneg_certified);
}

TEST_CASE("structural similarity vanishes for product priors") {
  Space sp = testgen::binary_space();
  std::vector<PolicyPtr<Rational>> pols = {
      bernoulli_policy(sp, rat(1, 3), "p0"),
      bernoulli_policy(sp, rat(2, 3), "p1")};
  std::vector<EnvironmentPtr<Rational>> envs = {
      bernoulli_env(sp, rat(1, 3), "n0"), bernoulli_env(sp, rat(2, 3), "n1")};
  auto rho = grid_mixture(pols, envs,
                          {{rat(1, 4), rat(1, 4)}, {rat(1, 4), rat(1, 4)}});
  auto f = factor_decoupled(rho->hypothesis_class(), rho->prior());
  CHECK(f.decoupled);
  for (int m = 0; m < 4; ++m) {
    CHECK(structural_similarity(*rho, f, m, 2).exact.is_zero());
  }
  AvgSimilarityReport avg = avg_structural_similarity(*rho, f, 2);
  CHECK(avg.exact.canonical().is_zero());
  CHECK(avg.nonneg_certified);
}

TEST_CASE("average similarity is nonnegative on random couplings") {
  CounterRng rng(131);
  Space sp = testgen::binary_space();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PolicyPtr<Rational>> pols = {
        testgen::random_policy(rng, sp, 2, true, "p0"),
        testgen::random_policy(rng, sp, 2, true, "p1")};
    std::vector<EnvironmentPtr<Rational>> envs = {
        testgen::random_environment(rng, sp, 2, true, "n0"),
        testgen::random_environment(rng, sp, 2, true, "n1")};
    Dist<Rational> raw = testgen::random_dist(rng, 4, 7, true);
    auto rho = grid_mixture(pols, envs, {{raw[0], raw[1]}, {raw[2], raw[3]}});
    auto f = factor_decoupled(rho->hypothesis_class(), rho->prior());
    AvgSimilarityReport avg = avg_structural_similarity(*rho, f, 2);
    CHECK(avg.nonneg_certified);
    CHECK(avg.nats >= -1e-12);
  }
}

TEST_CASE("grain of uncertainty tracks the support depth") {
  Space sp = testgen::binary_space();
  auto pi = std::make_shared<FnPolicy<Rational>>(
      sp,
      [](const History& h) {
        if (h.empty()) return Dist<Rational>::uniform(2);
        return Dist<Rational>::point(2, 0);
      },
      "narrowing");
  auto nu = bernoulli_env(sp, rat(1, 2), "nu");
  HypothesisClass<Rational> cls;
  cls.members = {interact<Rational>(PolicyPtr<Rational>(pi), nu)};
  cls.labels = {"only"};
  Prior<Rational> prior;
  prior.w = {Rational(1)};
  auto rho = make_mixture(std::move(cls), std::move(prior));
  CHECK(grain_of_uncertainty(*rho, 1));
  CHECK_FALSE(grain_of_uncertainty(*rho, 2));
  auto f = factor_decoupled(rho->hypothesis_class(), rho->prior());
  CHECK_THROWS_AS(avg_structural_similarity(*rho, f, 2), NotFullySupported);
}

TEST_CASE("policy mixtures update on the action string only") {
  Space sp = testgen::binary_space();
  auto p0 = constant_policy<Rational>(sp, 0, "c0");
  auto p1 = constant_policy<Rational>(sp, 1, "c1");
  MixturePolicy<Rational> zeta({p0, p1}, {rat(1, 3), rat(2, 3)});
  History h;
  h.push(0, 1);  // percept part must not matter
  std::vector<Rational> w = zeta.posterior(h);
  CHECK(w[0] == 1);
  CHECK(w[1] == 0);
  CHECK(zeta.act(h)[0] == 1);
  History dead;
  dead.push(0, 0);
  dead.push(1, 0);
  CHECK_THROWS_AS(zeta.posterior(dead), ZeroPredictiveMass);
}
