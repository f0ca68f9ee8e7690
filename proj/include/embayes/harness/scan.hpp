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

#ifndef EMBAYES_HARNESS_SCAN_HPP_
#define EMBAYES_HARNESS_SCAN_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "embayes/harness/tail.hpp"

namespace embayes {
namespace harness {

// Empirical convergence diagnostics over one record. first_t is the first
// round whose pre-action beliefs are all within eps of their truths in
// k-step total variation; absent means "not reached". Verdicts price the
// realized profile: the distance trace alone follows any dk_truth stand-in
// the run recorded against.
struct ConvergenceReport {
  double eps = 0.0;
  int k_scan = 3;
  int rounds = 0;
  std::optional<int> first_t;  // 1-indexed
  std::vector<std::vector<std::optional<double>>> dk;  // [round][seat]
  std::optional<Verdict> see_at_first;
  std::optional<Verdict> scee_at_first;
  std::optional<Verdict> see_at_final;  // final t = the last round
  std::optional<Verdict> scee_at_final;
  std::string notes;

  bool reached() const { return first_t.has_value(); }
  bool pass() const {
    if (!reached()) return false;
    for (const auto* v :
         {&see_at_first, &scee_at_first, &see_at_final, &scee_at_final}) {
      if (v->has_value() && !(*v)->pass) return false;
    }
    return true;
  }
};

namespace harness_detail {

// first planning seat's budget; the scan reuses the run's own pricing
template <class S>
PlanBudget scan_budget(const SelfPlaySpec<S>& spec, int* from_seat) {
  for (size_t i = 0; i < spec.seats.size(); ++i) {
    if (spec.seats[i].plans()) {
      *from_seat = static_cast<int>(i);
      return spec.seats[i].budget;
    }
  }
  *from_seat = -1;
  return PlanBudget{};
}

}  // namespace harness_detail

template <class S>
ConvergenceReport convergence_scan(const SelfPlayRun<S>& run, double eps,
                                   int k_scan = 0, double delta = 0.0) {
  const TrajectoryRecord<S>& rec = run.record;
  if (k_scan <= 0) k_scan = rec.k_scan;
  int n = rec.players();

  ConvergenceReport rep;
  rep.eps = eps;
  rep.k_scan = k_scan;
  rep.rounds = rec.rounds();

  bool any_mixture = false;
  for (const auto& seat : run.spec.seats) any_mixture |= (seat.mixture != nullptr);
  if (!any_mixture) {
    throw SupportViolation("convergence_scan: no seat carries a mixture");
  }

  // distance trace, reusing the record when it was taken at the same k
  bool reuse = run.spec.record_dk && k_scan == rec.k_scan;
  rep.dk.resize(rec.rounds());
  for (int t = 0; t < rec.rounds(); ++t) {
    rep.dk[t].resize(n);
    for (int i = 0; i < n; ++i) {
      const auto& mix = run.spec.seats[i].mixture;
      if (!mix) continue;
      if (reuse) {
        rep.dk[t][i] = rec.steps[t].dk[i];
        continue;
      }
      History h = rec.personal(i, t);
      if (mix->prefix(h) == 0) continue;
      const Universe<S>& target =
          (!run.spec.dk_truth.empty() && run.spec.dk_truth[i])
              ? *run.spec.dk_truth[i]
              : *run.truths[i];
      rep.dk[t][i] = to_double<S>(total_variation_k(*mix, target, h, k_scan));
    }
  }

  for (int t = 0; t < rec.rounds() && !rep.first_t; ++t) {
    bool all = true;
    for (int i = 0; i < n; ++i) {
      if (!run.spec.seats[i].mixture) continue;
      all = all && rep.dk[t][i].has_value() && *rep.dk[t][i] <= eps;
    }
    if (all) rep.first_t = t + 1;
  }

  // equilibrium verdicts need a belief and a task on every seat
  bool can_judge = true;
  for (int i = 0; i < n; ++i) {
    const auto& seat = run.spec.seats[i];
    can_judge = can_judge && seat.mixture &&
                static_cast<int>(seat.task.reward.size()) ==
                    static_cast<int>(rec.seats[i].percepts.size());
  }
  int budget_seat = -1;
  PlanBudget budget = harness_detail::scan_budget(run.spec, &budget_seat);
  if (can_judge) {
    std::vector<DiscountedTask<S>> tasks;
    for (const auto& seat : run.spec.seats) tasks.push_back(seat.task);
    std::vector<UniversePtr<S>> beliefs = run.beliefs();

    // a seat whose own play left its model's support has no conditional
    // belief to judge; report that as a support failure, not a crash
    auto support_fail = [](const std::exception& e) {
      Verdict v;
      v.fail(-1, "support", e.what(), 1.0);
      return v;
    };
    auto judge = [&](int t, std::optional<Verdict>* see,
                     std::optional<Verdict>* scee) {
      std::vector<History> at;
      for (int i = 0; i < n; ++i) at.push_back(rec.personal(i, t - 1));
      try {
        *see = check_epsilon_see(run.policies, beliefs, run.spec.sigma, eps,
                                 tasks, budget, k_scan, at);
      } catch (const UndefinedConditional& e) {
        *see = support_fail(e);
      }
      try {
        TailGame<S> tg = tail_extract(run, t);
        *scee = check_eps_delta_scee(tg.device, tg.views, eps, delta, tasks,
                                     budget, k_scan);
      } catch (const UndefinedConditional& e) {
        *scee = support_fail(e);
      }
    };
    if (rep.first_t) judge(*rep.first_t, &rep.see_at_first, &rep.scee_at_first);
    if (rec.rounds() >= 1) {
      judge(rec.rounds(), &rep.see_at_final, &rep.scee_at_final);
    }
  }

  rep.notes = "value gaps tolerated up to br_slack(" +
              std::to_string(budget.br_slack) + ") + gamma^" +
              std::to_string(budget.horizon) +
              (delta > 0 ? " + delta(" + std::to_string(delta) + ")" : "") +
              "; budget from seat " + std::to_string(budget_seat) +
              "; beliefs compared in D_k at k=" + std::to_string(k_scan);
  return rep;
}

// one seed's outcome in a sweep: whether the distance threshold was reached
// and whether the tail checks at that round passed
struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<int> first_t;
  bool see_pass = false;
  bool scee_pass = false;
};

// Multi-seed mode: the convergence theorems quantify over histories, which a
// single seeded run cannot certify, so sweeps report empirical rates with no
// stronger claim.
struct SweepSummary {
  double eps = 0.0;
  int k_scan = 3;
  std::vector<SeedOutcome> outcomes;  // sorted by seed

  int runs() const { return static_cast<int>(outcomes.size()); }
  int reached() const {
    int c = 0;
    for (const auto& o : outcomes) c += o.first_t.has_value();
    return c;
  }
  int see_passes() const {
    int c = 0;
    for (const auto& o : outcomes) c += o.see_pass;
    return c;
  }
  int scee_passes() const {
    int c = 0;
    for (const auto& o : outcomes) c += o.scee_pass;
    return c;
  }
};

template <class S>
SweepSummary seed_sweep(SelfPlaySpec<S> spec,
                        const std::vector<std::uint64_t>& seeds, double eps,
                        int k_scan = 0, double delta = 0.0) {
  if (seeds.empty()) throw SupportViolation("seed_sweep: no seeds");
  SweepSummary sum;
  sum.eps = eps;
  for (std::uint64_t s : seeds) {
    spec.seed = s;
    SelfPlayRun<S> run = run_self_play(spec);
    ConvergenceReport rep = convergence_scan(run, eps, k_scan, delta);
    sum.k_scan = rep.k_scan;
    SeedOutcome o;
    o.seed = s;
    o.first_t = rep.first_t;
    o.see_pass = rep.see_at_first && (*rep.see_at_first).pass;
    o.scee_pass = rep.scee_at_first && (*rep.scee_at_first).pass;
    sum.outcomes.push_back(o);
  }
  // aggregation is order independent
  std::sort(sum.outcomes.begin(), sum.outcomes.end(),
            [](const SeedOutcome& a, const SeedOutcome& b) {
              return a.seed < b.seed;
            });
  return sum;
}

}  // namespace harness
}  // namespace embayes

#endif  // EMBAYES_HARNESS_SCAN_HPP_
