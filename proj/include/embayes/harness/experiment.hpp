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

#ifndef EMBAYES_HARNESS_EXPERIMENT_HPP_
#define EMBAYES_HARNESS_EXPERIMENT_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "embayes/bayes/decoupled.hpp"
#include "embayes/bayes/mixture.hpp"
#include "embayes/core/multi_agent.hpp"
#include "embayes/core/tv.hpp"
#include "embayes/harness/rng.hpp"
#include "embayes/planning/kstep.hpp"
#include "embayes/planning/value.hpp"

namespace embayes {
namespace harness {

// the planner kinds the runner can drive; kFixed seats play a given policy
// and only bookkeep
enum class AgentKind { kEmbeddedBr, kKStep, kApprox, kDecoupledBr, kFixed };

inline std::string agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::kEmbeddedBr: return "embedded_br";
    case AgentKind::kKStep: return "k_step";
    case AgentKind::kApprox: return "approx";
    case AgentKind::kDecoupledBr: return "decoupled_br";
    case AgentKind::kFixed: return "fixed";
  }
  return "?";
}

inline AgentKind parse_agent_kind(const std::string& s) {
  if (s == "embedded_br") return AgentKind::kEmbeddedBr;
  if (s == "k_step") return AgentKind::kKStep;
  if (s == "approx") return AgentKind::kApprox;
  if (s == "decoupled_br") return AgentKind::kDecoupledBr;
  if (s == "fixed") return AgentKind::kFixed;
  throw SupportViolation("unknown agent kind: " + s);
}

// one seat of a self-play run. every seat may carry a mixture (it drives the
// posterior and distance columns of the record); planner kinds require one.
template <class S>
struct AgentSpec {
  AgentKind kind = AgentKind::kEmbeddedBr;
  MixturePtr<S> mixture;
  DiscountedTask<S> task;
  PlanBudget budget;
  int k = 1;                         // lookahead of the k-step planner
  std::vector<int> k_schedule;       // kApprox, one lookahead per round
  std::vector<double> eps_schedule;  // kApprox, one plan tolerance per round
  PolicyPtr<S> fixed;                // kFixed, the policy to play

  bool plans() const { return kind != AgentKind::kFixed; }

  void validate(int rounds) const {
    if (plans()) {
      if (!mixture) throw SupportViolation("planning seat needs a mixture");
      task.validate(mixture->space());
    } else if (!fixed) {
      throw SupportViolation("fixed seat needs a policy");
    }
    if (kind == AgentKind::kKStep && k < 1) {
      throw SupportViolation("k-step seat needs k >= 1");
    }
    if (kind == AgentKind::kApprox &&
        (static_cast<int>(k_schedule.size()) < rounds ||
         static_cast<int>(eps_schedule.size()) < rounds)) {
      throw SupportViolation("approx schedules must cover every round");
    }
  }
};

// a planner decision: the chosen action plus the per-action values that
// justified it, in numeric form for the record
struct Decision {
  int action = 0;
  std::vector<double> q;
};

namespace harness_detail {

template <class S>
PolicyPtr<S> uniform_policy(const Space& sp) {
  int n = static_cast<int>(sp.actions.size());
  return std::make_shared<FnPolicy<S>>(
      sp, [n](const History&) { return Dist<S>::uniform(n); }, "uniform");
}

}  // namespace harness_detail

// A planning agent wrapped as a policy: deterministic argmax, ties to the
// lowest action index, memoized per history so that belief filtering and
// diagnostics can probe it off the realized path without replanning.
template <class S>
class PlannerPolicy : public Policy<S> {
 public:
  explicit PlannerPolicy(AgentSpec<S> spec, std::string name = "planner")
      : spec_(std::move(spec)), name_(std::move(name)) {
    if (!spec_.plans()) {
      throw SupportViolation(name_ + ": fixed seats do not plan");
    }
    if (spec_.kind == AgentKind::kDecoupledBr) {
      // plan against the environment factor only. the optimal planner reads
      // percept conditionals, so the own-policy slot is irrelevant.
      auto f = factor_decoupled(spec_.mixture->hypothesis_class(),
                                spec_.mixture->prior());
      plan_on_ = interact<S>(
          harness_detail::uniform_policy<S>(spec_.mixture->space()), f.xi());
    } else {
      plan_on_ = spec_.mixture;
    }
  }

  const Space& space() const override { return spec_.mixture->space(); }
  // the planners themselves raise DepthExceeded when a plan would walk past
  // the mixture's depth
  int depth() const override { return plan_on_->depth(); }
  std::string name() const override { return name_; }

  Dist<S> act(const History& h) const override {
    return Dist<S>::point(static_cast<int>(space().actions.size()),
                          decide(h).action);
  }

  const Decision& decide(const History& h) const {
    auto it = memo_.find(h);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(h, plan(h)).first->second;
  }

  const UniversePtr<S>& plans_on() const { return plan_on_; }

 private:
  Decision plan(const History& h) const {
    if (spec_.kind == AgentKind::kEmbeddedBr ||
        spec_.kind == AgentKind::kDecoupledBr) {
      BestResponse br =
          embedded_best_response(*plan_on_, spec_.task, h, spec_.budget);
      return Decision{br.action, br.q};
    }
    if (spec_.kind == AgentKind::kKStep) {
      return argmax_k(h, spec_.k, spec_.budget);
    }
    // approx: schedules are indexed by round; probes past the last round
    // reuse the final entry
    int t = h.length();
    int last = static_cast<int>(spec_.k_schedule.size()) - 1;
    if (t > last) t = last;
    PlanBudget b = PlanBudget::from_tolerance(to_double<S>(spec_.task.gamma),
                                              spec_.eps_schedule[t],
                                              spec_.budget.br_slack);
    return argmax_k(h, spec_.k_schedule[t], b);
  }

  Decision argmax_k(const History& h, int k, PlanBudget b) const {
    if (plan_on_->depth() != kUnboundedDepth) {
      int avail = plan_on_->depth() - h.length();
      if (b.horizon > avail) b.horizon = avail;
      if (b.horizon < 1) throw DepthExceeded(name_ + ": no depth left");
    }
    Decision d;
    S best = ScalarTraits<S>::zero();
    int n = static_cast<int>(space().actions.size());
    for (int a = 0; a < n; ++a) {
      S q = k_step_q(*plan_on_, spec_.task, h, a, k, b).value;
      d.q.push_back(to_double<S>(q));
      if (a == 0 || q > best) {
        best = q;
        d.action = a;
      }
    }
    return d;
  }

  AgentSpec<S> spec_;
  std::string name_;
  UniversePtr<S> plan_on_;
  mutable std::map<History, Decision> memo_;
};

// caches percept conditionals of a wrapped environment. the personal
// environments filter joint histories from scratch per query, so the truth
// universes built on them would otherwise be quadratic to walk.
template <class S>
class MemoEnvironment : public Environment<S> {
 public:
  explicit MemoEnvironment(EnvironmentPtr<S> base) : base_(std::move(base)) {}

  const Space& space() const override { return base_->space(); }
  int depth() const override { return base_->depth(); }
  std::string name() const override { return base_->name(); }

  Dist<S> per(const History& h, int a) const override {
    auto key = std::make_pair(h, a);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Dist<S> d = base_->per(h, a);
    memo_.emplace(std::move(key), d);
    return d;
  }

 private:
  EnvironmentPtr<S> base_;
  mutable std::map<std::pair<History, int>, Dist<S>> memo_;
};

// one-seat stage wrapping a plain environment, so single-agent scenarios run
// through the same loop
template <class S>
MultiAgentEnvPtr<S> single_seat_stage(EnvironmentPtr<S> nu) {
  std::vector<Space> seats{nu->space()};
  auto fn = [nu](const JointHistory& jh, const std::vector<int>& actions) {
    Dist<S> pe = nu->per(jh.personal(0), actions[0]);
    typename MultiAgentEnv<S>::JointDist out;
    for (int e = 0; e < pe.size(); ++e) {
      if (pe[e] == 0) continue;
      out.push_back({{e}, pe[e]});
    }
    return out;
  };
  return std::make_shared<FnMultiAgentEnv<S>>(seats, fn, nu->name() + "@stage",
                                              nu->depth());
}

// runtime description of one self-play run
template <class S>
struct SelfPlaySpec {
  MultiAgentEnvPtr<S> sigma;
  std::vector<AgentSpec<S>> seats;
  int rounds = 1;
  std::uint64_t seed = 0;
  int k_scan = 3;         // depth of the recorded belief-vs-truth distance
  bool record_dk = true;
  // optional per-seat stand-in for the distance column (null entries fall
  // back to the realized truth); play itself never reads it
  std::vector<UniversePtr<S>> dk_truth;

  void validate() const {
    if (!sigma) throw SupportViolation("self play needs a stage");
    if (rounds < 1) throw SupportViolation("self play needs rounds >= 1");
    if (static_cast<int>(seats.size()) != sigma->players()) {
      throw AlphabetMismatch("one seat spec per stage seat");
    }
    if (k_scan < 1) throw SupportViolation("k_scan must be >= 1");
    if (!dk_truth.empty() && dk_truth.size() != seats.size()) {
      throw AlphabetMismatch("dk_truth must cover every seat");
    }
    for (size_t i = 0; i < seats.size(); ++i) {
      seats[i].validate(rounds);
      const Space& sp = sigma->seat_space(static_cast<int>(i));
      if (seats[i].mixture && !(seats[i].mixture->space() == sp)) {
        throw AlphabetMismatch("seat mixture is on the wrong space");
      }
      if (seats[i].fixed && !(seats[i].fixed->space() == sp)) {
        throw AlphabetMismatch("seat policy is on the wrong space");
      }
    }
  }
};

// one row of the trajectory. dk is measured before the round's action at the
// history so far; posterior is the carried posterior after the round's
// update, which equals w(lambda) lambda(h) / rho(h) whenever rho(h) > 0. a
// missing dk entry means the seat has no mixture or the mixture lost the
// realized history (no conditioning event to measure against).
template <class S>
struct StepRecord {
  std::vector<int> actions;
  std::vector<int> percepts;
  std::vector<std::vector<double>> q;     // per seat; empty for fixed seats
  std::vector<std::vector<S>> posterior;  // per seat; empty without a mixture
  std::vector<std::optional<double>> dk;
  std::vector<double> uniforms;  // the round's draws, in consumption order
};

template <class S>
struct TrajectoryRecord {
  std::vector<Space> seats;
  int k_scan = 3;
  std::uint64_t seed = 0;
  std::vector<StepRecord<S>> steps;

  int rounds() const { return static_cast<int>(steps.size()); }
  int players() const { return static_cast<int>(seats.size()); }

  // personal history of one seat over the first `turns` rounds
  History personal(int seat, int turns) const {
    History h;
    for (int t = 0; t < turns; ++t) {
      h.push(steps[t].actions[seat], steps[t].percepts[seat]);
    }
    return h;
  }
};

// a finished run: the record plus the live objects the diagnostics need
template <class S>
struct SelfPlayRun {
  SelfPlaySpec<S> spec;
  std::vector<PolicyPtr<S>> policies;  // realized seat policies
  std::vector<UniversePtr<S>> truths;  // (mu^i)^{pi^i} per seat, memoized
  TrajectoryRecord<S> record;

  std::vector<UniversePtr<S>> beliefs() const {
    std::vector<UniversePtr<S>> out;
    out.reserve(spec.seats.size());
    for (const auto& seat : spec.seats) out.push_back(seat.mixture);
    return out;
  }
};

namespace harness_detail {

// inverse-cdf draw over the numeric view of the listed masses. a single
// support point consumes no randomness, which keeps deterministic runs
// seed-independent.
template <class S>
int pick_index(const std::vector<S>& mass, CounterRng* rng,
               std::vector<double>* uniforms) {
  int support = 0;
  int last = -1;
  double total = 0.0;
  for (size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] == 0) continue;
    ++support;
    last = static_cast<int>(i);
    total += to_double<S>(mass[i]);
  }
  if (support == 0) {
    throw ZeroPredictiveMass("no mass to sample from");
  }
  if (support == 1) return last;
  double u = rng->next_unit();
  uniforms->push_back(u);
  double acc = 0.0;
  for (size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] == 0) continue;
    acc += to_double<S>(mass[i]) / total;
    if (u < acc) return static_cast<int>(i);
  }
  return last;  // rounding fell off the end
}

[[noreturn]] inline void rethrow_with_round(const std::exception& e, int round,
                                            int seat) {
  std::string ctx = "round " + std::to_string(round + 1);
  if (seat >= 0) ctx += " seat " + std::to_string(seat);
  throw ZeroPredictiveMass(ctx + ": " + e.what());
}

}  // namespace harness_detail

// The agent loop: every seat acts (planners via their argmax, fixed seats by
// sampling), the stage draws the joint percept, every mixture updates.
// Deterministic given the seed; runs whose seats never randomize produce the
// same record under every seed. Zero-mass events that stop play are rethrown
// as ZeroPredictiveMass carrying the 1-indexed round.
template <class S>
SelfPlayRun<S> run_self_play(const SelfPlaySpec<S>& spec) {
  spec.validate();
  int n = static_cast<int>(spec.seats.size());

  std::vector<PolicyPtr<S>> pols(n);
  std::vector<std::shared_ptr<PlannerPolicy<S>>> planners(n);
  for (int i = 0; i < n; ++i) {
    if (spec.seats[i].plans()) {
      planners[i] = std::make_shared<PlannerPolicy<S>>(
          spec.seats[i], "seat" + std::to_string(i));
      pols[i] = planners[i];
    } else {
      pols[i] = spec.seats[i].fixed;
    }
  }

  std::vector<UniversePtr<S>> truths;
  for (int i = 0; i < n; ++i) {
    std::vector<PolicyPtr<S>> co = pols;
    co[i] = nullptr;
    truths.push_back(interact<S>(
        pols[i], std::make_shared<MemoEnvironment<S>>(
                     personal_environment<S>(spec.sigma, co, i))));
  }

  TrajectoryRecord<S> rec;
  rec.k_scan = spec.k_scan;
  rec.seed = spec.seed;
  for (int i = 0; i < n; ++i) rec.seats.push_back(spec.sigma->seat_space(i));

  CounterRng rng(spec.seed);
  JointHistory jh;
  std::vector<History> hs(n);

  for (int t = 0; t < spec.rounds; ++t) {
    StepRecord<S> row;
    row.actions.assign(n, 0);
    row.percepts.assign(n, 0);
    row.q.resize(n);
    row.posterior.resize(n);
    row.dk.resize(n);

    // distance to truth before acting
    if (spec.record_dk) {
      for (int i = 0; i < n; ++i) {
        const auto& mix = spec.seats[i].mixture;
        if (!mix) continue;
        if (mix->prefix(hs[i]) == 0) continue;  // nothing to condition on
        const Universe<S>& target =
            (!spec.dk_truth.empty() && spec.dk_truth[i]) ? *spec.dk_truth[i]
                                                         : *truths[i];
        row.dk[i] =
            to_double<S>(total_variation_k(*mix, target, hs[i], spec.k_scan));
      }
    }

    // act
    for (int i = 0; i < n; ++i) {
      try {
        if (planners[i]) {
          const Decision& d = planners[i]->decide(hs[i]);
          row.actions[i] = d.action;
          row.q[i] = d.q;
        } else {
          Dist<S> pa = pols[i]->act(hs[i]);
          std::vector<S> mass(pa.size());
          for (int a = 0; a < pa.size(); ++a) mass[a] = pa[a];
          row.actions[i] =
              harness_detail::pick_index<S>(mass, &rng, &row.uniforms);
        }
      } catch (const ZeroPredictiveMass& e) {
        harness_detail::rethrow_with_round(e, t, i);
      } catch (const UndefinedConditional& e) {
        harness_detail::rethrow_with_round(e, t, i);
      }
    }

    // observe
    auto jd = spec.sigma->per(jh, row.actions);
    std::vector<S> mass;
    mass.reserve(jd.size());
    for (const auto& [tuple, m] : jd) mass.push_back(m);
    int pick;
    try {
      pick = harness_detail::pick_index<S>(mass, &rng, &row.uniforms);
    } catch (const ZeroPredictiveMass& e) {
      harness_detail::rethrow_with_round(e, t, -1);
    }
    row.percepts = jd[pick].first;

    jh.push(JointTurn{row.actions, row.percepts});
    for (int i = 0; i < n; ++i) {
      hs[i].push(row.actions[i], row.percepts[i]);
    }

    // update beliefs. the carry rule keeps the trace defined even when a
    // seat's own play leaves its model's support.
    for (int i = 0; i < n; ++i) {
      if (spec.seats[i].mixture) {
        row.posterior[i] = spec.seats[i].mixture->posterior_carried(hs[i]);
      }
    }

    rec.steps.push_back(std::move(row));
  }

  return SelfPlayRun<S>{spec, std::move(pols), std::move(truths),
                        std::move(rec)};
}

}  // namespace harness
}  // namespace embayes

#endif  // EMBAYES_HARNESS_EXPERIMENT_HPP_
