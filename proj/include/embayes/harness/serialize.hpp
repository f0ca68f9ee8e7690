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

#ifndef EMBAYES_HARNESS_SERIALIZE_HPP_
#define EMBAYES_HARNESS_SERIALIZE_HPP_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "embayes/harness/scan.hpp"

namespace embayes {
namespace harness {

using Json = nlohmann::json;

// Scalars travel as text: "p/q" keeps the exact backend lossless and the
// numeric backend readable. Decimal forms are accepted on input; the exact
// backend turns "0.4" into 2/5.
template <class S>
std::string scalar_text(const S& x) {
  return ScalarTraits<S>::str(x);
}

template <class S>
S parse_scalar(const std::string& s) {
  if constexpr (ScalarTraits<S>::exact) {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos ||
          s.find_first_of("eE") != std::string::npos) {
        throw SupportViolation("cannot parse exact scalar: " + s);
      }
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::string sign;
      if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
        if (digits[0] == '-') sign = "-";
        digits = digits.substr(1);
      }
      if (digits.empty() ||
          digits.find_first_not_of("0123456789") != std::string::npos) {
        throw SupportViolation("cannot parse exact scalar: " + s);
      }
      BigInt num(sign + digits);
      BigInt den(1);
      for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      return Rational(num, den);
    }
  }
  return ScalarTraits<S>::parse(s);
}

inline Json verdict_json(const Verdict& v) {
  Json out;
  out["pass"] = v.pass;
  out["tolerances"] = v.tolerances;
  Json ws = Json::array();
  for (const auto& w : v.witnesses) {
    ws.push_back({{"player", w.player},
                  {"kind", w.kind},
                  {"detail", w.detail},
                  {"gap", w.gap}});
  }
  out["witnesses"] = ws;
  return out;
}

template <class S>
Json trajectory_header(const TrajectoryRecord<S>& rec) {
  Json seats = Json::array();
  for (const auto& sp : rec.seats) {
    seats.push_back({{"actions", sp.actions.symbols()},
                     {"percepts", sp.percepts.symbols()}});
  }
  return Json{{"schema", "embayes.trajectory.v1"},
              {"seed", rec.seed},
              {"k_scan", rec.k_scan},
              {"rounds", rec.rounds()},
              {"seats", seats}};
}

template <class S>
Json step_json(const TrajectoryRecord<S>& rec, int t) {
  const StepRecord<S>& row = rec.steps[t];
  Json out;
  out["t"] = t + 1;
  out["actions"] = row.actions;
  out["percepts"] = row.percepts;
  out["q"] = row.q;
  Json post = Json::array();
  for (const auto& w : row.posterior) {
    Json seat = Json::array();
    for (const auto& x : w) seat.push_back(scalar_text<S>(x));
    post.push_back(seat);
  }
  out["posterior"] = post;
  Json dk = Json::array();
  for (const auto& d : row.dk) {
    if (d) {
      dk.push_back(*d);
    } else {
      dk.push_back(nullptr);
    }
  }
  out["dk"] = dk;
  out["uniforms"] = row.uniforms;
  return out;
}

// one header object then one object per round
template <class S>
void write_trajectory_jsonl(const TrajectoryRecord<S>& rec,
                            std::ostream& out) {
  out << trajectory_header(rec).dump() << "\n";
  for (int t = 0; t < rec.rounds(); ++t) {
    out << step_json(rec, t).dump() << "\n";
  }
}

// long-format table, one row per seat and round
template <class S>
void write_trajectory_csv(const TrajectoryRecord<S>& rec, std::ostream& out) {
  out << "# embayes.trajectory.v1\n";
  out << "t,seat,action,percept,chosen_q,d_k\n";
  for (int t = 0; t < rec.rounds(); ++t) {
    const StepRecord<S>& row = rec.steps[t];
    for (int i = 0; i < rec.players(); ++i) {
      out << (t + 1) << ',' << i << ','
          << rec.seats[i].actions.name(row.actions[i]) << ','
          << rec.seats[i].percepts.name(row.percepts[i]) << ',';
      if (!row.q[i].empty()) {
        out << ScalarTraits<double>::str(row.q[i][row.actions[i]]);
      }
      out << ',';
      if (row.dk[i]) out << ScalarTraits<double>::str(*row.dk[i]);
      out << "\n";
    }
  }
}

inline Json report_json(const ConvergenceReport& rep) {
  Json out;
  out["schema"] = "embayes.scan.v1";
  out["eps"] = rep.eps;
  out["k_scan"] = rep.k_scan;
  out["rounds"] = rep.rounds;
  if (rep.first_t) {
    out["first_t"] = *rep.first_t;
  } else {
    out["first_t"] = "not reached";
  }
  auto put = [&out](const char* key, const std::optional<Verdict>& v) {
    if (v) out[key] = verdict_json(*v);
  };
  put("see_at_first", rep.see_at_first);
  put("scee_at_first", rep.scee_at_first);
  put("see_at_final", rep.see_at_final);
  put("scee_at_final", rep.scee_at_final);
  Json dk = Json::array();
  for (const auto& row : rep.dk) {
    Json r = Json::array();
    for (const auto& d : row) {
      if (d) {
        r.push_back(*d);
      } else {
        r.push_back(nullptr);
      }
    }
    dk.push_back(r);
  }
  out["dk"] = dk;
  out["notes"] = rep.notes;
  return out;
}

inline void write_report_csv(const ConvergenceReport& rep, std::ostream& out) {
  out << "# embayes.summary.v1\n";
  out << "key,value\n";
  out << "eps," << ScalarTraits<double>::str(rep.eps) << "\n";
  out << "k_scan," << rep.k_scan << "\n";
  out << "rounds," << rep.rounds << "\n";
  out << "first_t,";
  if (rep.first_t) {
    out << *rep.first_t;
  } else {
    out << "not reached";
  }
  out << "\n";
  auto put = [&out](const char* key, const std::optional<Verdict>& v) {
    if (v) out << key << ',' << ((*v).pass ? "pass" : "fail") << "\n";
  };
  put("see_at_first", rep.see_at_first);
  put("scee_at_first", rep.scee_at_first);
  put("see_at_final", rep.see_at_final);
  put("scee_at_final", rep.scee_at_final);
  for (size_t t = 0; t < rep.dk.size(); ++t) {
    for (size_t i = 0; i < rep.dk[t].size(); ++i) {
      if (!rep.dk[t][i]) continue;
      out << "d_k t=" << (t + 1) << " seat=" << i << ','
          << ScalarTraits<double>::str(*rep.dk[t][i]) << "\n";
    }
  }
}

inline Json sweep_json(const SweepSummary& sum) {
  Json out;
  out["schema"] = "embayes.sweep.v1";
  out["eps"] = sum.eps;
  out["k_scan"] = sum.k_scan;
  out["runs"] = sum.runs();
  out["reached"] = sum.reached();
  out["see_passes"] = sum.see_passes();
  out["scee_passes"] = sum.scee_passes();
  Json rows = Json::array();
  for (const auto& o : sum.outcomes) {
    Json r;
    r["seed"] = o.seed;
    if (o.first_t) {
      r["first_t"] = *o.first_t;
    } else {
      r["first_t"] = "not reached";
    }
    r["see_pass"] = o.see_pass;
    r["scee_pass"] = o.scee_pass;
    rows.push_back(r);
  }
  out["outcomes"] = rows;
  return out;
}

inline void write_sweep_csv(const SweepSummary& sum, std::ostream& out) {
  out << "# embayes.sweep.v1\n";
  out << "seed,first_t,see_pass,scee_pass\n";
  for (const auto& o : sum.outcomes) {
    out << o.seed << ',';
    if (o.first_t) {
      out << *o.first_t;
    } else {
      out << "not reached";
    }
    out << ',' << (o.see_pass ? "pass" : "fail") << ','
        << (o.scee_pass ? "pass" : "fail") << "\n";
  }
}

// Declarative description of an experiment, the shape the CLI and config
// documents speak. Scenario parameters stay textual so the scalar backend is
// chosen at instantiation time.
struct AgentConfig {
  AgentKind kind = AgentKind::kEmbeddedBr;
  int k = 1;
  std::vector<int> k_schedule;
  std::vector<double> eps_schedule;
};

struct ExperimentSpec {
  std::string scenario;  // twin_pd, copy_pd, mu_rk, see_not_ee, dogmatic
  std::map<std::string, std::string> params;
  std::vector<AgentConfig> agents;  // empty = scenario default per seat
  int rounds = 20;
  double plan_tol = 1e-6;
  int horizon = 0;  // overrides plan_tol when positive
  double br_slack = 1e-9;
  double eps = 0.05;
  double delta = 0.0;
  int k_scan = 3;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;  // multi-seed sweep when nonempty
  bool exact = true;
  std::string format = "jsonl";  // jsonl or csv
  std::string out;               // empty = stdout

  void validate() const {
    if (scenario.empty()) throw SupportViolation("experiment needs a scenario");
    if (rounds < 1) throw SupportViolation("experiment needs rounds >= 1");
    if (format != "jsonl" && format != "csv") {
      throw SupportViolation("format must be jsonl or csv");
    }
    if (k_scan < 1) throw SupportViolation("k_scan must be >= 1");
    for (const auto& a : agents) {
      if (a.kind == AgentKind::kApprox &&
          (static_cast<int>(a.k_schedule.size()) < rounds ||
           static_cast<int>(a.eps_schedule.size()) < rounds)) {
        throw SupportViolation("approx schedules must cover every round");
      }
    }
  }
};

inline Json experiment_json(const ExperimentSpec& spec) {
  Json agents = Json::array();
  for (const auto& a : spec.agents) {
    agents.push_back({{"kind", agent_kind_name(a.kind)},
                      {"k", a.k},
                      {"k_schedule", a.k_schedule},
                      {"eps_schedule", a.eps_schedule}});
  }
  return Json{{"scenario", spec.scenario}, {"params", spec.params},
              {"agents", agents},          {"rounds", spec.rounds},
              {"plan_tol", spec.plan_tol}, {"horizon", spec.horizon},
              {"br_slack", spec.br_slack}, {"eps", spec.eps},
              {"delta", spec.delta},       {"k_scan", spec.k_scan},
              {"seed", spec.seed},         {"seeds", spec.seeds},
              {"exact", spec.exact},       {"format", spec.format},
              {"out", spec.out}};
}

inline ExperimentSpec experiment_from_json(const Json& j) {
  ExperimentSpec spec;
  spec.scenario = j.value("scenario", spec.scenario);
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) {
      spec.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  if (j.contains("agents")) {
    for (const auto& a : j.at("agents")) {
      AgentConfig c;
      c.kind = parse_agent_kind(a.value("kind", std::string("embedded_br")));
      c.k = a.value("k", c.k);
      if (a.contains("k_schedule")) {
        c.k_schedule = a.at("k_schedule").get<std::vector<int>>();
      }
      if (a.contains("eps_schedule")) {
        c.eps_schedule = a.at("eps_schedule").get<std::vector<double>>();
      }
      spec.agents.push_back(std::move(c));
    }
  }
  spec.rounds = j.value("rounds", spec.rounds);
  spec.plan_tol = j.value("plan_tol", spec.plan_tol);
  spec.horizon = j.value("horizon", spec.horizon);
  spec.br_slack = j.value("br_slack", spec.br_slack);
  spec.eps = j.value("eps", spec.eps);
  spec.delta = j.value("delta", spec.delta);
  spec.k_scan = j.value("k_scan", spec.k_scan);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("seeds")) {
    spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  spec.exact = j.value("exact", spec.exact);
  spec.format = j.value("format", spec.format);
  spec.out = j.value("out", spec.out);
  return spec;
}

}  // namespace harness
}  // namespace embayes

#endif  // EMBAYES_HARNESS_SERIALIZE_HPP_
