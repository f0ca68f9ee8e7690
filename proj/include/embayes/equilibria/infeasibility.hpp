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

#ifndef EMBAYES_EQUILIBRIA_INFEASIBILITY_HPP_
#define EMBAYES_EQUILIBRIA_INFEASIBILITY_HPP_

#include <utility>
#include <vector>

#include "embayes/equilibria/game.hpp"
#include "embayes/equilibria/simplex.hpp"

namespace embayes {

// Linear relaxation of the conditions a joint distribution must meet to make
// a pure profile worth playing when deviations are judged against beliefs
// bounded by on-path payoff + bound_gap: for every player i and deviation a',
//
//   sum_co p(a', co) * (r_i(a', co) - (u_i + bound_gap)) <= 0
//
// with u_i the profile payoff. Multiplying the conditional-value bound by the
// (nonnegative) marginal of a' makes each row linear in p, so any supporting
// joint distribution satisfies all rows.
template <class S>
std::vector<std::pair<std::vector<S>, S>> ee_br_relaxation_rows(
    const NormalFormGame<S>& g, const std::vector<int>& profile,
    const S& bound_gap = ScalarTraits<S>::one()) {
  g.validate();
  JointIndexer idx = g.indexer();
  int cells = idx.count();
  std::vector<std::pair<std::vector<S>, S>> rows;
  for (int i = 0; i < g.players(); ++i) {
    S u = g.payoff[i][idx.flat(profile)];
    S cap = u + bound_gap;
    for (int dev = 0; dev < idx.size(i); ++dev) {
      if (dev == profile[i]) continue;
      std::vector<S> coeff(cells, ScalarTraits<S>::zero());
      for (int co = 0; co < idx.co_count(i); ++co) {
        int cell = idx.flat(idx.with_own(i, dev, idx.co_unflat(i, co)));
        coeff[cell] = g.payoff[i][cell] - cap;
      }
      rows.emplace_back(std::move(coeff), ScalarTraits<S>::zero());
    }
  }
  return rows;
}

template <class S>
struct EeInfeasibilityReport {
  // per requested support floor: is a fully supported joint distribution
  // (every cell >= floor) compatible with the relaxation rows?
  std::vector<std::pair<S, bool>> floor_feasible;
  // cells whose mass every compatible distribution must set exactly to zero,
  // established by maximizing each cell subject to the rows
  std::vector<int> forced_zeros;
  // true when every off-profile cell is forced to zero, i.e. the only
  // compatible distribution is the point mass on the profile and no grain of
  // uncertainty can survive
  bool off_profile_support_impossible = false;
};

template <class S>
EeInfeasibilityReport<S> ee_infeasibility_search(
    const NormalFormGame<S>& g, const std::vector<int>& profile,
    const std::vector<S>& support_floors,
    const S& bound_gap = ScalarTraits<S>::one()) {
  JointIndexer idx = g.indexer();
  int cells = idx.count();
  auto rows = ee_br_relaxation_rows(g, profile, bound_gap);

  LinearProgram<S> base;
  base.n = cells;
  base.objective.assign(cells, ScalarTraits<S>::zero());
  for (const auto& [coeff, bound] : rows) base.add_le(coeff, bound);
  base.add_eq(std::vector<S>(cells, ScalarTraits<S>::one()),
              ScalarTraits<S>::one());

  EeInfeasibilityReport<S> report;
  for (const auto& floor : support_floors) {
    LinearProgram<S> lp = base;
    for (int cell = 0; cell < cells; ++cell) {
      std::vector<S> coeff(cells, ScalarTraits<S>::zero());
      coeff[cell] = S(-1);
      lp.add_le(std::move(coeff), -floor);
    }
    LpSolution<S> sol = solve_lp(lp);
    report.floor_feasible.emplace_back(floor,
                                       sol.status == LpStatus::kOptimal);
  }

  int profile_cell = idx.flat(profile);
  bool all_forced = true;
  for (int cell = 0; cell < cells; ++cell) {
    if (cell == profile_cell) continue;
    LinearProgram<S> lp = base;
    lp.objective[cell] = ScalarTraits<S>::one();
    LpSolution<S> sol = solve_lp(lp);
    if (sol.status == LpStatus::kOptimal && sol.objective == 0) {
      report.forced_zeros.push_back(cell);
    } else {
      all_forced = false;
    }
  }
  report.off_profile_support_impossible = all_forced;
  return report;
}

}  // namespace embayes

#endif  // EMBAYES_EQUILIBRIA_INFEASIBILITY_HPP_
