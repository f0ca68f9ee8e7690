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

#ifndef EMBAYES_EQUILIBRIA_SIMPLEX_HPP_
#define EMBAYES_EQUILIBRIA_SIMPLEX_HPP_

#include <utility>
#include <vector>

#include "embayes/core/errors.hpp"
#include "embayes/core/scalar.hpp"

namespace embayes {

// maximize objective . x subject to rows[i] . x <= rhs[i], x >= 0
template <class S>
struct LinearProgram {
  int n = 0;
  std::vector<std::vector<S>> rows;
  std::vector<S> rhs;
  std::vector<S> objective;

  void add_le(std::vector<S> coeff, S bound) {
    if (static_cast<int>(coeff.size()) != n) {
      throw SupportViolation("lp row width mismatch");
    }
    rows.push_back(std::move(coeff));
    rhs.push_back(std::move(bound));
  }

  void add_eq(const std::vector<S>& coeff, const S& bound) {
    add_le(coeff, bound);
    std::vector<S> neg(coeff.size());
    for (size_t j = 0; j < coeff.size(); ++j) neg[j] = -coeff[j];
    add_le(std::move(neg), -bound);
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

template <class S>
struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  S objective = ScalarTraits<S>::zero();
  std::vector<S> x;
};

// Dense two-phase primal simplex with Bland's rule throughout, so exact
// arithmetic terminates without any anticycling luck. Intended for the small
// feasibility and forced-zero programs the equilibrium searches build; no
// attention is paid to sparsity.
template <class S>
class SimplexTableau {
 public:
  explicit SimplexTableau(const LinearProgram<S>& lp) : n_(lp.n) {
    int m = static_cast<int>(lp.rows.size());
    // columns: structural | slack | artificial, assigned below
    slack_ = n_;
    art_ = n_ + m;
    std::vector<bool> needs_art(m, false);
    int arts = 0;
    for (int i = 0; i < m; ++i) {
      if (lp.rhs[i] < 0) {
        needs_art[i] = true;
        ++arts;
      }
    }
    cols_ = art_ + arts;
    t_.assign(m, std::vector<S>(cols_ + 1, ScalarTraits<S>::zero()));
    basis_.resize(m);
    int next_art = art_;
    for (int i = 0; i < m; ++i) {
      S sign = needs_art[i] ? S(-1) : ScalarTraits<S>::one();
      for (int j = 0; j < n_; ++j) t_[i][j] = sign * lp.rows[i][j];
      t_[i][slack_ + i] = sign;
      t_[i][cols_] = sign * lp.rhs[i];
      if (needs_art[i]) {
        t_[i][next_art] = ScalarTraits<S>::one();
        basis_[i] = next_art++;
      } else {
        basis_[i] = slack_ + i;
      }
    }
  }

  LpSolution<S> solve(const LinearProgram<S>& lp) {
    LpSolution<S> out;
    if (art_ < cols_) {
      // phase 1: maximize -(sum of artificials)
      std::vector<S> phase1(cols_, ScalarTraits<S>::zero());
      for (int j = art_; j < cols_; ++j) phase1[j] = S(-1);
      price_out(phase1);
      run();
      if (zrow_[cols_] != 0) {
        out.status = LpStatus::kInfeasible;
        return out;
      }
      drive_out_artificials();
      drop_artificial_columns();
    }
    std::vector<S> phase2(cols_, ScalarTraits<S>::zero());
    for (int j = 0; j < n_; ++j) phase2[j] = lp.objective[j];
    price_out(phase2);
    if (!run()) {
      out.status = LpStatus::kUnbounded;
      return out;
    }
    out.status = LpStatus::kOptimal;
    out.objective = zrow_[cols_];
    out.x.assign(n_, ScalarTraits<S>::zero());
    for (size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i] < n_) out.x[basis_[i]] = t_[i][cols_];
    }
    return out;
  }

 private:
  // reduced-cost row z_j - c_j for the given costs under the current basis
  void price_out(const std::vector<S>& c) {
    zrow_.assign(cols_ + 1, ScalarTraits<S>::zero());
    for (int j = 0; j < cols_; ++j) zrow_[j] = -c[j];
    for (size_t i = 0; i < basis_.size(); ++i) {
      const S& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j <= cols_; ++j) zrow_[j] += cb * t_[i][j];
    }
  }

  // returns false on unboundedness
  bool run() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (zrow_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      for (size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][enter] <= 0) continue;
        if (leave < 0) {
          leave = static_cast<int>(i);
          continue;
        }
        S lhs = t_[i][cols_] * t_[leave][enter];
        S rhs = t_[leave][cols_] * t_[i][enter];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) {
          leave = static_cast<int>(i);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    S p = t_[row][col];
    for (int j = 0; j <= cols_; ++j) t_[row][j] = t_[row][j] / p;
    for (size_t i = 0; i < t_.size(); ++i) {
      if (static_cast<int>(i) == row || t_[i][col] == 0) continue;
      S f = t_[i][col];
      for (int j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[row][j];
    }
    if (zrow_[col] != 0) {
      S f = zrow_[col];
      for (int j = 0; j <= cols_; ++j) zrow_[j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  void drive_out_artificials() {
    for (size_t i = 0; i < basis_.size();) {
      if (basis_[i] < art_) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < art_; ++j) {
        if (t_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(static_cast<int>(i), col);
        ++i;
      } else {
        // redundant constraint
        t_.erase(t_.begin() + i);
        basis_.erase(basis_.begin() + i);
      }
    }
  }

  void drop_artificial_columns() {
    for (auto& row : t_) {
      row.erase(row.begin() + art_, row.begin() + cols_);
    }
    cols_ = art_;
  }

  int n_ = 0;
  int slack_ = 0;
  int art_ = 0;
  int cols_ = 0;
  std::vector<std::vector<S>> t_;
  std::vector<int> basis_;
  std::vector<S> zrow_;
};

template <class S>
LpSolution<S> solve_lp(const LinearProgram<S>& lp) {
  if (static_cast<int>(lp.objective.size()) != lp.n) {
    throw SupportViolation("lp objective width mismatch");
  }
  SimplexTableau<S> tableau(lp);
  return tableau.solve(lp);
}

}  // namespace embayes

#endif  // EMBAYES_EQUILIBRIA_SIMPLEX_HPP_
