// Copyright 2026 The jsccsj Authors
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

#ifndef JSCCSJ_LP_HPP_
#define JSCCSJ_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace jsccsj::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

/// Linear program
///   minimize    objective . x
///   subject to  equalities:   a . x  = rhs
///               upper_bounds: a . x <= rhs
///               x >= 0
struct Problem {
  struct Row {
    std::vector<double> coeffs;
    double rhs = 0.0;
  };
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> equalities;
  std::vector<Row> upper_bounds;
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x;
};

/// Dense two-phase simplex with Bland's anti-cycling rule.
///
/// Built for the small, well-scaled programs this library produces (at most
/// a few hundred variables with coefficients of order one), where
/// predictable termination matters more than speed.
class SimplexSolver {
 public:
  explicit SimplexSolver(const Problem& problem) { build(problem); }

  Solution solve() {
    Solution sol;
    // Phase 1: minimize the sum of artificials.
    set_phase_objective(/*phase1=*/true);
    if (!iterate()) {
      sol.status = Status::kUnbounded;  // cannot happen in phase 1
      return sol;
    }
    if (tableau_[rows_][cols_] < -kFeasTol) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    drive_out_artificials();
    // Phase 2: the real objective over structural + slack columns.
    set_phase_objective(/*phase1=*/false);
    if (!iterate()) {
      sol.status = Status::kUnbounded;
      return sol;
    }
    sol.status = Status::kOptimal;
    sol.x.assign(num_structural_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < num_structural_) sol.x[basis_[r]] = tableau_[r][cols_];
    }
    sol.objective = 0.0;
    for (std::size_t v = 0; v < num_structural_; ++v) {
      sol.objective += costs_[v] * sol.x[v];
    }
    return sol;
  }

 private:
  static constexpr double kPivotTol = 1e-10;
  static constexpr double kFeasTol = 1e-8;
  static constexpr double kCostTol = 1e-10;

  void build(const Problem& p) {
    if (p.objective.size() != p.num_vars) {
      throw std::invalid_argument("lp: objective size != num_vars");
    }
    num_structural_ = p.num_vars;
    num_slack_ = p.upper_bounds.size();
    rows_ = p.equalities.size() + p.upper_bounds.size();
    cols_ = num_structural_ + num_slack_ + rows_;  // + artificials
    costs_ = p.objective;
    tableau_.assign(rows_ + 1, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(rows_, 0);

    std::size_t r = 0;
    for (const auto& eq : p.equalities) {
      fill_row(r, eq, /*slack_index=*/std::size_t(-1));
      ++r;
    }
    for (std::size_t u = 0; u < p.upper_bounds.size(); ++u) {
      fill_row(r, p.upper_bounds[u], num_structural_ + u);
      ++r;
    }
    // Make rhs non-negative, then install the artificial basis.
    for (std::size_t i = 0; i < rows_; ++i) {
      if (tableau_[i][cols_] < 0.0) {
        for (std::size_t c = 0; c <= cols_; ++c) tableau_[i][c] = -tableau_[i][c];
      }
      const std::size_t art = num_structural_ + num_slack_ + i;
      tableau_[i][art] = 1.0;
      basis_[i] = art;
    }
  }

  void fill_row(std::size_t r, const Problem::Row& row,
                std::size_t slack_index) {
    if (row.coeffs.size() != num_structural_) {
      throw std::invalid_argument("lp: row width != num_vars");
    }
    for (std::size_t v = 0; v < num_structural_; ++v) {
      tableau_[r][v] = row.coeffs[v];
    }
    if (slack_index != std::size_t(-1)) tableau_[r][slack_index] = 1.0;
    tableau_[r][cols_] = row.rhs;
  }

  void set_phase_objective(bool phase1) {
    auto& obj = tableau_[rows_];
    std::fill(obj.begin(), obj.end(), 0.0);
    if (phase1) {
      for (std::size_t a = num_structural_ + num_slack_; a < cols_; ++a) {
        obj[a] = 1.0;
      }
    } else {
      for (std::size_t v = 0; v < num_structural_; ++v) obj[v] = costs_[v];
      // Artificial columns stay priced out of phase 2.
      for (std::size_t a = num_structural_ + num_slack_; a < cols_; ++a) {
        obj[a] = std::numeric_limits<double>::infinity();
      }
    }
    // Price out the current basis.
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = obj[basis_[r]];
      if (cb == 0.0) continue;
      if (std::isinf(cb)) continue;  // handled by drive_out_artificials
      for (std::size_t c = 0; c <= cols_; ++c) {
        obj[c] -= cb * tableau_[r][c];
      }
    }
    // Objective row stores -value in the rhs slot; artificials excluded
    // from pricing are marked unusable below.
    for (std::size_t a = num_structural_ + num_slack_; a < cols_; ++a) {
      if (!phase1) obj[a] = std::numeric_limits<double>::infinity();
    }
  }

  // Returns false on unboundedness.
  bool iterate() {
    for (;;) {
      const auto& obj = tableau_[rows_];
      // Bland: entering column = lowest index with negative reduced cost.
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (std::isinf(obj[c])) continue;
        if (obj[c] < -kCostTol) {
          enter = c;
          break;
        }
      }
      if (enter == cols_) return true;  // optimal
      // Ratio test; Bland tie-break on the smallest basis variable index.
      std::size_t leave = rows_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = tableau_[r][enter];
        if (a <= kPivotTol) continue;
        const double ratio = tableau_[r][cols_] / a;
        if (leave == rows_ || ratio < best_ratio - kPivotTol ||
            (std::abs(ratio - best_ratio) <= kPivotTol &&
             basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == rows_) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& row = tableau_[r];
    const double inv = 1.0 / row[c];
    for (double& v : row) v *= inv;
    row[c] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      auto& other = tableau_[i];
      const double f = other[c];
      if (f == 0.0 || std::isinf(f)) continue;
      for (std::size_t k = 0; k <= cols_; ++k) other[k] -= f * row[k];
      other[c] = 0.0;
    }
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < num_structural_ + num_slack_) continue;
      std::size_t c = num_structural_ + num_slack_;
      std::size_t found = c;
      for (std::size_t k = 0; k < num_structural_ + num_slack_; ++k) {
        if (std::abs(tableau_[r][k]) > kPivotTol) {
          found = k;
          break;
        }
      }
      if (found < c) {
        pivot(r, found);
      } else {
        // Redundant row: zero it so the artificial stays at value zero.
        for (std::size_t k = 0; k <= cols_; ++k) tableau_[r][k] = 0.0;
        tableau_[r][basis_[r]] = 1.0;
      }
    }
  }

  std::size_t num_structural_ = 0, num_slack_ = 0, rows_ = 0, cols_ = 0;
  std::vector<double> costs_;
  std::vector<std::vector<double>> tableau_;  // last row: reduced costs
  std::vector<std::size_t> basis_;
};

inline Solution solve(const Problem& problem) {
  return SimplexSolver(problem).solve();
}

}  // namespace jsccsj::lp

#endif  // JSCCSJ_LP_HPP_
