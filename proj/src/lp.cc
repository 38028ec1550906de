// Copyright 2026 The cashopt Authors
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

#include "cashopt/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cashopt {
namespace {

constexpr double kOptimalityTolerance = 1e-9;
constexpr double kPhaseOneTolerance = 1e-9;
// Primal feasibility slack granted by the Harris ratio test.
constexpr double kFeasibilityTolerance = 1e-9;
// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr int kDegenerateStreakLimit = 25;
// Pivots between rebuilds of the tableau from the original rows.
constexpr int kRefactorInterval = 50;

struct StandardRow {
  std::vector<double> coefficients;  // over structural (shifted) variables
  Relation relation;
  double rhs;  // >= 0 after normalization
};

class Tableau {
 public:
  Tableau(std::vector<StandardRow> rows, int num_structural)
      : rows_(std::move(rows)), n_(num_structural) {
    for (const auto& r : rows_) {
      if (r.relation != Relation::kEqual) ++num_slack_;
      if (r.relation != Relation::kLessEqual) ++num_artificial_;
    }
    cols_ = n_ + num_slack_ + num_artificial_;
    const int m = static_cast<int>(rows_.size());
    t_.assign(m + 1, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m, -1);
    kept_.resize(m);
    for (int r = 0; r < m; ++r) kept_[r] = r;
    unit_row_.assign(num_slack_ + num_artificial_, -1);
    unit_sign_.assign(num_slack_ + num_artificial_, 0.0);
    int slack = n_;
    int artificial = n_ + num_slack_;
    for (int r = 0; r < m; ++r) {
      auto& row = t_[r];
      std::copy(rows_[r].coefficients.begin(), rows_[r].coefficients.end(), row.begin());
      row[cols_] = rows_[r].rhs;
      switch (rows_[r].relation) {
        case Relation::kLessEqual:
          row[slack] = 1;
          unit_row_[slack - n_] = r;
          unit_sign_[slack - n_] = 1;
          basis_[r] = slack++;
          break;
        case Relation::kGreaterEqual:
          row[slack] = -1;
          unit_row_[slack - n_] = r;
          unit_sign_[slack - n_] = -1;
          ++slack;
          row[artificial] = 1;
          unit_row_[artificial - n_] = r;
          unit_sign_[artificial - n_] = 1;
          basis_[r] = artificial++;
          break;
        case Relation::kEqual:
          row[artificial] = 1;
          unit_row_[artificial - n_] = r;
          unit_sign_[artificial - n_] = 1;
          basis_[r] = artificial++;
          break;
      }
    }
  }

  bool IsArtificial(int col) const { return col >= n_ + num_slack_ && col < cols_; }

  // Returns false when infeasible.
  bool PhaseOne() {
    std::vector<double> cost(cols_, 0.0);
    for (int c = n_ + num_slack_; c < cols_; ++c) cost[c] = 1;
    LoadObjective(cost);
    RunSimplex(/*allow_artificial=*/true);
    Refactor();
    const double infeasibility = -t_.back()[cols_];
    if (infeasibility > kPhaseOneTolerance) return false;
    DriveOutArtificials();
    return true;
  }

  // Returns false when unbounded.
  bool PhaseTwo(const std::vector<double>& structural_cost) {
    std::vector<double> cost(cols_, 0.0);
    std::copy(structural_cost.begin(), structural_cost.end(), cost.begin());
    LoadObjective(cost);
    if (!RunSimplex(/*allow_artificial=*/false)) return false;
    // A rebuilt tableau can expose reduced costs hidden by round-off.
    Refactor();
    return RunSimplex(/*allow_artificial=*/false);
  }

  // Structural values, recomputed from the original rows for the final basis.
  std::vector<double> Values() const {
    const int m = static_cast<int>(basis_.size());
    std::vector<double> y(n_, 0.0);
    std::vector<double> basic(m);
    if (!ResolveBasis(basic)) {
      for (int r = 0; r < m; ++r) basic[r] = t_[r][cols_];
    }
    for (int r = 0; r < m; ++r) {
      if (basis_[r] < n_) y[basis_[r]] = std::max(0.0, basic[r]);
    }
    return y;
  }

  int pivots() const { return pivots_; }

 private:
  double ColumnEntry(int row, int col) const {
    if (col < n_) return rows_[row].coefficients[col];
    // Slack and artificial columns are signed unit vectors.
    return unit_row_[col - n_] == row ? unit_sign_[col - n_] : 0.0;
  }

  // Solves B x_B = b over the kept rows with partial pivoting.
  bool ResolveBasis(std::vector<double>& out) const {
    const int m = static_cast<int>(basis_.size());
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1));
    for (int i = 0; i < m; ++i) {
      const int orig = kept_[i];
      for (int j = 0; j < m; ++j) a[i][j] = ColumnEntry(orig, basis_[j]);
      a[i][m] = rows_[orig].rhs;
    }
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int r = col + 1; r < m; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      }
      if (std::abs(a[piv][col]) < 1e-13) return false;
      std::swap(a[piv], a[col]);
      for (int r = 0; r < m; ++r) {
        if (r == col || a[r][col] == 0) continue;
        const double f = a[r][col] / a[col][col];
        for (int c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
      }
    }
    for (int i = 0; i < m; ++i) out[i] = a[i][m] / a[i][i];
    return true;
  }

  void LoadObjective(const std::vector<double>& cost) {
    cost_ = cost;
    auto& z = t_.back();
    std::fill(z.begin(), z.end(), 0.0);
    for (int c = 0; c < cols_; ++c) z[c] = cost[c];
    for (std::size_t r = 0; r + 1 < t_.size(); ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0) continue;
      for (int c = 0; c <= cols_; ++c) z[c] -= cb * t_[r][c];
    }
  }

  void Pivot(int row, int col) {
    auto& pr = t_[row];
    const double inv = 1.0 / pr[col];
    for (auto& x : pr) x *= inv;
    pr[col] = 1.0;
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (static_cast<int>(r) == row) continue;
      auto& tr = t_[r];
      const double f = tr[col];
      if (f == 0) continue;
      for (int c = 0; c <= cols_; ++c) tr[c] -= f * pr[c];
      tr[col] = 0.0;
    }
    basis_[row] = col;
    ++pivots_;
  }

  // Rebuilds B^-1 [A | b] for the current basis to shed accumulated round-off.
  void Refactor() {
    const int m = static_cast<int>(basis_.size());
    std::vector<std::vector<double>> a(m, std::vector<double>(cols_ + 1));
    for (int i = 0; i < m; ++i) {
      const int orig = kept_[i];
      std::copy(rows_[orig].coefficients.begin(), rows_[orig].coefficients.end(), a[i].begin());
      a[i][cols_] = rows_[orig].rhs;
    }
    for (int c = n_; c < cols_; ++c) {
      const int owner = unit_row_[c - n_];
      for (int i = 0; i < m; ++i) {
        if (kept_[i] == owner) a[i][c] = unit_sign_[c - n_];
      }
    }
    const std::vector<int> columns = basis_;
    std::vector<bool> used(m, false);
    std::vector<int> basis(m, -1);
    for (const int col : columns) {
      int piv = -1;
      for (int r = 0; r < m; ++r) {
        if (!used[r] && (piv < 0 || std::abs(a[r][col]) > std::abs(a[piv][col]))) piv = r;
      }
      if (piv < 0 || std::abs(a[piv][col]) < 1e-13) return;  // keep the old tableau
      used[piv] = true;
      basis[piv] = col;
      const double inv = 1.0 / a[piv][col];
      for (auto& x : a[piv]) x *= inv;
      a[piv][col] = 1.0;
      for (int r = 0; r < m; ++r) {
        const double f = a[r][col];
        if (r == piv || f == 0) continue;
        for (int c = 0; c <= cols_; ++c) a[r][c] -= f * a[piv][c];
        a[r][col] = 0.0;
      }
    }
    auto objective = std::move(t_.back());
    t_ = std::move(a);
    t_.push_back(std::move(objective));
    basis_ = std::move(basis);  // kept_ is unchanged: only the row set matters
    LoadObjective(cost_);
  }

  bool RunSimplex(bool allow_artificial) {
    const int m = static_cast<int>(basis_.size());
    int degenerate_streak = 0;
    for (;;) {
      if (pivots_ > 0 && pivots_ % kRefactorInterval == 0 && pivots_ != last_refactor_) {
        last_refactor_ = pivots_;
        Refactor();
      }
      const bool bland = degenerate_streak >= kDegenerateStreakLimit;
      const auto& z = t_.back();
      int enter = -1;
      double best = -kOptimalityTolerance;
      for (int c = 0; c < cols_; ++c) {
        if (!allow_artificial && IsArtificial(c)) continue;
        if (z[c] < best) {
          enter = c;
          if (bland) break;
          best = z[c];
        }
      }
      if (enter < 0) return true;

      // Harris two-pass ratio test: bound the step with a small feasibility
      // slack, then take the largest pivot element within that bound.
      double bound = kInfinity;
      for (int r = 0; r < m; ++r) {
        const double a = t_[r][enter];
        if (a <= kLpPivotTolerance) continue;
        bound = std::min(bound, (std::max(0.0, t_[r][cols_]) + kFeasibilityTolerance) / a);
      }
      int leave = -1;
      double min_ratio = kInfinity;
      for (int r = 0; r < m; ++r) {
        const double a = t_[r][enter];
        if (a <= kLpPivotTolerance) continue;
        const double ratio = std::max(0.0, t_[r][cols_]) / a;
        if (ratio > bound) continue;
        bool better = leave < 0;
        if (!better) {
          better = bland ? basis_[r] < basis_[leave] : a > t_[leave][enter];
        }
        if (better) {
          leave = r;
          min_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      degenerate_streak = (min_ratio <= 1e-12) ? degenerate_streak + 1 : 0;
      Pivot(leave, enter);
    }
  }

  void DriveOutArtificials() {
    for (std::size_t r = 0; r < basis_.size();) {
      if (!IsArtificial(basis_[r])) {
        ++r;
        continue;
      }
      int col = -1;
      double best = kLpPivotTolerance;
      for (int c = 0; c < n_ + num_slack_; ++c) {
        if (std::abs(t_[r][c]) > best) {
          best = std::abs(t_[r][c]);
          col = c;
        }
      }
      if (col >= 0) {
        Pivot(static_cast<int>(r), col);
        ++r;
      } else {
        // Redundant row.
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        kept_.erase(kept_.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }

  std::vector<StandardRow> rows_;
  int n_;
  int num_slack_ = 0;
  int num_artificial_ = 0;
  int cols_ = 0;
  std::vector<std::vector<double>> t_;  // constraint rows, then objective row
  std::vector<int> basis_;
  std::vector<int> kept_;  // original row index of each tableau row
  std::vector<int> unit_row_;  // owning row of each slack/artificial column
  std::vector<double> unit_sign_;
  std::vector<double> cost_;
  int pivots_ = 0;
  int last_refactor_ = -1;
};

void CheckProblem(const LpProblem& p) {
  const auto n = static_cast<std::size_t>(p.num_variables);
  if (p.num_variables <= 0) throw std::invalid_argument("LP has no variables");
  if (p.objective.size() != n || p.lower.size() != n || p.upper.size() != n) {
    throw std::invalid_argument("LP vector sizes disagree with num_variables");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(p.objective[j]) || !std::isfinite(p.lower[j]) ||
        std::isnan(p.upper[j])) {
      throw std::invalid_argument("LP objective and lower bounds must be finite");
    }
  }
  for (const auto& c : p.constraints) {
    bool nonzero = false;
    for (const auto& t : c.terms) {
      if (t.variable < 0 || t.variable >= p.num_variables) {
        throw std::invalid_argument("constraint '" + c.label + "' has a bad variable");
      }
      if (!std::isfinite(t.coefficient)) {
        throw std::invalid_argument("constraint '" + c.label + "' is not finite");
      }
      nonzero = nonzero || t.coefficient != 0;
    }
    if (!nonzero) throw std::invalid_argument("constraint '" + c.label + "' is empty");
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint rhs not finite");
  }
}

}  // namespace

double LinearConstraint::Evaluate(const std::vector<double>& x) const {
  double s = 0;
  for (const auto& t : terms) s += t.coefficient * x[t.variable];
  return s;
}

double LinearConstraint::Violation(const std::vector<double>& x) const {
  const double lhs = Evaluate(x);
  switch (relation) {
    case Relation::kLessEqual:
      return std::max(0.0, lhs - rhs);
    case Relation::kGreaterEqual:
      return std::max(0.0, rhs - lhs);
    case Relation::kEqual:
      return std::abs(lhs - rhs);
  }
  return 0;
}

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "?";
}

LpSolution SolveLp(const LpProblem& problem) {
  CheckProblem(problem);
  const int n = problem.num_variables;

  std::vector<StandardRow> rows;
  auto add_row = [&](std::vector<double> coefficients, Relation rel, double rhs) {
    if (rhs < 0) {
      for (auto& a : coefficients) a = -a;
      rhs = -rhs;
      if (rel == Relation::kLessEqual) {
        rel = Relation::kGreaterEqual;
      } else if (rel == Relation::kGreaterEqual) {
        rel = Relation::kLessEqual;
      }
    }
    rows.push_back({std::move(coefficients), rel, rhs});
  };
  for (const auto& c : problem.constraints) {
    std::vector<double> a(n, 0.0);
    double rhs = c.rhs;
    for (const auto& t : c.terms) a[t.variable] += t.coefficient;
    for (int j = 0; j < n; ++j) rhs -= a[j] * problem.lower[j];
    add_row(std::move(a), c.relation, rhs);
  }
  for (int j = 0; j < n; ++j) {
    if (problem.upper[j] == kInfinity) continue;
    std::vector<double> a(n, 0.0);
    a[j] = 1;
    add_row(std::move(a), Relation::kLessEqual, problem.upper[j] - problem.lower[j]);
  }

  LpSolution solution;
  if (rows.empty()) {
    // Only lower bounds: optimal at the lower bounds unless some cost is negative.
    for (int j = 0; j < n; ++j) {
      if (problem.objective[j] < 0) {
        solution.status = LpStatus::kUnbounded;
        return solution;
      }
    }
    solution.status = LpStatus::kOptimal;
    solution.values = problem.lower;
    for (int j = 0; j < n; ++j) solution.objective += problem.objective[j] * problem.lower[j];
    return solution;
  }

  Tableau tableau(std::move(rows), n);
  if (!tableau.PhaseOne()) {
    solution.status = LpStatus::kInfeasible;
    solution.pivots = tableau.pivots();
    return solution;
  }
  if (!tableau.PhaseTwo(problem.objective)) {
    solution.status = LpStatus::kUnbounded;
    solution.pivots = tableau.pivots();
    return solution;
  }
  const auto y = tableau.Values();
  solution.status = LpStatus::kOptimal;
  solution.values.resize(n);
  for (int j = 0; j < n; ++j) {
    solution.values[j] = problem.lower[j] + y[j];
    solution.objective += problem.objective[j] * solution.values[j];
  }
  solution.pivots = tableau.pivots();
  return solution;
}

}  // namespace cashopt
