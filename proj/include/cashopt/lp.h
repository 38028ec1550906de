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

#ifndef CASHOPT_LP_H_
#define CASHOPT_LP_H_

#include <limits>
#include <string>
#include <vector>

namespace cashopt {

inline constexpr double kLpFeasibilityTolerance = 1e-8;
inline constexpr double kLpPivotTolerance = 1e-10;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct LinearTerm {
  int variable = 0;
  double coefficient = 0;
};

// sum(terms) <relation> rhs
struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0;
  std::string label;

  double Evaluate(const std::vector<double>& x) const;
  // Amount by which `x` misses the constraint; 0 when satisfied.
  double Violation(const std::vector<double>& x) const;
};

// minimize objective . x  subject to constraints, lower <= x <= upper.
// Every lower bound must be finite; upper bounds may be kInfinity.
struct LpProblem {
  int num_variables = 0;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LpProblem(int n = 0)
      : num_variables(n), objective(n, 0.0), lower(n, 0.0), upper(n, kInfinity) {}
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* ToString(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0;
  int pivots = 0;
};

// Dense two-phase primal simplex. Deterministic for identical input.
// Throws std::invalid_argument for malformed problems (non-finite data,
// empty rows, infinite lower bounds).
LpSolution SolveLp(const LpProblem& problem);

}  // namespace cashopt

#endif  // CASHOPT_LP_H_
