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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "oracles.h"

namespace cashopt {
namespace {

LinearConstraint Row(std::vector<LinearTerm> terms, Relation rel, double rhs) {
  return {std::move(terms), rel, rhs, ""};
}

TEST(SolveLp, SingleBoundedVariable) {
  LpProblem lp(1);
  lp.objective = {1};
  lp.upper = {1};
  lp.constraints.push_back(Row({{0, 1}}, Relation::kGreaterEqual, 0.25));
  const auto s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.values[0], 0.25, 1e-12);
  EXPECT_NEAR(s.objective, 0.25, 1e-12);
}

TEST(SolveLp, RelaxationWithoutCutsReachesZero) {
  // min P over w1 + w2 = 1, w1 >= w2, 0.5 (w1 + 2 w2) <= 1, P in [0, 1].
  LpProblem lp(3);
  lp.objective = {0, 0, 1};
  lp.upper = {1, 1, 1};
  lp.constraints.push_back(Row({{0, 1}, {1, 1}}, Relation::kEqual, 1));
  lp.constraints.push_back(Row({{0, 1}, {1, -1}}, Relation::kGreaterEqual, 0));
  lp.constraints.push_back(Row({{0, 0.5}, {1, 1}}, Relation::kLessEqual, 1));
  const auto s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 0, 1e-12);
  EXPECT_NEAR(s.values[0] + s.values[1], 1, 1e-12);
}

TEST(SolveLp, DetectsInfeasibleCost) {
  // k = 1.2 > c_max = 1 with all mass at t = 1 still costs too much.
  LpProblem lp(3);
  lp.objective = {0, 0, 1};
  lp.upper = {1, 1, 1};
  lp.constraints.push_back(Row({{0, 1}, {1, 1}}, Relation::kEqual, 1));
  lp.constraints.push_back(Row({{0, 1}, {1, -1}}, Relation::kGreaterEqual, 0));
  lp.constraints.push_back(Row({{0, 1.2}, {1, 2.4}}, Relation::kLessEqual, 1));
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kInfeasible);
}

TEST(SolveLp, DetectsUnbounded) {
  LpProblem lp(2);
  lp.objective = {-1, 0};
  lp.constraints.push_back(Row({{0, 1}, {1, -1}}, Relation::kLessEqual, 3));
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kUnbounded);
}

TEST(SolveLp, RedundantEqualitiesAreHarmless) {
  LpProblem lp(2);
  lp.objective = {1, 2};
  lp.constraints.push_back(Row({{0, 1}, {1, 1}}, Relation::kEqual, 1));
  lp.constraints.push_back(Row({{0, 2}, {1, 2}}, Relation::kEqual, 2));
  lp.constraints.push_back(Row({{0, 1}, {1, 1}}, Relation::kEqual, 1));
  const auto s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 1, 1e-12);
}

TEST(SolveLp, CyclingExampleTerminates) {
  // Beale's example cycles under textbook Dantzig pricing.
  LpProblem lp(4);
  lp.objective = {-0.75, 20, -0.5, 6};
  lp.constraints.push_back(Row({{0, 0.25}, {1, -8}, {2, -1}, {3, 9}}, Relation::kLessEqual, 0));
  lp.constraints.push_back(Row({{0, 0.5}, {1, -12}, {2, -0.5}, {3, 3}}, Relation::kLessEqual, 0));
  lp.constraints.push_back(Row({{2, 1}}, Relation::kLessEqual, 1));
  const auto s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -1.25, 1e-9);
}

TEST(SolveLp, HonorsNonzeroLowerBounds) {
  LpProblem lp(2);
  lp.objective = {1, 1};
  lp.lower = {-2, 1.5};
  lp.upper = {5, 5};
  lp.constraints.push_back(Row({{0, 1}, {1, 1}}, Relation::kGreaterEqual, 0));
  const auto s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 0, 1e-12);
  EXPECT_GE(s.values[0], -2 - 1e-12);
  EXPECT_GE(s.values[1], 1.5 - 1e-12);
}

TEST(SolveLp, RejectsMalformedProblems) {
  LpProblem bad_var(1);
  bad_var.constraints.push_back(Row({{3, 1}}, Relation::kLessEqual, 1));
  EXPECT_THROW(SolveLp(bad_var), std::invalid_argument);
  LpProblem nan_rhs(1);
  nan_rhs.constraints.push_back(Row({{0, 1}}, Relation::kLessEqual, std::nan("")));
  EXPECT_THROW(SolveLp(nan_rhs), std::invalid_argument);
  LpProblem free_var(1);
  free_var.lower = {-kInfinity};
  EXPECT_THROW(SolveLp(free_var), std::invalid_argument);
  LpProblem short_obj(2);
  short_obj.objective = {1};
  EXPECT_THROW(SolveLp(short_obj), std::invalid_argument);
}

LpProblem RandomProblem(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> vars(1, 5), rows(0, 5), coef(-5, 5), rel(0, 2);
  std::uniform_int_distribution<int> half(-6, 6), width(2, 10), pct(0, 99);
  const int n = vars(rng);
  LpProblem lp(n);
  std::vector<double> anchor(n);
  for (int j = 0; j < n; ++j) {
    lp.objective[j] = coef(rng);
    lp.lower[j] = half(rng) / 2.0;
    lp.upper[j] = lp.lower[j] + width(rng) / 2.0;
    anchor[j] = lp.lower[j] + (lp.upper[j] - lp.lower[j]) * (pct(rng) / 100.0);
  }
  const bool anchored = pct(rng) >= 15;
  const int m = rows(rng);
  for (int r = 0; r < m; ++r) {
    LinearConstraint c;
    for (int j = 0; j < n; ++j) {
      const int a = coef(rng);
      if (a != 0) c.terms.push_back({j, static_cast<double>(a)});
    }
    if (c.terms.empty()) c.terms.push_back({0, 1});
    c.relation = static_cast<Relation>(rel(rng));
    if (anchored) {
      const double at = c.Evaluate(anchor);
      const double room = (pct(rng) % 4) / 2.0;
      c.rhs = c.relation == Relation::kLessEqual     ? at + room
              : c.relation == Relation::kGreaterEqual ? at - room
                                                      : at;
    } else {
      c.rhs = half(rng);
    }
    lp.constraints.push_back(c);
  }
  return lp;
}

TEST(SolveLp, MatchesVertexEnumeration) {
  std::mt19937_64 rng(2024);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto lp = RandomProblem(rng);
    const auto want = oracle::EnumerateVertices(lp);
    const auto got = SolveLp(lp);
    if (!want.feasible) {
      EXPECT_EQ(got.status, LpStatus::kInfeasible) << "trial " << trial;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(got.status, LpStatus::kOptimal) << "trial " << trial;
    ++optimal;
    EXPECT_NEAR(got.objective, want.objective, 1e-7 * (1 + std::abs(want.objective)))
        << "trial " << trial;
    for (int j = 0; j < lp.num_variables; ++j) {
      EXPECT_GE(got.values[j], lp.lower[j] - kLpFeasibilityTolerance);
      EXPECT_LE(got.values[j], lp.upper[j] + kLpFeasibilityTolerance);
    }
    for (const auto& c : lp.constraints) {
      EXPECT_LE(c.Violation(got.values), kLpFeasibilityTolerance) << "trial " << trial;
    }
  }
  // Both outcomes must be exercised.
  EXPECT_GT(optimal, 500);
  EXPECT_GT(infeasible, 20);
}

TEST(SolveLp, AddingRowsNeverLowersTheOptimum) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto lp = RandomProblem(rng);
    if (lp.constraints.empty()) continue;
    const auto last = lp.constraints.back();
    lp.constraints.pop_back();
    const auto before = SolveLp(lp);
    lp.constraints.push_back(last);
    const auto after = SolveLp(lp);
    if (before.status != LpStatus::kOptimal || after.status != LpStatus::kOptimal) continue;
    EXPECT_GE(after.objective, before.objective - 1e-9);
  }
}

// A late cutting-plane round from a 2040-class corpus (m = 50). Tiny pivot
// elements once left this basis infeasible while the tableau claimed optimal.
// Format: "n rows", then per row "relation rhs count (var coef)...".
// The reference optimum was computed with HiGHS.
TEST(SolveLp, IllConditionedCutRoundStaysFeasible) {
  std::ifstream in(CASHOPT_TEST_DATA "/cut_round.lp");
  ASSERT_TRUE(in) << "missing test data";
  int n = 0;
  std::size_t rows = 0;
  in >> n >> rows;
  LpProblem lp(n);
  lp.objective[n - 1] = 1;
  lp.upper.assign(n, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    int rel = 0;
    std::size_t count = 0;
    LinearConstraint c;
    in >> rel >> c.rhs >> count;
    c.relation = static_cast<Relation>(rel);
    c.terms.resize(count);
    for (auto& t : c.terms) in >> t.variable >> t.coefficient;
    lp.constraints.push_back(std::move(c));
  }
  ASSERT_TRUE(in);
  const auto s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 0.8306017227930995, 1e-9);
  for (const auto& c : lp.constraints) EXPECT_LE(c.Violation(s.values), 1e-9);
}

TEST(SolveLp, Deterministic) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto lp = RandomProblem(rng);
    const auto a = SolveLp(lp);
    const auto b = SolveLp(lp);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.pivots, b.pivots);
  }
}

}  // namespace
}  // namespace cashopt
