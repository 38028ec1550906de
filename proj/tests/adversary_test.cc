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

#include "cashopt/adversary.h"

#include <gtest/gtest.h>

#include <random>
#include <tuple>
#include <vector>

#include "cashopt/errors.h"
#include "oracles.h"

namespace cashopt {
namespace {

PasswordDistribution TwoThirds() {
  return PasswordDistribution({{2.0 / 3, 1}, {1.0 / 3, 1}}, 3);
}

CashDistribution FiveRuntimes() {
  return CashDistribution({9.0 / 16, 1.0 / 8, 1.0 / 8, 1.0 / 8, 1.0 / 16});
}

PasswordDistribution SixteenthsDist() {
  // 16 users: one password chosen by 9, three by 2, one by 1.
  return FromFrequencies(std::vector<FrequencyRecord>{{9, 1}, {2, 3}, {1, 1}});
}

TEST(CashDistribution, ChecksInvariants) {
  EXPECT_NO_THROW(CashDistribution({0.5, 0.5}));
  EXPECT_THROW(CashDistribution({0.4, 0.6}), InvariantError);
  EXPECT_THROW(CashDistribution({0.5, 0.4}), InvariantError);
  EXPECT_THROW(CashDistribution({1.1, -0.1}), InvariantError);
  EXPECT_THROW(CashDistribution(std::vector<double>{}), InvariantError);
  EXPECT_NO_THROW(CashDistribution({0.5 + 1e-10, 0.5}));
}

TEST(CashDistribution, UniformAndExpectedRuntime) {
  const auto u = CashDistribution::Uniform(4);
  EXPECT_EQ(u.m(), 4);
  EXPECT_DOUBLE_EQ(u.weight(3), 0.25);
  EXPECT_DOUBLE_EQ(u.ExpectedRuntime(), 2.5);
}

TEST(ServerParams, RejectsInfeasibleCost) {
  EXPECT_NO_THROW((ServerParams{0.5, 1, 1, 5}.Validate()));
  EXPECT_THROW((ServerParams{2, 1, 1, 5}.Validate()), InfeasibleParameters);
  EXPECT_THROW((ServerParams{1, 0.5, 1, 3}.Validate()), InfeasibleParameters);
}

TEST(TupleSchedule, GroupsByClassAndRuntime) {
  const PasswordDistribution d({{0.5, 1}, {0.25, 2}}, 4);
  const std::vector<double> w = {0.75, 0.25};
  const auto s = BuildTupleSchedule(d, w);
  ASSERT_EQ(s.size(), 4u);
  const std::vector<std::tuple<int, double, std::int64_t>> want = {
      {0, 0.375, 1}, {1, 0.1875, 2}, {0, 0.125, 1}, {1, 0.0625, 2}};
  double mass = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(s[i].class_index, std::get<0>(want[i]));
    EXPECT_DOUBLE_EQ(s[i].pi, std::get<1>(want[i]));
    EXPECT_EQ(s[i].count, std::get<2>(want[i]));
    mass += s[i].pi * static_cast<double>(s[i].count);
  }
  EXPECT_DOUBLE_EQ(mass, 1.0);
}

TEST(TupleSchedule, SingleRuntimeIsTheClassList) {
  const auto d = SixteenthsDist();
  const std::vector<double> w = {1.0};
  const auto s = BuildTupleSchedule(d, w);
  ASSERT_EQ(s.size(), d.num_classes());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].class_index, static_cast<int>(i));
    EXPECT_EQ(s[i].pi, d[i].probability);
    EXPECT_EQ(s[i].count, d[i].count);
  }
}

TEST(TupleSchedule, MostLikelyPairsComeFirst) {
  const auto s = BuildTupleSchedule(TwoThirds(), FiveRuntimes().weights());
  EXPECT_DOUBLE_EQ(s[0].pi, 0.375);
  EXPECT_DOUBLE_EQ(s[1].pi, 0.1875);
}

TEST(TupleSchedule, EqualPiFallsBackToClassIndex) {
  // Class 0 at t=2 and class 1 at t=1 both have pi = 1/6.
  const PasswordDistribution d({{0.5, 1}, {0.25, 2}}, 4);
  const std::vector<double> w = {2.0 / 3, 1.0 / 3};
  const auto s = BuildTupleSchedule(d, w);
  ASSERT_EQ(s.size(), 4u);
  ASSERT_EQ(s[1].pi, s[2].pi);
  EXPECT_EQ(s[1].class_index, 0);
  EXPECT_EQ(s[1].runtime_index, 1);
  EXPECT_EQ(s[2].class_index, 1);
  EXPECT_EQ(s[2].runtime_index, 0);
}

TEST(TupleSchedule, LowerRuntimeWinsWithinEqualWeights) {
  const PasswordDistribution d({{1.0, 1}}, 1);
  const std::vector<double> w = {0.25, 0.25, 0.25, 0.25};
  const auto s = BuildTupleSchedule(d, w);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(s[j].runtime_index, j);
}

TEST(DeterministicBestResponse, CracksEverythingJustAboveBreakEven) {
  const auto r = DeterministicBestResponse(TwoThirds(), 4.0 / 3 + 0.01, 1.0);
  EXPECT_EQ(r.threshold, 2);
  EXPECT_EQ(r.cracked, 1.0);
}

TEST(DeterministicBestResponse, StopsJustBelowBreakEven) {
  const auto r = DeterministicBestResponse(TwoThirds(), 4.0 / 3 - 0.01, 1.0);
  EXPECT_EQ(r.threshold, 0);
  EXPECT_EQ(r.cracked, 0.0);
}

TEST(DeterministicBestResponse, MatchesExhaustiveThresholds) {
  std::mt19937_64 rng(41);
  const std::vector<double> one = {1.0};
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = oracle::RandomDistribution(rng, 5, 4);
    const auto got = DeterministicBestResponse(d, 2, 1);
    const auto want = oracle::BestPrefix(d, one, 2, 1);
    EXPECT_EQ(got.threshold, want.threshold);
    EXPECT_NEAR(got.cracked, want.cracked, 1e-12);
  }
}

TEST(DeterministicBestResponse, ZeroValueNeverAttacks) {
  const auto r = DeterministicBestResponse(SixteenthsDist(), 0.0, 1.0);
  EXPECT_EQ(r.threshold, 0);
  EXPECT_EQ(r.cracked, 0.0);
}

TEST(CashBestResponse, NonUniformTieResolvesToLargerThreshold) {
  // U(1) = U(2) = 1/8 exactly at v = 5/3.
  const auto r = CashBestResponse(TwoThirds(), FiveRuntimes(), 5.0 / 3, 0.5);
  EXPECT_NEAR(r.cracked, 0.5625, 1e-9);
  EXPECT_EQ(r.threshold, 2);
  EXPECT_NEAR(r.utility, 0.125, 1e-12);
}

TEST(CashBestResponse, UniformNineBelowThreshold) {
  // Same budget as deterministic k = 1, but no prefix pays off.
  const auto d = TwoThirds();
  const auto cash = CashDistribution::Uniform(9);
  const double v = 4.0 / 3 + 0.001;
  const auto r = CashBestResponse(d, cash, v, 0.2);
  EXPECT_EQ(r.threshold, 0);
  EXPECT_EQ(r.cracked, 0.0);
  EXPECT_EQ(oracle::BestPrefix(d, cash.weights(), v, 0.2).threshold, 0);
}

TEST(CashBestResponse, ZeroValueNeverAttacks) {
  const auto r = CashBestResponse(TwoThirds(), FiveRuntimes(), 0, 0.5);
  EXPECT_EQ(r.threshold, 0);
  EXPECT_EQ(r.cracked, 0.0);
  EXPECT_EQ(r.utility, 0.0);
}

TEST(CashBestResponse, SingleRuntimeMatchesDeterministic) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(0, 50), cost(0.05, 2);
  const auto one = CashDistribution::Uniform(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = oracle::RandomDistribution(rng, 6, 5);
    const double v = value(rng), k = cost(rng);
    const auto a = DeterministicBestResponse(d, v, k);
    const auto b = CashBestResponse(d, one, v, k);
    EXPECT_EQ(a.threshold, b.threshold);
    EXPECT_EQ(a.cracked, b.cracked);
  }
}

TEST(CashBestResponse, MatchesPrefixEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> runtimes(1, 5);
  std::uniform_real_distribution<double> value(0, 40), cost(0.05, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = oracle::RandomDistribution(rng, 5, 4);
    const CashDistribution cash(oracle::RandomCash(rng, runtimes(rng)));
    const double v = value(rng), k = cost(rng);
    const auto got = CashBestResponse(d, cash, v, k);
    const auto want = oracle::BestPrefix(d, cash.weights(), v, k);
    ASSERT_EQ(got.threshold, want.threshold) << "trial " << trial;
    EXPECT_NEAR(got.cracked, want.cracked, 1e-12);
    EXPECT_NEAR(got.utility, want.utility, 1e-9 * std::max(1.0, v));
  }
}

TEST(CashBestResponse, UtilityNonnegativeAndCrackedMonotoneInValue) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = oracle::RandomDistribution(rng, 5, 4);
    const CashDistribution cash(oracle::RandomCash(rng, 1 + trial % 5));
    double last = 0;
    for (double v = 0; v < 60; v += 0.37) {
      const auto r = CashBestResponse(d, cash, v, 0.4);
      EXPECT_GE(r.utility, 0);
      EXPECT_GE(r.cracked, last - 1e-12);
      last = r.cracked;
    }
  }
}

TEST(ThresholdProfile, RecurrenceMatchesClosedFormCost) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = oracle::RandomDistribution(rng, 5, 4);
    const CashDistribution cash(oracle::RandomCash(rng, 1 + trial % 5));
    const double v = 7.5, k = 0.3;
    const auto pis = oracle::ExpandTuples(d, cash.weights());
    for (const auto& at : ThresholdProfile(BuildTupleSchedule(d, cash.weights()), v, k)) {
      double mass = 0;
      for (std::int64_t i = 0; i < at.threshold; ++i) mass += pis[i];
      const double closed = v * mass - oracle::PrefixCost(pis, at.threshold, k);
      EXPECT_NEAR(at.utility, closed, 1e-12);
      EXPECT_NEAR(at.cracked, mass, 1e-12);
    }
  }
}

TEST(UniformCashHashCost, SpendsTheBudget) {
  EXPECT_DOUBLE_EQ(UniformCashHashCost(1, 5, 1), 1.0 / 3);
  EXPECT_DOUBLE_EQ(UniformCashHashCost(1, 1, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(UniformCashHashCost(2, 4, 0), 0.5);
  EXPECT_THROW(UniformCashHashCost(1, 0, 1), DomainError);
}

TEST(UniformSuccessRate, AgreesWithExplicitUniformCash) {
  const auto d = SixteenthsDist();
  for (double v : {0.0, 1.0, 3.0, 10.0, 100.0}) {
    const auto a = UniformSuccessRate(d, v, 1, 5, 1);
    const auto b = CashBestResponse(d, CashDistribution::Uniform(5), v, 1.0 / 3);
    EXPECT_EQ(a.threshold, b.threshold);
    EXPECT_EQ(a.cracked, b.cracked);
  }
  EXPECT_EQ(UniformSuccessRate(d, 0, 1, 5, 1).cracked, 0.0);
}

}  // namespace
}  // namespace cashopt
