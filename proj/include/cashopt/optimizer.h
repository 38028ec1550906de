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

#ifndef CASHOPT_OPTIMIZER_H_
#define CASHOPT_OPTIMIZER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cashopt/adversary.h"
#include "cashopt/distribution.h"
#include "cashopt/errors.h"
#include "cashopt/lp.h"

namespace cashopt {

// Tolerance used by the separation oracle on the structural rows and when
// deciding that a success-rate row is violated.
inline constexpr double kOracleTolerance = 1e-9;

// Per-threshold optima whose success rates differ by at most this much are
// treated as equal when choosing among hash costs.
inline constexpr double kSuccessTieTolerance = 1e-12;

// LP variable layout for the threshold-B program: weights t=1..m occupy
// indices 0..m-1 and the success-rate variable sits at index m.
constexpr int WeightVar(int t) { return t - 1; }
constexpr int SuccessVar(int m) { return m; }

// Hash evaluations a threshold-B attacker spends on each class.
// Feasible for budget B when sum(per_class) <= B and per_class[i] <= m * n_i.
struct GuessAllocation {
  std::vector<std::int64_t> per_class;

  std::int64_t Total() const;
  friend bool operator==(const GuessAllocation&, const GuessAllocation&) = default;
};

struct OptimizerConfig {
  double epsilon = 0.02;
  std::vector<double> k_set;
  std::vector<std::int64_t> thresholds;
  int m = 50;
  int max_cut_rounds = 200;
  int threads = 1;
};

// 20 evenly spaced hash costs in (0, k_max], where k_max is the largest k
// that admits any feasible distribution (all mass on t=1).
std::vector<double> DefaultKSet(double c_max, double alpha, int m, int count = 20);

// Attacker budgets {5e4, 1e6, 1e7, 1.5e7, 2e7, 2.5e7, 2.65e7, 2.8e7, 3e7,
// 5e7, 1e8} scaled by c_max.
std::vector<std::int64_t> DefaultThresholds(double c_max);

OptimizerConfig DefaultConfig(double c_max, double alpha, int m);

// Amortized server cost (1-alpha) k m + alpha k sum_t t w_t.
double ServerCost(std::span<const double> weights, double k, double alpha);
double ServerCost(const CashDistribution& cash, double k, double alpha);

struct InitialProgram {
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;
};

// Structural rows of the threshold-B program: the weights sum to one, decrease
// along t, and respect the cost row. The [0,1] boxes become variable bounds.
// Throws InfeasibleParameters when (1-alpha) m k > c_max.
InitialProgram InitialConstraints(int m, double k, double c_max, double alpha);

// Success rate of allocation `b` when each class spreads its guesses evenly
// over its passwords, most likely runtimes first:
//   sum_i p_i ((b_i mod n_i) w_{ceil(b_i/n_i)} + sum_{j <= floor(b_i/n_i)} n_i w_j).
// Throws DomainError when some b_i is negative or exceeds m * n_i.
double AllocationSuccess(const PasswordDistribution& dist,
                         std::span<const double> weights,
                         const GuessAllocation& b);

// The success-rate row  P - sum_j coef_j w_j >= 0  for a frozen allocation.
LinearConstraint SuccessRow(const PasswordDistribution& dist, int m,
                            const GuessAllocation& b);

// Allocation of a threshold-B attacker who takes guesses in schedule order.
GuessAllocation GreedyAllocation(const PasswordDistribution& dist,
                                 std::span<const double> weights,
                                 std::int64_t budget);

struct OracleOk {};

struct OracleCut {
  LinearConstraint row;
  double slack = 0;  // how far the candidate misses `row`
  std::optional<GuessAllocation> allocation;  // set for success-rate rows
};

using OracleVerdict = std::variant<OracleOk, OracleCut>;

// Certifies (weights, success) feasible for the threshold-B program or returns
// one violated row. The structural rows are checked before any success row.
OracleVerdict SeparationOracle(const PasswordDistribution& dist,
                               std::span<const double> weights, double success,
                               std::int64_t budget, double k, double c_max,
                               double alpha);

struct ThresholdSolution {
  CashDistribution cash;
  double k = 0;
  double p_adv = 0;
  int cut_rounds = 0;
  double residual_slack = 0;
  // LP objective after each solve of the winning k; nondecreasing.
  std::vector<double> objective_trace;
};

class CutBudgetExhausted : public Error {
 public:
  CutBudgetExhausted(std::string what, ThresholdSolution best)
      : Error(std::move(what)), best_(std::move(best)) {}
  const ThresholdSolution& best() const { return best_; }

 private:
  ThresholdSolution best_;
};

// Minimizes the success rate of a threshold-B attacker over distributions and
// every k in config.k_set by cutting planes. Among equally good hash costs the
// largest is kept.
ThresholdSolution OptimizeForThreshold(const PasswordDistribution& dist,
                                       std::int64_t budget, double c_max,
                                       double alpha, const OptimizerConfig& config);

struct DefenseSolution {
  CashDistribution cash;
  double k = 0;
  double predicted_cracked = 0;
  // Threshold whose distribution won; empty when uniform CASH was kept.
  std::optional<std::int64_t> source_threshold;
  // Thresholds whose optimization failed, with the reason.
  std::vector<std::pair<std::int64_t, std::string>> failures;
};

// Starts from uniform CASH and keeps whichever per-threshold optimum leaves
// the fewest passwords cracked by a rational attacker with value v_hat.
DefenseSolution FindCashDistribution(const PasswordDistribution& dist,
                                     double v_hat, double c_max, double alpha,
                                     const OptimizerConfig& config);

}  // namespace cashopt

#endif  // CASHOPT_OPTIMIZER_H_
