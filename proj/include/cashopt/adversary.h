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

#ifndef CASHOPT_ADVERSARY_H_
#define CASHOPT_ADVERSARY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cashopt/distribution.h"

namespace cashopt {

inline constexpr double kCashTolerance = 1e-9;

// Two utilities within this much of each other (relative to max(1, v)) are a
// tie; ties resolve to the larger threshold.
inline constexpr double kUtilityTieTolerance = 1e-10;

// Defender's distribution over the hidden runtime parameter t in {1..m}.
// weight(t) is Pr[t_u = t]; weights are nonincreasing in t.
class CashDistribution {
 public:
  // Throws InvariantError unless the weights are nonnegative, nonincreasing
  // and sum to 1 (each within kCashTolerance).
  explicit CashDistribution(std::vector<double> weights);

  static CashDistribution Uniform(int m);

  int m() const { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const { return weights_; }
  // 1-based, matching the runtime parameter t.
  double weight(int t) const { return weights_[t - 1]; }
  // E[t] = sum_t t * weight(t).
  double ExpectedRuntime() const;

 private:
  std::vector<double> weights_;
};

// Server-side knobs, all costs in units of one base-hash evaluation.
struct ServerParams {
  double k = 1;       // cost of one H^k evaluation
  double alpha = 1;   // fraction of sessions with a correct password
  double c_max = 1;   // amortized cost budget per session
  int m = 1;          // runtime range

  // Throws InfeasibleParameters when no CASH distribution can meet c_max.
  void Validate() const;
};

struct AdversaryModel {
  double value = 0;           // v: attacker's value per cracked password
  double believed_value = 0;  // v-hat: the defender's estimate of v
};

// All (password, t) guesses of one class at one runtime: `count` tuples, each
// correct with probability `pi`. Indices are 0-based.
struct ScheduleEntry {
  int class_index = 0;
  int runtime_index = 0;
  double pi = 0;
  std::int64_t count = 0;
};

// Guess groups in the order a rational attacker tries them: pi descending,
// then smaller class index, then smaller runtime index.
using TupleSchedule = std::vector<ScheduleEntry>;

TupleSchedule BuildTupleSchedule(const PasswordDistribution& dist,
                                 std::span<const double> cash_weights);

struct BestResponse {
  std::int64_t threshold = 0;  // B*: number of guesses before giving up
  double cracked = 0;          // probability mass of the first B* guesses
  double utility = 0;
};

// Best threshold against deterministic key stretching with hash cost k:
//   U(B) = v * sum_{i<=B} p_i - k * (sum_{i<=B} i p_i + B * sum_{i>B} p_i).
BestResponse DeterministicBestResponse(const PasswordDistribution& dist,
                                       double v, double k);

// Best threshold against CASH with distribution `cash` and hash cost k.
BestResponse CashBestResponse(const PasswordDistribution& dist,
                              const CashDistribution& cash, double v, double k);

// Best response over an explicit schedule (used when the schedule is reused).
BestResponse BestResponseOverSchedule(const TupleSchedule& schedule, double v,
                                      double k);

// (threshold, cracked, utility) at every group boundary of `schedule`,
// starting after the first group. Utility is convex within a group, so these
// are the only thresholds a best response can pick.
std::vector<BestResponse> ThresholdProfile(const TupleSchedule& schedule,
                                           double v, double k);

// Hash cost that spends exactly c_max per session under uniform CASH.
double UniformCashHashCost(double c_max, int m, double alpha);

BestResponse UniformSuccessRate(const PasswordDistribution& dist, double v,
                                double c_max, int m, double alpha);

}  // namespace cashopt

#endif  // CASHOPT_ADVERSARY_H_
