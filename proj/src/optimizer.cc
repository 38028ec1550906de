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

#include "cashopt/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.h"

namespace cashopt {

std::int64_t GuessAllocation::Total() const {
  return std::accumulate(per_class.begin(), per_class.end(), std::int64_t{0});
}

std::vector<double> DefaultKSet(double c_max, double alpha, int m, int count) {
  const double k_max = c_max / ((1 - alpha) * m + alpha);
  std::vector<double> ks;
  for (int j = 1; j <= count; ++j) ks.push_back(k_max * j / count);
  return ks;
}

std::vector<std::int64_t> DefaultThresholds(double c_max) {
  static constexpr double kScaled[] = {5e4,    1e6, 1e7,  1.5e7, 2e7, 2.5e7,
                                       2.65e7, 2.8e7, 3e7, 5e7,   1e8};
  std::vector<std::int64_t> out;
  for (double b : kScaled) out.push_back(std::llround(b * c_max));
  return out;
}

OptimizerConfig DefaultConfig(double c_max, double alpha, int m) {
  OptimizerConfig config;
  config.m = m;
  config.k_set = DefaultKSet(c_max, alpha, m);
  config.thresholds = DefaultThresholds(c_max);
  return config;
}

double ServerCost(std::span<const double> weights, double k, double alpha) {
  const auto m = static_cast<double>(weights.size());
  double expected = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    expected += static_cast<double>(j + 1) * weights[j];
  }
  return (1 - alpha) * k * m + alpha * k * expected;
}

double ServerCost(const CashDistribution& cash, double k, double alpha) {
  return ServerCost(cash.weights(), k, alpha);
}

namespace {

LinearConstraint SumRow(int m) {
  LinearConstraint row{{}, Relation::kEqual, 1.0, "sum(w) = 1"};
  for (int t = 1; t <= m; ++t) row.terms.push_back({WeightVar(t), 1.0});
  return row;
}

LinearConstraint CostRow(int m, double k, double c_max, double alpha) {
  // alpha k sum_t t w_t <= c_max - (1-alpha) k m
  LinearConstraint row{{}, Relation::kLessEqual, c_max - (1 - alpha) * k * m, "cost"};
  for (int t = 1; t <= m; ++t) row.terms.push_back({WeightVar(t), alpha * k * t});
  return row;
}

LinearConstraint MonotoneRow(int t) {
  return {{{WeightVar(t), 1.0}, {WeightVar(t + 1), -1.0}},
          Relation::kGreaterEqual,
          0.0,
          "w" + std::to_string(t) + " >= w" + std::to_string(t + 1)};
}

void CheckAllocation(const PasswordDistribution& dist, int m, const GuessAllocation& b) {
  if (b.per_class.size() != dist.num_classes()) {
    throw DomainError("allocation has the wrong number of classes");
  }
  for (std::size_t i = 0; i < b.per_class.size(); ++i) {
    if (b.per_class[i] < 0 || b.per_class[i] > m * dist[i].count) {
      throw DomainError("allocation for class " + std::to_string(i) + " outside [0, m*n_i]");
    }
  }
}

CashDistribution Sanitize(std::span<const double> raw) {
  std::vector<double> w(raw.begin(), raw.end());
  double sum = 0;
  for (auto& x : w) {
    x = std::max(0.0, x);
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return CashDistribution(std::move(w));
}

struct KRun {
  enum class Outcome { kConverged, kExhausted, kInfeasible };
  Outcome outcome = Outcome::kInfeasible;
  std::optional<ThresholdSolution> solution;
};

KRun RunCuttingPlanes(const PasswordDistribution& dist, std::int64_t budget,
                      double k, double c_max, double alpha,
                      const OptimizerConfig& config) {
  const int m = config.m;
  KRun run;
  InitialProgram program;
  try {
    program = InitialConstraints(m, k, c_max, alpha);
  } catch (const InfeasibleParameters&) {
    return run;
  }
  LpProblem lp(m + 1);
  lp.objective[SuccessVar(m)] = 1;
  lp.lower = program.lower;
  lp.upper = program.upper;
  lp.constraints = std::move(program.constraints);

  std::vector<GuessAllocation> cuts;
  std::vector<double> trace;
  int rounds = 0;
  for (;;) {
    const LpSolution lp_solution = SolveLp(lp);
    if (lp_solution.status != LpStatus::kOptimal) return run;
    trace.push_back(lp_solution.objective);
    const std::span<const double> weights(lp_solution.values.data(), m);
    const double success = lp_solution.values[SuccessVar(m)];

    const OracleVerdict verdict =
        SeparationOracle(dist, weights, success, budget, k, c_max, alpha);
    double slack = 0;
    bool done = true;
    bool exhausted = false;
    if (const auto* cut = std::get_if<OracleCut>(&verdict)) {
      slack = cut->slack;
      // Rows without an allocation restate constraints already in the
      // program; they can only fire on LP round-off.
      const bool repeated =
          !cut->allocation ||
          std::find(cuts.begin(), cuts.end(), *cut->allocation) != cuts.end();
      if (slack > config.epsilon && !repeated) {
        if (rounds >= config.max_cut_rounds) {
          exhausted = true;
        } else {
          lp.constraints.push_back(cut->row);
          cuts.push_back(*cut->allocation);
          ++rounds;
          done = false;
        }
      }
    }
    if (!done) continue;
    run.outcome = exhausted ? KRun::Outcome::kExhausted : KRun::Outcome::kConverged;
    run.solution = ThresholdSolution{Sanitize(weights), k,
                                     std::clamp(success, 0.0, 1.0), rounds, slack,
                                     std::move(trace)};
    return run;
  }
}

// Lower success rate wins. Rates within kSuccessTieTolerance tie, and a tie
// goes to the larger k: the same threshold-B success at a higher price per
// guess can only shrink a rational attacker's threshold.
bool Better(const ThresholdSolution& a, const ThresholdSolution& b) {
  if (a.p_adv < b.p_adv - kSuccessTieTolerance) return true;
  if (a.p_adv > b.p_adv + kSuccessTieTolerance) return false;
  return a.k > b.k;
}

}  // namespace

InitialProgram InitialConstraints(int m, double k, double c_max, double alpha) {
  if (m < 1 || !(k > 0) || !(c_max > 0) || alpha < 0 || alpha > 1) {
    throw DomainError("initial constraint parameters out of range");
  }
  if ((1 - alpha) * m * k > c_max) {
    throw InfeasibleParameters("(1-alpha) m k = " + std::to_string((1 - alpha) * m * k) +
                               " exceeds c_max");
  }
  InitialProgram program;
  program.constraints.push_back(SumRow(m));
  for (int t = 1; t < m; ++t) program.constraints.push_back(MonotoneRow(t));
  if (alpha > 0) program.constraints.push_back(CostRow(m, k, c_max, alpha));
  program.lower.assign(m + 1, 0.0);
  program.upper.assign(m + 1, 1.0);
  return program;
}

double AllocationSuccess(const PasswordDistribution& dist,
                         std::span<const double> weights,
                         const GuessAllocation& b) {
  const int m = static_cast<int>(weights.size());
  CheckAllocation(dist, m, b);
  std::vector<double> prefix(m + 1, 0.0);
  for (int j = 0; j < m; ++j) prefix[j + 1] = prefix[j] + weights[j];
  double total = 0;
  for (std::size_t i = 0; i < dist.num_classes(); ++i) {
    const std::int64_t n = dist[i].count;
    const std::int64_t full = b.per_class[i] / n;
    const std::int64_t rem = b.per_class[i] % n;
    double covered = static_cast<double>(n) * prefix[full];
    if (rem > 0) covered += static_cast<double>(rem) * weights[full];
    total += dist[i].probability * covered;
  }
  return total;
}

LinearConstraint SuccessRow(const PasswordDistribution& dist, int m,
                            const GuessAllocation& b) {
  CheckAllocation(dist, m, b);
  // coef[j] accumulates the mass covered at runtime j+1; full runtimes are
  // added as a range via a difference array.
  std::vector<double> diff(m + 1, 0.0);
  std::vector<double> partial(m, 0.0);
  for (std::size_t i = 0; i < dist.num_classes(); ++i) {
    const std::int64_t n = dist[i].count;
    const std::int64_t full = b.per_class[i] / n;
    const std::int64_t rem = b.per_class[i] % n;
    const double p = dist[i].probability;
    diff[0] += p * static_cast<double>(n);
    diff[full] -= p * static_cast<double>(n);
    if (rem > 0) partial[full] += p * static_cast<double>(rem);
  }
  LinearConstraint row{{{SuccessVar(m), 1.0}}, Relation::kGreaterEqual, 0.0, "success[b="};
  double running = 0;
  for (int j = 0; j < m; ++j) {
    running += diff[j];
    const double coef = running + partial[j];
    if (coef != 0) row.terms.push_back({WeightVar(j + 1), -coef});
  }
  for (std::size_t i = 0; i < b.per_class.size(); ++i) {
    row.label += (i ? "," : "") + std::to_string(b.per_class[i]);
  }
  row.label += "]";
  return row;
}

GuessAllocation GreedyAllocation(const PasswordDistribution& dist,
                                 std::span<const double> weights,
                                 std::int64_t budget) {
  GuessAllocation b{std::vector<std::int64_t>(dist.num_classes(), 0)};
  if (budget <= 0) return b;
  for (const auto& entry : BuildTupleSchedule(dist, weights)) {
    const std::int64_t take = std::min(entry.count, budget);
    b.per_class[entry.class_index] += take;
    budget -= take;
    if (budget == 0) break;
  }
  return b;
}

OracleVerdict SeparationOracle(const PasswordDistribution& dist,
                               std::span<const double> weights, double success,
                               std::int64_t budget, double k, double c_max,
                               double alpha) {
  const int m = static_cast<int>(weights.size());
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1) > kOracleTolerance) {
    return OracleCut{SumRow(m), std::abs(sum - 1), std::nullopt};
  }
  const double cost = ServerCost(weights, k, alpha);
  if (cost > c_max + kOracleTolerance) {
    return OracleCut{CostRow(m, k, c_max, alpha), cost - c_max, std::nullopt};
  }
  for (int t = 1; t <= m; ++t) {
    const double w = weights[t - 1];
    if (w < -kOracleTolerance) {
      return OracleCut{{{{WeightVar(t), 1.0}}, Relation::kGreaterEqual, 0.0,
                        "w" + std::to_string(t) + " >= 0"},
                       -w,
                       std::nullopt};
    }
    if (t < m && weights[t] > w + kOracleTolerance) {
      return OracleCut{MonotoneRow(t), weights[t] - w, std::nullopt};
    }
  }
  if (success > 1 + kOracleTolerance) {
    return OracleCut{{{{SuccessVar(m), 1.0}}, Relation::kLessEqual, 1.0, "P <= 1"},
                     success - 1,
                     std::nullopt};
  }
  if (success < -kOracleTolerance) {
    return OracleCut{{{{SuccessVar(m), 1.0}}, Relation::kGreaterEqual, 0.0, "P >= 0"},
                     -success,
                     std::nullopt};
  }
  GuessAllocation b = GreedyAllocation(dist, weights, budget);
  const double achieved = AllocationSuccess(dist, weights, b);
  if (success < achieved - kOracleTolerance) {
    return OracleCut{SuccessRow(dist, m, b), achieved - success, std::move(b)};
  }
  return OracleOk{};
}

ThresholdSolution OptimizeForThreshold(const PasswordDistribution& dist,
                                       std::int64_t budget, double c_max,
                                       double alpha, const OptimizerConfig& config) {
  if (config.k_set.empty()) throw DomainError("k set is empty");
  if (config.m < 1 || !(config.epsilon > 0) || config.max_cut_rounds < 1) {
    throw DomainError("optimizer configuration out of range");
  }
  if (budget < 0) throw DomainError("threshold must be nonnegative");

  std::vector<KRun> runs(config.k_set.size());
  internal::ParallelFor(runs.size(), config.threads, [&](std::size_t j) {
    runs[j] = RunCuttingPlanes(dist, budget, config.k_set[j], c_max, alpha, config);
  });

  const ThresholdSolution* best = nullptr;
  const ThresholdSolution* best_exhausted = nullptr;
  for (const auto& run : runs) {
    if (run.outcome == KRun::Outcome::kConverged) {
      if (!best || Better(*run.solution, *best)) best = &*run.solution;
    } else if (run.outcome == KRun::Outcome::kExhausted) {
      if (!best_exhausted || Better(*run.solution, *best_exhausted)) {
        best_exhausted = &*run.solution;
      }
    }
  }
  if (best) return *best;
  if (best_exhausted) {
    throw CutBudgetExhausted(
        "cut-round budget exhausted for B=" + std::to_string(budget) +
            " (residual slack " + std::to_string(best_exhausted->residual_slack) + ")",
        *best_exhausted);
  }
  throw InfeasibleParameters("no hash cost in the k set admits a feasible distribution");
}

DefenseSolution FindCashDistribution(const PasswordDistribution& dist,
                                     double v_hat, double c_max, double alpha,
                                     const OptimizerConfig& config) {
  if (config.thresholds.empty()) throw DomainError("threshold set is empty");
  const double k_uniform = UniformCashHashCost(c_max, config.m, alpha);
  DefenseSolution best{CashDistribution::Uniform(config.m), k_uniform, 0, std::nullopt, {}};
  best.predicted_cracked = CashBestResponse(dist, best.cash, v_hat, k_uniform).cracked;

  struct Candidate {
    std::optional<ThresholdSolution> solution;
    std::string error;
  };
  std::vector<Candidate> candidates(config.thresholds.size());
  OptimizerConfig inner = config;
  inner.threads = 1;
  internal::ParallelFor(candidates.size(), config.threads, [&](std::size_t x) {
    try {
      candidates[x].solution =
          OptimizeForThreshold(dist, config.thresholds[x], c_max, alpha, inner);
    } catch (const Error& e) {
      candidates[x].error = e.what();
    }
  });

  for (std::size_t x = 0; x < candidates.size(); ++x) {
    const auto& candidate = candidates[x];
    if (!candidate.solution) {
      best.failures.emplace_back(config.thresholds[x], candidate.error);
      continue;
    }
    const double cracked =
        CashBestResponse(dist, candidate.solution->cash, v_hat, candidate.solution->k).cracked;
    // Later thresholds win ties.
    if (cracked <= best.predicted_cracked) {
      best.cash = candidate.solution->cash;
      best.k = candidate.solution->k;
      best.predicted_cracked = cracked;
      best.source_threshold = config.thresholds[x];
    }
  }
  return best;
}

}  // namespace cashopt
