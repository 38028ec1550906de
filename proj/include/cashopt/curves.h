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

#ifndef CASHOPT_CURVES_H_
#define CASHOPT_CURVES_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cashopt/adversary.h"
#include "cashopt/distribution.h"
#include "cashopt/optimizer.h"

namespace cashopt {

// Fraction cracked by a rational attacker at one value v, under the three
// defenses at equal amortized cost.
struct CurveRow {
  double v_over_cmax = 0;
  double p_cash = 0;
  double p_unif = 0;
  double p_det = 0;
  std::string note;  // set when the CASH defense changed or failed
};

// How the defender's estimate v_hat relates to each grid value v.
struct VhatPolicy {
  // Empty: v_hat = v at every point. Otherwise v_hat / c_max is fixed.
  std::optional<double> fixed_ratio;

  static VhatPolicy Match() { return {}; }
  static VhatPolicy Fixed(double ratio) { return {ratio}; }
};

struct CurveOptions {
  double alpha = 1;
  double c_max = 1;
  VhatPolicy policy;
  OptimizerConfig config;  // config.m is the runtime range
};

// Grid values of v / c_max at the plotted coordinates of the evaluation
// figures.
std::vector<double> DefaultValueGrid();

// Rows come back in grid order; points are computed on config.threads
// workers. Deterministic key stretching uses k = c_max.
std::vector<CurveRow> GenerateCurves(const PasswordDistribution& dist,
                                     std::span<const double> v_over_cmax,
                                     const CurveOptions& options);

// Header "v_over_cmax,p_cash,p_unif,p_det,note"; 9 significant digits.
void WriteCurvesCsv(std::span<const CurveRow> rows, std::ostream& out);

struct CostCdfRow {
  double cost = 0;
  double cash = 0;
  double uniform = 0;
  double deterministic = 0;
};

// Pr[session cost <= x] at every support point x of the three defenses.
// A session checks a correct password with probability alpha (cost k t) and
// a wrong one otherwise (cost k m).
std::vector<CostCdfRow> CostCdf(const CashDistribution& cash, double k,
                                double alpha, double c_max);

void WriteCostCdfCsv(std::span<const CostCdfRow> rows, std::ostream& out);

}  // namespace cashopt

#endif  // CASHOPT_CURVES_H_
