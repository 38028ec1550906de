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

#include "cashopt/curves.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <utility>

#include "parallel.h"

namespace cashopt {
namespace {

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

struct Defense {
  std::optional<DefenseSolution> solution;
  std::string error;
};

Defense SolveDefense(const PasswordDistribution& dist, double v_hat,
                     const CurveOptions& options, int threads) {
  OptimizerConfig config = options.config;
  config.threads = threads;
  try {
    return {FindCashDistribution(dist, v_hat, options.c_max, options.alpha, config), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

std::string SourceLabel(const DefenseSolution& d) {
  return d.source_threshold ? std::to_string(*d.source_threshold) : "uniform";
}

// Point masses (cost, probability) of one defense.
using CostLaw = std::vector<std::pair<double, double>>;

double CdfAt(const CostLaw& law, double x) {
  const double slop = 1e-12 * std::max(1.0, std::abs(x));
  double p = 0;
  for (const auto& [cost, mass] : law) {
    if (cost <= x + slop) p += mass;
  }
  return std::min(1.0, p);
}

CostLaw SessionCostLaw(std::span<const double> weights, double k, double alpha) {
  const int m = static_cast<int>(weights.size());
  CostLaw law;
  for (int t = 1; t <= m; ++t) law.emplace_back(k * t, alpha * weights[t - 1]);
  law.emplace_back(k * m, 1 - alpha);
  return law;
}

}  // namespace

std::vector<double> DefaultValueGrid() {
  return {1e2, 5e2, 1e3,   5e3,    1e4,    5e4,   1e5,    5e5, 1e6, 5e6, 1e7,
          1.5e7, 2e7, 2.5e7, 2.65e7, 2.7e7, 2.75e7, 2.8e7, 2.9e7, 3e7, 7e7, 1e8};
}

std::vector<CurveRow> GenerateCurves(const PasswordDistribution& dist,
                                     std::span<const double> v_over_cmax,
                                     const CurveOptions& options) {
  const int m = options.config.m;
  const double c_max = options.c_max;
  const std::size_t n = v_over_cmax.size();
  std::vector<CurveRow> rows(n);
  std::vector<std::string> sources(n);

  std::optional<Defense> fixed;
  if (options.policy.fixed_ratio) {
    fixed = SolveDefense(dist, *options.policy.fixed_ratio * c_max, options,
                         options.config.threads);
  }

  internal::ParallelFor(n, options.config.threads, [&](std::size_t i) {
    const double v = v_over_cmax[i] * c_max;
    CurveRow& row = rows[i];
    row.v_over_cmax = v_over_cmax[i];
    row.p_det = DeterministicBestResponse(dist, v, c_max).cracked;
    row.p_unif = UniformSuccessRate(dist, v, c_max, m, options.alpha).cracked;
    const Defense defense = fixed ? *fixed : SolveDefense(dist, v, options, 1);
    if (defense.solution) {
      row.p_cash = CashBestResponse(dist, defense.solution->cash, v, defense.solution->k).cracked;
      sources[i] = SourceLabel(*defense.solution);
    } else {
      row.p_cash = std::numeric_limits<double>::quiet_NaN();
      row.note = "error: " + defense.error;
    }
  });

  for (std::size_t i = 1; i < n; ++i) {
    if (rows[i].note.empty() && !sources[i - 1].empty() && sources[i] != sources[i - 1]) {
      rows[i].note = "defense changed: B " + sources[i - 1] + " -> " + sources[i];
    }
  }
  return rows;
}

void WriteCurvesCsv(std::span<const CurveRow> rows, std::ostream& out) {
  out << "v_over_cmax,p_cash,p_unif,p_det,note\n";
  for (const auto& r : rows) {
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out << Fmt(r.v_over_cmax) << ',' << Fmt(r.p_cash) << ',' << Fmt(r.p_unif) << ','
        << Fmt(r.p_det) << ',' << note << '\n';
  }
}

std::vector<CostCdfRow> CostCdf(const CashDistribution& cash, double k,
                                double alpha, double c_max) {
  const int m = cash.m();
  const double k_uniform = UniformCashHashCost(c_max, m, alpha);
  const CostLaw cash_law = SessionCostLaw(cash.weights(), k, alpha);
  const std::vector<double> flat(m, 1.0 / m);
  const CostLaw uniform_law = SessionCostLaw(flat, k_uniform, alpha);
  const CostLaw det_law = {{c_max, 1.0}};

  std::vector<double> xs;
  for (const auto* law : {&cash_law, &uniform_law, &det_law}) {
    for (const auto& [cost, mass] : *law) {
      if (mass > 0) xs.push_back(cost);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) {
                         return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
                       }),
           xs.end());
  std::vector<CostCdfRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    rows.push_back({x, CdfAt(cash_law, x), CdfAt(uniform_law, x), CdfAt(det_law, x)});
  }
  return rows;
}

void WriteCostCdfCsv(std::span<const CostCdfRow> rows, std::ostream& out) {
  out << "cost,cdf_cash,cdf_uniform,cdf_deterministic\n";
  for (const auto& r : rows) {
    out << Fmt(r.cost) << ',' << Fmt(r.cash) << ',' << Fmt(r.uniform) << ','
        << Fmt(r.deterministic) << '\n';
  }
}

}  // namespace cashopt
