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

#include <algorithm>
#include <cmath>
#include <string>

#include "cashopt/errors.h"

namespace cashopt {

CashDistribution::CashDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvariantError("CASH distribution needs m >= 1");
  double sum = 0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    const double w = weights_[j];
    if (!std::isfinite(w) || w < -kCashTolerance || w > 1 + kCashTolerance) {
      throw InvariantError("CASH weight out of [0,1] at t=" + std::to_string(j + 1));
    }
    if (j > 0 && w > weights_[j - 1] + kCashTolerance) {
      throw InvariantError("CASH weights increase at t=" + std::to_string(j + 1));
    }
    sum += w;
  }
  if (std::abs(sum - 1) > kCashTolerance) {
    throw InvariantError("CASH weights sum to " + std::to_string(sum));
  }
}

CashDistribution CashDistribution::Uniform(int m) {
  if (m < 1) throw DomainError("m must be >= 1");
  return CashDistribution(std::vector<double>(m, 1.0 / m));
}

double CashDistribution::ExpectedRuntime() const {
  double e = 0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    e += static_cast<double>(j + 1) * weights_[j];
  }
  return e;
}

void ServerParams::Validate() const {
  if (!(k > 0) || !(c_max > 0) || m < 1 || alpha < 0 || alpha > 1) {
    throw DomainError("server parameters out of range");
  }
  if (k > c_max || (1 - alpha) * m * k > c_max) {
    throw InfeasibleParameters("hash cost k too large for the cost budget");
  }
}

TupleSchedule BuildTupleSchedule(const PasswordDistribution& dist,
                                 std::span<const double> cash_weights) {
  TupleSchedule schedule;
  schedule.reserve(dist.num_classes() * cash_weights.size());
  for (std::size_t i = 0; i < dist.num_classes(); ++i) {
    for (std::size_t j = 0; j < cash_weights.size(); ++j) {
      schedule.push_back({static_cast<int>(i), static_cast<int>(j),
                          dist[i].probability * cash_weights[j], dist[i].count});
    }
  }
  std::sort(schedule.begin(), schedule.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              if (a.pi != b.pi) return a.pi > b.pi;
              if (a.class_index != b.class_index) return a.class_index < b.class_index;
              return a.runtime_index < b.runtime_index;
            });
  return schedule;
}

namespace {

struct Group {
  double pi;
  std::int64_t count;
};

// Walks guess groups in order, calling visit(boundary) after each group.
template <typename Visit>
void WalkGroups(std::span<const Group> groups, double v, double k, Visit&& visit) {
  double success = 0;
  double utility = 0;
  std::int64_t threshold = 0;
  for (const auto& [pi, count] : groups) {
    const auto c = static_cast<double>(count);
    threshold += count;
    success += pi * c;
    // Cost of `count` more guesses: each is paid unless the password was
    // already found, and a hit inside the group lands uniformly.
    const double delta_cost = k * (c * (1 - success) + (pi * c * c + pi * c) / 2);
    utility += v * pi * c - delta_cost;
    visit(BestResponse{threshold, success, utility});
  }
}

BestResponse Maximize(std::span<const Group> groups, double v, double k) {
  const double tie = kUtilityTieTolerance * std::max(1.0, v);
  BestResponse best;
  double best_utility = 0;
  WalkGroups(groups, v, k, [&](const BestResponse& at) {
    if (at.utility > best_utility + tie) {
      best_utility = at.utility;
      best = at;
    } else if (at.utility >= best_utility - tie) {
      best_utility = std::max(best_utility, at.utility);
      best = at;
    }
  });
  return best;
}

std::vector<Group> ToGroups(const TupleSchedule& schedule) {
  std::vector<Group> groups;
  groups.reserve(schedule.size());
  for (const auto& e : schedule) groups.push_back({e.pi, e.count});
  return groups;
}

}  // namespace

BestResponse BestResponseOverSchedule(const TupleSchedule& schedule, double v,
                                      double k) {
  return Maximize(ToGroups(schedule), v, k);
}

std::vector<BestResponse> ThresholdProfile(const TupleSchedule& schedule,
                                           double v, double k) {
  std::vector<BestResponse> profile;
  profile.reserve(schedule.size());
  WalkGroups(ToGroups(schedule), v, k,
             [&](const BestResponse& at) { profile.push_back(at); });
  return profile;
}

BestResponse DeterministicBestResponse(const PasswordDistribution& dist,
                                       double v, double k) {
  std::vector<Group> groups;
  groups.reserve(dist.num_classes());
  for (const auto& c : dist.classes()) groups.push_back({c.probability, c.count});
  return Maximize(groups, v, k);
}

BestResponse CashBestResponse(const PasswordDistribution& dist,
                              const CashDistribution& cash, double v, double k) {
  return BestResponseOverSchedule(BuildTupleSchedule(dist, cash.weights()), v, k);
}

double UniformCashHashCost(double c_max, int m, double alpha) {
  if (m < 1 || !(c_max > 0) || alpha < 0 || alpha > 1) {
    throw DomainError("uniform CASH parameters out of range");
  }
  return c_max / ((1 - alpha) * m + alpha * (m + 1) / 2.0);
}

BestResponse UniformSuccessRate(const PasswordDistribution& dist, double v,
                                double c_max, int m, double alpha) {
  const double k = UniformCashHashCost(c_max, m, alpha);
  return CashBestResponse(dist, CashDistribution::Uniform(m), v, k);
}

}  // namespace cashopt
