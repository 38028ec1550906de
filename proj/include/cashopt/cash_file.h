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

#ifndef CASHOPT_CASH_FILE_H_
#define CASHOPT_CASH_FILE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "cashopt/adversary.h"

namespace cashopt {

// On-disk CASH distribution: "# key value" header comments followed by one
// "t w_t" line for t = 1..m.
struct CashFile {
  CashDistribution cash = CashDistribution::Uniform(1);
  double k = 1;
  double alpha = 1;
  double c_max = 1;
  double epsilon = 0.02;
  std::optional<std::int64_t> source_threshold;  // empty: uniform CASH
  std::optional<double> predicted_cracked;
};

void WriteCashFile(const CashFile& file, std::ostream& out);

// Throws ParseError for malformed lines, InvariantError for bad weights.
CashFile ReadCashFile(std::istream& in);

}  // namespace cashopt

#endif  // CASHOPT_CASH_FILE_H_
