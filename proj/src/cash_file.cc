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

#include "cashopt/cash_file.h"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cashopt/errors.h"

namespace cashopt {
namespace {

std::string Num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double ParseDouble(const std::string& s, std::size_t line) {
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void WriteCashFile(const CashFile& file, std::ostream& out) {
  out << "# cashopt CASH distribution\n";
  out << "# k " << Num(file.k) << "\n";
  out << "# m " << file.cash.m() << "\n";
  out << "# alpha " << Num(file.alpha) << "\n";
  out << "# c_max " << Num(file.c_max) << "\n";
  out << "# epsilon " << Num(file.epsilon) << "\n";
  out << "# source_threshold "
      << (file.source_threshold ? std::to_string(*file.source_threshold) : "uniform")
      << "\n";
  if (file.predicted_cracked) {
    out << "# predicted_cracked " << Num(*file.predicted_cracked) << "\n";
  }
  for (int t = 1; t <= file.cash.m(); ++t) {
    out << t << " " << Num(file.cash.weight(t)) << "\n";
  }
}

CashFile ReadCashFile(std::istream& in) {
  CashFile file;
  std::vector<double> weights;
  std::optional<int> declared_m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first[0] == '#') {
      std::string key, value;
      if (first.size() > 1) {
        key = first.substr(1);
      } else if (!(fields >> key)) {
        continue;
      }
      if (!(fields >> value)) continue;
      if (key == "k") {
        file.k = ParseDouble(value, line_no);
      } else if (key == "m") {
        declared_m = static_cast<int>(ParseDouble(value, line_no));
      } else if (key == "alpha") {
        file.alpha = ParseDouble(value, line_no);
      } else if (key == "c_max") {
        file.c_max = ParseDouble(value, line_no);
      } else if (key == "epsilon") {
        file.epsilon = ParseDouble(value, line_no);
      } else if (key == "source_threshold") {
        if (value != "uniform") {
          file.source_threshold = static_cast<std::int64_t>(ParseDouble(value, line_no));
        }
      } else if (key == "predicted_cracked") {
        file.predicted_cracked = ParseDouble(value, line_no);
      }
      continue;
    }
    std::string weight;
    if (!(fields >> weight)) throw ParseError(line_no, "expected \"t w_t\"");
    const double t = ParseDouble(first, line_no);
    if (t != static_cast<double>(weights.size() + 1)) {
      throw ParseError(line_no, "runtimes must be listed as 1..m in order");
    }
    weights.push_back(ParseDouble(weight, line_no));
  }
  if (weights.empty()) throw EmptyInputError("CASH file has no weights");
  if (declared_m && *declared_m != static_cast<int>(weights.size())) {
    throw ParseError(line_no, "header m disagrees with the number of weights");
  }
  file.cash = CashDistribution(std::move(weights));
  return file;
}

}  // namespace cashopt
