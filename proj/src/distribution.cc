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

#include "cashopt/distribution.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "cashopt/errors.h"

namespace cashopt {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool IsSkippable(std::string_view line) {
  line = Trim(line);
  return line.empty() || line.front() == '#';
}

// Splits on runs of blanks.
std::vector<std::string_view> Fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Violation> Validate(std::span<const PasswordClass> classes) {
  if (classes.empty()) {
    return Violation{Violation::Kind::kEmpty, "no equivalence classes"};
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!(classes[i].probability > 0) || classes[i].count < 1) {
      return Violation{Violation::Kind::kNonPositive,
                       "class " + std::to_string(i) +
                           " has a nonpositive probability or count"};
    }
  }
  for (std::size_t i = 1; i < classes.size(); ++i) {
    if (!(classes[i].probability < classes[i - 1].probability)) {
      return Violation{Violation::Kind::kNotSorted,
                       "probabilities not strictly decreasing at class " +
                           std::to_string(i)};
    }
  }
  double mass = 0;
  for (const auto& c : classes) mass += c.probability * static_cast<double>(c.count);
  if (std::abs(mass - 1.0) > kMassTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "total mass %.17g != 1", mass);
    return Violation{Violation::Kind::kMass, buf};
  }
  return std::nullopt;
}

PasswordDistribution::PasswordDistribution(std::vector<PasswordClass> classes,
                                           std::int64_t total_users)
    : classes_(std::move(classes)), total_users_(total_users), total_passwords_(0) {
  if (auto violation = Validate(classes_)) throw InvariantError(violation->message);
  if (total_users_ < 1) throw InvariantError("total users must be positive");
  for (const auto& c : classes_) total_passwords_ += c.count;
}

PasswordDistribution FromFrequencies(std::span<const FrequencyRecord> records) {
  if (records.empty()) throw EmptyInputError("empty frequency table");
  // frequency -> number of passwords, highest frequency first.
  std::map<std::int64_t, std::int64_t, std::greater<>> merged;
  std::int64_t users = 0;
  for (const auto& r : records) {
    if (r.frequency < 1 || r.count < 1) {
      throw DomainError("frequency records must be positive");
    }
    merged[r.frequency] += r.count;
    users += r.frequency * r.count;
  }
  std::vector<PasswordClass> classes;
  classes.reserve(merged.size());
  const auto n = static_cast<double>(users);
  for (const auto& [frequency, count] : merged) {
    classes.push_back({static_cast<double>(frequency) / n, count});
  }
  return PasswordDistribution(std::move(classes), users);
}

std::vector<FrequencyRecord> ToFrequencies(const PasswordDistribution& dist) {
  std::vector<FrequencyRecord> out;
  const auto n = static_cast<double>(dist.total_users());
  for (const auto& c : dist.classes()) {
    out.push_back({std::llround(c.probability * n), c.count});
  }
  return out;
}

PasswordDistribution IngestFrequencyCorpus(std::istream& in) {
  std::vector<FrequencyRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsSkippable(line)) continue;
    const auto fields = Fields(Trim(line));
    if (fields.size() != 2) throw ParseError(line_no, "expected \"f c\"");
    auto f = ParseNumber<std::int64_t>(fields[0]);
    auto c = ParseNumber<std::int64_t>(fields[1]);
    if (!f || !c) throw ParseError(line_no, "fields must be integers");
    if (*f < 1 || *c < 1) throw ParseError(line_no, "fields must be >= 1");
    records.push_back({*f, *c});
  }
  if (records.empty()) throw EmptyInputError("frequency corpus has no records");
  return FromFrequencies(records);
}

PasswordDistribution IngestPlaintext(std::istream& in) {
  std::unordered_map<std::string, std::int64_t> counts;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++counts[line];
  }
  if (counts.empty()) throw EmptyInputError("password list is empty");
  std::map<std::int64_t, std::int64_t> histogram;
  for (const auto& [pwd, f] : counts) ++histogram[f];
  std::vector<FrequencyRecord> records;
  for (const auto& [f, c] : histogram) records.push_back({f, c});
  return FromFrequencies(records);
}

void WriteNormalized(const PasswordDistribution& dist, std::ostream& out) {
  out << "# users " << dist.total_users() << "\n";
  out << "# classes " << dist.num_classes() << " passwords "
      << dist.total_passwords() << "\n";
  char buf[64];
  for (const auto& c : dist.classes()) {
    std::snprintf(buf, sizeof(buf), "%.17g %lld\n", c.probability,
                  static_cast<long long>(c.count));
    out << buf;
  }
}

PasswordDistribution ReadNormalized(std::istream& in) {
  std::vector<PasswordClass> classes;
  std::int64_t users = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      const auto fields = Fields(trimmed.substr(1));
      if (fields.size() == 2 && fields[0] == "users") {
        auto n = ParseNumber<std::int64_t>(fields[1]);
        if (!n || *n < 1) throw ParseError(line_no, "bad users header");
        users = *n;
      }
      continue;
    }
    const auto fields = Fields(trimmed);
    if (fields.size() != 2) throw ParseError(line_no, "expected \"p n\"");
    auto p = ParseNumber<double>(fields[0]);
    auto c = ParseNumber<std::int64_t>(fields[1]);
    if (!p || !c) throw ParseError(line_no, "malformed class record");
    classes.push_back({*p, *c});
  }
  if (classes.empty()) throw EmptyInputError("distribution file has no classes");
  // Without a header, assume the rarest class was seen exactly once.
  if (users == 0) users = std::max<std::int64_t>(1, std::llround(1.0 / classes.back().probability));
  return PasswordDistribution(std::move(classes), users);
}

}  // namespace cashopt
