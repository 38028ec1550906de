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

#ifndef CASHOPT_DISTRIBUTION_H_
#define CASHOPT_DISTRIBUTION_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cashopt {

// Tolerance on total probability mass of a password distribution.
inline constexpr double kMassTolerance = 1e-9;

// One equivalence class: `count` distinct passwords, each chosen by a random
// user with the same `probability`.
struct PasswordClass {
  double probability = 0;
  std::int64_t count = 0;

  friend bool operator==(const PasswordClass&, const PasswordClass&) = default;
};

// "f c": `count` distinct passwords were each chosen by `frequency` users.
struct FrequencyRecord {
  std::int64_t frequency = 0;
  std::int64_t count = 0;
};

struct Violation {
  enum class Kind { kEmpty, kNonPositive, kNotSorted, kMass };
  Kind kind;
  std::string message;
};

// Returns the first invariant of a class list that does not hold, in the
// order: empty, nonpositive entries, ordering, total mass.
std::optional<Violation> Validate(std::span<const PasswordClass> classes);

// Empirical password distribution compacted into equivalence classes sorted
// by strictly decreasing probability. Passwords themselves are never kept.
// Immutable once built.
class PasswordDistribution {
 public:
  // Throws InvariantError when `classes` fails Validate().
  PasswordDistribution(std::vector<PasswordClass> classes,
                       std::int64_t total_users);

  std::span<const PasswordClass> classes() const { return classes_; }
  const PasswordClass& operator[](std::size_t i) const { return classes_[i]; }
  std::size_t num_classes() const { return classes_.size(); }
  // N: number of users the frequencies were drawn from.
  std::int64_t total_users() const { return total_users_; }
  // n: number of distinct passwords.
  std::int64_t total_passwords() const { return total_passwords_; }

 private:
  std::vector<PasswordClass> classes_;
  std::int64_t total_users_;
  std::int64_t total_passwords_;
};

// Normalizes a frequency table. Duplicate frequencies are merged.
PasswordDistribution FromFrequencies(std::span<const FrequencyRecord> records);

// Recovers the integral frequency table, f_i = round(p_i * N).
std::vector<FrequencyRecord> ToFrequencies(const PasswordDistribution& dist);

// Reads "f c" records, one per line. '#' lines and blank lines are skipped.
// Throws ParseError (with the 1-based line number) or EmptyInputError.
PasswordDistribution IngestFrequencyCorpus(std::istream& in);

// Reads one password per line and counts duplicates. Throws EmptyInputError.
PasswordDistribution IngestPlaintext(std::istream& in);

// Normalized cache format: "# users N" header, then "p_i n_i" per class with
// p_i printed at 17 significant digits.
void WriteNormalized(const PasswordDistribution& dist, std::ostream& out);
PasswordDistribution ReadNormalized(std::istream& in);

}  // namespace cashopt

#endif  // CASHOPT_DISTRIBUTION_H_
