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

#ifndef CASHOPT_MECHANISM_H_
#define CASHOPT_MECHANISM_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cashopt/adversary.h"

namespace cashopt {

using Digest = std::array<std::uint8_t, 32>;

inline constexpr int kDefaultSaltBits = 128;

// H^k(pwd, salt, t). With M = pwd || 0x00 || salt || 0x00 || BE32(t):
// h_1 = SHA-256(M), h_{j+1} = SHA-256(h_j || M); returns h_{k_iter}.
Digest HashEval(std::string_view password, std::span<const std::uint8_t> salt,
                std::uint32_t t, std::uint32_t k_iter);

// Stored per account. The sampled runtime t_u is deliberately absent.
struct AccountRecord {
  std::string username;
  std::vector<std::uint8_t> salt;
  std::uint32_t k_iter = 1;
  Digest digest{};
};

struct AuthResult {
  enum class Outcome { kSuccess, kFailure, kUnknownUser };
  Outcome outcome = Outcome::kUnknownUser;
  int runtime = 0;      // matching t on success
  int evaluations = 0;  // H^k evaluations spent
};

// Inverse-CDF draw of t from `cash` given u uniform in [0, 1).
int SampleRuntime(const CashDistribution& cash, double u);

// Rounds an analytic hash cost to an iteration count (at least 1).
std::uint32_t IterationsForCost(double k);

// Uniform random bits from the OpenSSL CSPRNG.
class SystemRandom {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
};

// Account records for a CASH deployment with runtime range m. Writers are
// serialized; Authenticate may run concurrently with other readers.
class RecordStore {
 public:
  explicit RecordStore(int m);
  RecordStore(RecordStore&& other);

  int m() const { return m_; }
  std::size_t size() const;

  // Samples a salt of `salt_bits` bits and t_u ~ cash, stores the record and
  // forgets t_u. Throws ConflictError for an existing username and
  // DomainError for bad arguments.
  template <typename Rng>
  AccountRecord CreateAccount(std::string username, std::string_view password,
                              const CashDistribution& cash, std::uint32_t k_iter,
                              Rng& rng, int salt_bits = kDefaultSaltBits) {
    static_assert(Rng::min() == 0 && Rng::max() == std::numeric_limits<std::uint64_t>::max(),
                  "CreateAccount needs a 64-bit uniform random bit generator");
    CheckNewAccount(username, cash, k_iter, salt_bits);
    std::vector<std::uint8_t> salt(static_cast<std::size_t>(salt_bits / 8));
    for (std::size_t i = 0; i < salt.size(); i += 8) {
      std::uint64_t bits = rng();
      for (std::size_t b = i; b < std::min(salt.size(), i + 8); ++b, bits >>= 8) {
        salt[b] = static_cast<std::uint8_t>(bits & 0xff);
      }
    }
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const int t = SampleRuntime(cash, u);
    AccountRecord record{std::move(username), std::move(salt), k_iter, {}};
    record.digest = HashEval(password, record.salt, static_cast<std::uint32_t>(t), k_iter);
    Insert(record);
    return record;
  }

  // Tries t = 1..m in order and stops at the first match.
  AuthResult Authenticate(std::string_view username, std::string_view guess) const;

  std::optional<AccountRecord> Find(std::string_view username) const;

  // One "u,hex(salt),k_iter,hex(digest)" line per account, sorted by name.
  void Save(std::ostream& out) const;
  static RecordStore Load(std::istream& in, int m);

 private:
  void CheckNewAccount(const std::string& username, const CashDistribution& cash,
                       std::uint32_t k_iter, int salt_bits) const;
  void Insert(AccountRecord record);

  int m_;
  mutable std::shared_mutex mu_;
  std::map<std::string, AccountRecord, std::less<>> records_;
};

}  // namespace cashopt

#endif  // CASHOPT_MECHANISM_H_
