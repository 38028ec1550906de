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

#include "cashopt/mechanism.h"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "cashopt/errors.h"

namespace cashopt {
namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string ToHex(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> FromHex(std::string_view hex) {
  if (hex.size() % 2) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

void Sha256(const std::uint8_t* data, std::size_t len, std::uint8_t* out) {
  unsigned int out_len = 0;
  if (EVP_Digest(data, len, out, &out_len, EVP_sha256(), nullptr) != 1 || out_len != 32) {
    throw Error("SHA-256 evaluation failed");
  }
}

}  // namespace

Digest HashEval(std::string_view password, std::span<const std::uint8_t> salt,
                std::uint32_t t, std::uint32_t k_iter) {
  if (t < 1 || k_iter < 1) throw DomainError("t and k_iter must be >= 1");
  // buffer = h || M; the first round hashes M alone.
  std::vector<std::uint8_t> buffer(32);
  buffer.insert(buffer.end(), password.begin(), password.end());
  buffer.push_back(0);
  buffer.insert(buffer.end(), salt.begin(), salt.end());
  buffer.push_back(0);
  for (int shift = 24; shift >= 0; shift -= 8) {
    buffer.push_back(static_cast<std::uint8_t>(t >> shift));
  }
  Digest h;
  Sha256(buffer.data() + 32, buffer.size() - 32, h.data());
  for (std::uint32_t j = 1; j < k_iter; ++j) {
    std::copy(h.begin(), h.end(), buffer.begin());
    Sha256(buffer.data(), buffer.size(), h.data());
  }
  return h;
}

int SampleRuntime(const CashDistribution& cash, double u) {
  double cumulative = 0;
  for (int t = 1; t <= cash.m(); ++t) {
    cumulative += cash.weight(t);
    if (u < cumulative) return t;
  }
  // Round-off left u above the total mass: fall back to the last runtime
  // with positive weight.
  for (int t = cash.m(); t >= 1; --t) {
    if (cash.weight(t) > 0) return t;
  }
  return 1;
}

std::uint32_t IterationsForCost(double k) {
  return static_cast<std::uint32_t>(std::max(1.0, std::round(k)));
}

SystemRandom::result_type SystemRandom::operator()() {
  result_type value;
  if (RAND_bytes(reinterpret_cast<unsigned char*>(&value), sizeof(value)) != 1) {
    throw Error("system random source failed");
  }
  return value;
}

RecordStore::RecordStore(int m) : m_(m) {
  if (m < 1) throw DomainError("m must be >= 1");
}

RecordStore::RecordStore(RecordStore&& other) : m_(other.m_) {
  std::unique_lock lock(other.mu_);
  records_ = std::move(other.records_);
}

std::size_t RecordStore::size() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

void RecordStore::CheckNewAccount(const std::string& username,
                                  const CashDistribution& cash, std::uint32_t k_iter,
                                  int salt_bits) const {
  if (username.empty() || username.find_first_of(",\r\n") != std::string::npos) {
    throw DomainError("usernames must be nonempty and free of commas and newlines");
  }
  if (cash.m() != m_) throw DomainError("CASH distribution has the wrong m");
  if (k_iter < 1) throw DomainError("k_iter must be >= 1");
  if (salt_bits <= 0 || salt_bits % 8 != 0) {
    throw DomainError("salt length must be a positive multiple of 8 bits");
  }
  std::shared_lock lock(mu_);
  if (records_.contains(username)) throw ConflictError("user '" + username + "' exists");
}

void RecordStore::Insert(AccountRecord record) {
  std::unique_lock lock(mu_);
  auto name = record.username;
  if (!records_.emplace(std::move(name), std::move(record)).second) {
    throw ConflictError("user already exists");
  }
}

AuthResult RecordStore::Authenticate(std::string_view username,
                                     std::string_view guess) const {
  AccountRecord record;
  {
    std::shared_lock lock(mu_);
    auto it = records_.find(username);
    if (it == records_.end()) return {AuthResult::Outcome::kUnknownUser, 0, 0};
    record = it->second;
  }
  for (int t = 1; t <= m_; ++t) {
    const Digest h = HashEval(guess, record.salt, static_cast<std::uint32_t>(t), record.k_iter);
    if (CRYPTO_memcmp(h.data(), record.digest.data(), h.size()) == 0) {
      return {AuthResult::Outcome::kSuccess, t, t};
    }
  }
  return {AuthResult::Outcome::kFailure, 0, m_};
}

std::optional<AccountRecord> RecordStore::Find(std::string_view username) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(username);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void RecordStore::Save(std::ostream& out) const {
  std::shared_lock lock(mu_);
  for (const auto& [name, r] : records_) {
    out << name << ',' << ToHex(r.salt) << ',' << r.k_iter << ',' << ToHex(r.digest) << '\n';
  }
}

RecordStore RecordStore::Load(std::istream& in, int m) {
  RecordStore store(m);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4 || fields[0].empty()) {
      throw ParseError(line_no, "expected u,salt,k_iter,digest");
    }
    auto salt = FromHex(fields[1]);
    auto digest = FromHex(fields[3]);
    if (!salt || !digest || digest->size() != 32) throw ParseError(line_no, "bad hex field");
    std::uint32_t k_iter = 0;
    const auto& iter_field = fields[2];
    const auto* iter_end = iter_field.data() + iter_field.size();
    auto [ptr, ec] = std::from_chars(iter_field.data(), iter_end, k_iter);
    if (ec != std::errc() || ptr != iter_end || k_iter < 1) {
      throw ParseError(line_no, "bad k_iter");
    }
    AccountRecord record{fields[0], std::move(*salt), k_iter, {}};
    std::copy(digest->begin(), digest->end(), record.digest.begin());
    try {
      store.Insert(std::move(record));
    } catch (const ConflictError&) {
      throw ParseError(line_no, "duplicate username");
    }
  }
  return store;
}

}  // namespace cashopt
