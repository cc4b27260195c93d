// Copyright 2026 The primesquare Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace primesquare {

// Deterministic for every n < 2^64.
bool is_prime(std::uint64_t n);

// Returns p when n = p^k for a prime p and k >= 1, otherwise nullopt.
std::optional<std::uint64_t> prime_power_base(std::uint64_t n);

std::uint64_t integer_root(std::uint64_t n, unsigned k);

enum class WeightKind { Theta, Lambda, Indicator };

const char* to_string(WeightKind kind);
std::optional<WeightKind> parse_weight_kind(std::string_view name);

// Theta: log n on primes. Lambda: log p on prime powers p^k. Indicator: 1 on
// primes. All vanish elsewhere (including n = 0, 1).
double weight(WeightKind kind, std::uint64_t n);

// Primality flags for the half-open window [lo, hi).
class PrimeWindow {
 public:
  PrimeWindow(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> bits)
      : lo_(lo), hi_(hi), bits_(std::move(bits)) {}

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(hi_ - lo_); }

  // Offset i corresponds to the integer lo() + i.
  bool test(std::size_t i) const noexcept { return (bits_[i >> 6] >> (i & 63)) & 1u; }
  bool contains_prime(std::uint64_t n) const noexcept {
    return n >= lo_ && n < hi_ && test(static_cast<std::size_t>(n - lo_));
  }
  std::size_t count() const noexcept;
  std::vector<std::uint64_t> primes() const;

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
  std::vector<std::uint64_t> bits_;
};

inline constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kSieveWindowBudget = std::uint64_t{1} << 32;

// Segmented sieve of Eratosthenes. Requires 2 <= lo < hi <= 2^62; windows
// wider than kSieveWindowBudget throw Error{Resource}.
PrimeWindow sieve_range(std::uint64_t lo, std::uint64_t hi);

// All primes p <= limit, ascending.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

// Byte-per-integer primality table on [0, limit]; falls back to is_prime()
// above it.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  bool operator()(std::uint64_t n) const { return n <= limit_ ? flags_[n] != 0 : is_prime(n); }

  // Process-wide table covering [0, 2^24], built on first use.
  static const PrimeTable& shared();

 private:
  std::uint64_t limit_;
  std::vector<std::uint8_t> flags_;
};

// Dense lookup of weights on [0, limit]; falls back to weight() above it.
class WeightTable {
 public:
  explicit WeightTable(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  bool prime(std::uint64_t n) const {
    return n <= limit_ ? is_prime_[n] != 0 : is_prime(n);
  }
  double theta(std::uint64_t n) const;
  double lambda(std::uint64_t n) const;
  double operator()(WeightKind kind, std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint8_t> is_prime_;
  std::vector<double> lambda_;
};

// Integer affine form constant + coeff_x * x + coeff_y * y.
struct AffineForm {
  std::int64_t constant = 0;
  std::int64_t coeff_x = 0;
  std::int64_t coeff_y = 0;

  std::int64_t operator()(std::int64_t x, std::int64_t y) const;
  bool is_constant() const noexcept { return coeff_x == 0 && coeff_y == 0; }
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

// One row of a lattice domain: the points (x, y) with y_lo <= y <= y_hi.
struct LatticeRow {
  std::int64_t x;
  std::int64_t y_lo;
  std::int64_t y_hi;
};

struct LatticeBox {
  std::int64_t x_lo, x_hi;  // inclusive
  std::int64_t y_lo, y_hi;  // inclusive
};

bool is_proper_prime_power(std::uint64_t n);

// Number of lattice points at which form(x, y) = p^k with k >= 2. The form
// must be nonconstant (Error{Domain} otherwise).
std::uint64_t prime_power_scan(const AffineForm& form, std::span<const LatticeRow> rows);
std::uint64_t prime_power_scan(const AffineForm& form, const LatticeBox& box);

}  // namespace primesquare
