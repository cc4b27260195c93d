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

#include "primesquare/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "primesquare/error.hpp"

namespace primesquare {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::NotMagic: return "not-magic";
    case ErrorKind::SmallObstruction: return "small-obstruction";
    case ErrorKind::NotPrime: return "not-prime";
    case ErrorKind::UnsupportedPrime: return "unsupported-prime";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Strong probable-prime test to base a; n odd, n > 2.
bool strong_probable_prime(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  const int s = std::countr_zero(d);
  d >>= s;
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

constexpr u64 kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Jim Sinclair's seven bases are deterministic below 2^64.
constexpr u64 kWitnesses[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};

// Returns b^k, or 0 when it exceeds 2^64 - 1.
u64 saturating_pow(u64 b, unsigned k) {
  u128 r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= b;
    if (r > ~u64{0}) return 0;
  }
  return static_cast<u64>(r);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  for (u64 a : kWitnesses) {
    if (!strong_probable_prime(n, a)) return false;
  }
  return true;
}

std::uint64_t integer_root(std::uint64_t n, unsigned k) {
  if (k == 0) throw Error(ErrorKind::Domain, "integer_root: k must be positive");
  if (k == 1 || n < 2) return n;
  auto r = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / k));
  // pow is only approximate; walk to the exact floor.
  while (r > 0) {
    const u64 pk = saturating_pow(r, k);
    if (pk != 0 && pk <= n) break;
    --r;
  }
  for (;;) {
    const u64 next = saturating_pow(r + 1, k);
    if (next == 0 || next > n) break;
    ++r;
  }
  return r;
}

std::optional<std::uint64_t> prime_power_base(std::uint64_t n) {
  if (n < 2) return std::nullopt;
  if (is_prime(n)) return n;
  for (unsigned k = 2; k < 64; ++k) {
    const u64 r = integer_root(n, k);
    if (r < 2) break;
    if (saturating_pow(r, k) == n && is_prime(r)) return r;
  }
  return std::nullopt;
}

bool is_proper_prime_power(std::uint64_t n) {
  return !is_prime(n) && prime_power_base(n).has_value();
}

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Theta: return "theta";
    case WeightKind::Lambda: return "lambda";
    case WeightKind::Indicator: return "indicator";
  }
  return "unknown";
}

std::optional<WeightKind> parse_weight_kind(std::string_view name) {
  if (name == "theta") return WeightKind::Theta;
  if (name == "lambda") return WeightKind::Lambda;
  if (name == "indicator") return WeightKind::Indicator;
  return std::nullopt;
}

double weight(WeightKind kind, std::uint64_t n) {
  switch (kind) {
    case WeightKind::Theta:
      return is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
    case WeightKind::Indicator:
      return is_prime(n) ? 1.0 : 0.0;
    case WeightKind::Lambda: {
      const auto base = prime_power_base(n);
      return base ? std::log(static_cast<double>(*base)) : 0.0;
    }
  }
  return 0.0;
}

std::size_t PrimeWindow::count() const noexcept {
  std::size_t total = 0;
  for (u64 word : bits_) total += static_cast<std::size_t>(std::popcount(word));
  return total;
}

std::vector<std::uint64_t> PrimeWindow::primes() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (test(i)) out.push_back(lo_ + i);
  }
  return out;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(limit) + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (u64 j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

PrimeWindow sieve_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || lo >= hi || hi > kSieveLimit) {
    throw Error(ErrorKind::Domain, "sieve_range requires 2 <= lo < hi <= 2^62");
  }
  const u64 width = hi - lo;
  if (width > kSieveWindowBudget) {
    throw Error(ErrorKind::Resource, "sieve_range window exceeds memory budget");
  }
  std::vector<u64> bits((width + 63) / 64, ~u64{0});
  if (width % 64) bits.back() = (u64{1} << (width % 64)) - 1;

  auto clear = [&](u64 n) {
    const u64 i = n - lo;
    bits[i >> 6] &= ~(u64{1} << (i & 63));
  };

  // Base primes up to sqrt(hi - 1) are produced one block at a time and used
  // immediately, so memory stays bounded even near 2^62.
  const u64 root = integer_root(hi - 1, 2);
  const auto small = primes_up_to(static_cast<std::uint32_t>(integer_root(root, 2) + 1));
  constexpr u64 kBlock = u64{1} << 18;
  std::vector<std::uint8_t> block(kBlock);
  for (u64 block_lo = 2; block_lo <= root; block_lo += kBlock) {
    const u64 block_hi = std::min(root + 1, block_lo + kBlock);
    std::fill(block.begin(), block.end(), 0);
    for (u64 p : small) {
      if (p * p >= block_hi) break;
      u64 start = std::max(p * p, (block_lo + p - 1) / p * p);
      for (u64 j = start; j < block_hi; j += p) block[j - block_lo] = 1;
    }
    for (u64 p = block_lo; p < block_hi; ++p) {
      if (block[p - block_lo]) continue;
      u64 start = std::max(p * p, (lo + p - 1) / p * p);
      for (u64 j = start; j < hi; j += p) clear(j);
    }
  }
  return PrimeWindow(lo, hi, std::move(bits));
}

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
  if (limit > (u64{1} << 34)) throw Error(ErrorKind::Resource, "prime table limit exceeds memory budget");
  flags_.assign(static_cast<std::size_t>(limit) + 1, 1);
  flags_[0] = 0;
  if (limit >= 1) flags_[1] = 0;
  for (u64 i = 2; i * i <= limit; ++i) {
    if (!flags_[i]) continue;
    for (u64 j = i * i; j <= limit; j += i) flags_[j] = 0;
  }
}

const PrimeTable& PrimeTable::shared() {
  static const PrimeTable table(u64{1} << 24);
  return table;
}

WeightTable::WeightTable(std::uint64_t limit) : limit_(limit) {
  if (limit > (u64{1} << 32)) {
    throw Error(ErrorKind::Resource, "weight table limit exceeds memory budget");
  }
  const auto size = static_cast<std::size_t>(limit) + 1;
  is_prime_.assign(size, 1);
  lambda_.assign(size, 0.0);
  is_prime_[0] = 0;
  if (size > 1) is_prime_[1] = 0;
  for (u64 i = 2; i * i <= limit; ++i) {
    if (!is_prime_[i]) continue;
    for (u64 j = i * i; j <= limit; j += i) is_prime_[j] = 0;
  }
  for (u64 p = 2; p <= limit; ++p) {
    if (!is_prime_[p]) continue;
    const double lp = std::log(static_cast<double>(p));
    for (u64 pk = p; pk <= limit; pk *= p) {
      lambda_[pk] = lp;
      if (pk > limit / p) break;
    }
  }
}

double WeightTable::theta(std::uint64_t n) const {
  if (n > limit_) return weight(WeightKind::Theta, n);
  return is_prime_[n] ? lambda_[n] : 0.0;
}

double WeightTable::lambda(std::uint64_t n) const {
  if (n > limit_) return weight(WeightKind::Lambda, n);
  return lambda_[n];
}

double WeightTable::operator()(WeightKind kind, std::uint64_t n) const {
  switch (kind) {
    case WeightKind::Theta: return theta(n);
    case WeightKind::Lambda: return lambda(n);
    case WeightKind::Indicator: return prime(n) ? 1.0 : 0.0;
  }
  return 0.0;
}

std::int64_t AffineForm::operator()(std::int64_t x, std::int64_t y) const {
  return checked_add(constant, checked_add(checked_mul(coeff_x, x), checked_mul(coeff_y, y)));
}

namespace {

// Proper prime powers (k >= 2) inside [lo, hi], ascending.
std::vector<u64> proper_prime_powers(u64 lo, u64 hi) {
  std::vector<u64> out;
  if (hi < 4) return out;
  if (hi > (u64{1} << 52)) {
    throw Error(ErrorKind::Resource, "prime power scan: value range too large");
  }
  const auto root = static_cast<std::uint32_t>(integer_root(hi, 2));
  for (u64 p : primes_up_to(root)) {
    for (u64 pk = p * p; pk <= hi; pk *= p) {
      if (pk >= lo) out.push_back(pk);
      if (pk > hi / p) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::uint64_t prime_power_scan(const AffineForm& form, std::span<const LatticeRow> rows) {
  if (form.is_constant()) {
    throw Error(ErrorKind::Domain, "prime_power_scan needs a nonconstant form");
  }
  if (rows.empty()) return 0;
  // Value range over the domain from the row endpoints (the form is affine).
  std::int64_t vmin = INT64_MAX, vmax = INT64_MIN;
  for (const auto& row : rows) {
    if (row.y_lo > row.y_hi) continue;
    for (std::int64_t y : {row.y_lo, row.y_hi}) {
      const std::int64_t v = form(row.x, y);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (vmax < 4) return 0;
  const auto powers = proper_prime_powers(static_cast<u64>(std::max<std::int64_t>(vmin, 4)),
                                          static_cast<u64>(vmax));
  std::uint64_t count = 0;
  for (const auto& row : rows) {
    if (row.y_lo > row.y_hi) continue;
    const std::int64_t base = form(row.x, 0);
    const std::int64_t len = row.y_hi - row.y_lo + 1;
    if (form.coeff_y == 0) {
      if (base >= 4 && std::binary_search(powers.begin(), powers.end(), static_cast<u64>(base))) {
        count += static_cast<std::uint64_t>(len);
      }
      continue;
    }
    // base + coeff_y * y = v has at most one solution y per value.
    const std::int64_t lo_v = std::min(form(row.x, row.y_lo), form(row.x, row.y_hi));
    const std::int64_t hi_v = std::max(form(row.x, row.y_lo), form(row.x, row.y_hi));
    auto first = std::lower_bound(powers.begin(), powers.end(),
                                  static_cast<u64>(std::max<std::int64_t>(lo_v, 0)));
    for (auto it = first; it != powers.end() && static_cast<std::int64_t>(*it) <= hi_v; ++it) {
      const std::int64_t diff = static_cast<std::int64_t>(*it) - base;
      if (diff % form.coeff_y != 0) continue;
      const std::int64_t y = floor_div(diff, form.coeff_y);
      if (y >= row.y_lo && y <= row.y_hi) ++count;
    }
  }
  return count;
}

std::uint64_t prime_power_scan(const AffineForm& form, const LatticeBox& box) {
  std::vector<LatticeRow> rows;
  for (std::int64_t x = box.x_lo; x <= box.x_hi; ++x) rows.push_back({x, box.y_lo, box.y_hi});
  return prime_power_scan(form, rows);
}

}  // namespace primesquare
