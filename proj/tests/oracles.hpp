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

// Slow, obviously-correct reference implementations used by the tests.

#pragma once

#include <cmath>
#include <cstdint>

namespace oracle {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// p if n = p^k for a prime p and k >= 1, else 0.
inline std::int64_t prime_power_base(std::int64_t n) {
  if (n < 2) return 0;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    while (n % d == 0) n /= d;
    return n == 1 ? d : 0;
  }
  return n;
}

inline double theta(std::int64_t n) { return is_prime(n) ? std::log(static_cast<double>(n)) : 0.0; }

inline double lambda(std::int64_t n) {
  const std::int64_t p = prime_power_base(n);
  return p ? std::log(static_cast<double>(p)) : 0.0;
}

inline std::int64_t mod(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

}  // namespace oracle
