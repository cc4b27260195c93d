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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "primesquare/algebra.hpp"
#include "primesquare/parallel.hpp"
#include "primesquare/rational.hpp"

namespace primesquare {

/// Residue classes t = a_W + W m, u = b_W + W n on which all eight forms are
/// coprime to W = prod_{p <= w, p != q0} p.
struct WNormalization {
  std::int64_t w = 0;
  std::int64_t q0 = 0;
  std::int64_t W = 1;
  std::int64_t a_W = 0;
  std::int64_t b_W = 0;
  std::vector<std::int64_t> primes;  // prime divisors of W, ascending

  // The eight forms in (m, n); core first (A1..A5), then residuals N1..N3.
  std::array<AffineForm, 5> core_forms() const;
  std::array<AffineForm, 3> residual_forms() const;
};

inline constexpr std::int64_t kDefaultW = 7;

// Canonical (lexicographically smallest) residues. Throws Error{Domain} for
// w < 2, the FormSystem errors for bad q0, Error{Overflow} if W overflows.
WNormalization compute_w_normalization(std::int64_t w, std::int64_t q0);

struct AdmissibilityWitness {
  std::int64_t t = 0;
  std::int64_t u = 0;
  std::vector<std::int64_t> residues;  // distinct values of L1..L8 mod p
};

// (0, 0) when p != q0 and (1, 1) when p == q0; any other pair is tried only
// if that one fails. nullopt when no pair mod p keeps all eight forms
// nonzero (as for p = q0 = 3).
std::optional<AdmissibilityWitness> admissibility_witness(std::int64_t p, std::int64_t q0);

// #{(x, y) mod p : every form nonzero mod p}. Counted row by row: in each row
// a form with a unit y-coefficient kills exactly one y.
std::uint64_t count_nonvanishing(std::span<const AffineForm> forms, std::int64_t p);

// As count_nonvanishing, additionally requiring `divisor` = 0 mod p.
std::uint64_t count_nonvanishing_on_zero_set(std::span<const AffineForm> forms,
                                             const AffineForm& divisor, std::int64_t p);

// #{(t, u) mod p : A1..A5 all nonzero mod p}.
std::uint64_t local_core_count(std::int64_t p, std::int64_t q0);

enum class Residual { One, Two, Diagonal };

const char* to_string(Residual star);
std::optional<Residual> parse_residual(std::string_view name);

// N_1 = q0 + 2t, N_2 = q0 + 2u, N_Delta = q0 + 2t + 2u.
AffineForm residual_form(std::int64_t q0, Residual star);

// Share of the core's local mass on which p | N_star. Throws
// Error{UnsupportedPrime} when p divides 2 q0.
Rational g_star(std::int64_t p, std::int64_t q0, Residual star);

// Local factors in the normalized variables (m, n). For p not dividing W
// these match the (t, u) counts; for p | W every class is a unit.
struct LocalFactor {
  std::int64_t p = 0;
  std::uint64_t core_count = 0;  // five core forms nonvanishing
  std::uint64_t full_count = 0;  // all eight forms nonvanishing
  double sigma = 0.0;            // (core_count / p^2) (1 - 1/p)^-5
  double beta = 0.0;             // (full_count / core_count) (1 - 1/p)^-3
};

LocalFactor local_factor(std::int64_t p, const WNormalization& norm);

enum class SeriesKind { Core, Residual };

struct SingularSeries {
  SeriesKind kind = SeriesKind::Core;
  std::int64_t cutoff = 0;  // P
  double value = 0.0;       // truncated product over p <= P
  double tail_constant = 0.0;
  double log_tail_bound = 0.0;  // |log(tail)| <= tail_constant * sum_{p > P} p^-2
  std::vector<LocalFactor> factors;
};

inline constexpr std::int64_t kDefaultSeriesCutoff = 10000;

SingularSeries singular_series(std::int64_t q0, SeriesKind kind, std::int64_t P, std::int64_t w,
                               unsigned threads = default_threads());

// Upper bound for sum_{p > P} 1/p^2.
double prime_reciprocal_square_tail(std::int64_t P);

struct LocalDensityRow {
  std::int64_t p = 0;
  std::uint64_t core_count = 0;
  std::optional<Rational> g1, g2, g_diag;  // empty when p | 2 q0
  double sigma = 0.0;
  double beta = 0.0;
};

std::vector<LocalDensityRow> local_density_table(std::int64_t q0, std::int64_t p_max, std::int64_t w);

}  // namespace primesquare
