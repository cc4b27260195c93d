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

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "primesquare/geometry.hpp"
#include "primesquare/local.hpp"
#include "primesquare/parallel.hpp"
#include "primesquare/primes.hpp"

namespace primesquare {

// Lattices with more support points than this are refused (Error{Resource}).
inline constexpr std::uint64_t kLatticeBudget = std::uint64_t{1} << 28;

/// One support point of chi_X with a nonzero core weight.
struct MassPoint {
  std::int64_t m = 0;
  std::int64_t n = 0;
  double chi = 0.0;
  double omega = 0.0;                 // product of the five core weights
  std::array<double, 3> residual{};   // theta(N1(m)), theta(N2(n)), theta(N3(m + n))
};

/// The weighted lattice behind M1(X): every (m, n) with chi_X(m, n) != 0 is
/// visited once, in ascending (m, n). Only points with omega != 0 are kept;
/// all sums over them run in that order with compensated accumulation, so
/// results are reproducible for any thread count.
class CoreMassField {
 public:
  static CoreMassField build(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                             WeightKind kind, unsigned threads = default_threads());

  const WNormalization& normalization() const noexcept { return norm_; }
  const Cutoff& cutoff() const noexcept { return cutoff_; }
  std::int64_t X() const noexcept { return X_; }
  WeightKind kind() const noexcept { return kind_; }
  const std::vector<MassPoint>& points() const noexcept { return points_; }
  std::uint64_t support_points() const noexcept { return support_points_; }
  std::uint64_t core_prime_points() const noexcept { return points_.size(); }
  std::uint64_t all_eight_points() const noexcept { return all_eight_points_; }
  double max_form_value() const noexcept { return max_form_value_; }

  double m1() const noexcept { return m1_; }
  // sum chi * omega * theta(N1) theta(N2) theta(N3)
  double joint() const noexcept { return joint_; }

  // Marginal variable of a point: m for N1, n for N2, m + n for N_Delta.
  static std::int64_t key(Residual star, const MassPoint& p);
  // N_star as a function of its marginal variable.
  std::int64_t residual_value(Residual star, std::int64_t key) const;

  // S1(m), S2(n) or S_Delta(r), ascending in the variable.
  std::vector<std::pair<std::int64_t, double>> marginal(Residual star) const;

  // A_d: mass of the points whose N_star is divisible by d. Throws
  // Error{Domain} unless d is squarefree and coprime to 6 W q0.
  double restricted_mass(std::int64_t d, Residual star) const;

 private:
  WNormalization norm_;
  Cutoff cutoff_;
  std::int64_t X_ = 0;
  WeightKind kind_ = WeightKind::Theta;
  std::vector<MassPoint> points_;
  std::uint64_t support_points_ = 0;
  std::uint64_t all_eight_points_ = 0;
  double max_form_value_ = 0.0;
  double m1_ = 0.0;
  double joint_ = 0.0;
};

struct MassOptions {
  bool predict = true;
  std::int64_t series_cutoff = kDefaultSeriesCutoff;
  int quadrature_grid = 1000;
  unsigned threads = default_threads();
};

struct MassReport {
  std::int64_t X = 0;
  WeightKind kind = WeightKind::Theta;
  double m1 = 0.0;
  double joint = 0.0;
  std::uint64_t support_points = 0;
  std::uint64_t core_prime_points = 0;
  std::uint64_t all_eight_points = 0;
  double ratio = 0.0;  // M1 / X^2
  // Prediction S_core * J: truncated W-conditioned core series times the
  // cutoff integral. Zero when not requested.
  double singular_core = 0.0;
  double cutoff_integral = 0.0;
  double c_pred = 0.0;
};

MassReport core_mass(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                     WeightKind kind, const MassOptions& options = {});

// C_{q0}(X) with theta weights throughout.
double joint_functional(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                        unsigned threads = default_threads());

double restricted_mass(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                       std::int64_t d, Residual star, unsigned threads = default_threads());

bool is_squarefree(std::int64_t d);
int moebius(std::int64_t d);

// Moduli admitted by the restricted masses: squarefree, coprime to 6 W q0.
bool admissible_modulus(std::int64_t d, const WNormalization& norm);

// g_star(d) = prod_{p | d} g_star(p).
double g_star_multiplicative(std::int64_t d, std::int64_t q0, Residual star);

enum class SieveWeights { Unit, Moebius };

struct DiscrepancyRow {
  std::int64_t d = 0;
  int mu = 0;
  double restricted = 0.0;  // A_d
  double density = 0.0;     // g(d)
  double predicted = 0.0;   // g(d) M1
  double error = 0.0;       // A_d - g(d) M1
};

struct DiscrepancyReport {
  std::int64_t X = 0;
  double delta = 0.0;
  std::int64_t level = 0;  // D = floor(X^delta)
  Residual star = Residual::One;
  double m1 = 0.0;
  std::vector<DiscrepancyRow> rows;
  double sum_abs = 0.0;
  double sum_unit = 0.0;     // lambda = 1
  double sum_moebius = 0.0;  // lambda = mu
  double normalized_abs() const { return m1 > 0.0 ? sum_abs / m1 : 0.0; }
  double normalized(SieveWeights w) const {
    if (m1 <= 0.0) return 0.0;
    return (w == SieveWeights::Unit ? sum_unit : sum_moebius) / m1;
  }
};

// Requires 0 < delta < 1.
DiscrepancyReport discrepancy_sum(const CoreMassField& field, double delta, Residual star);

struct DiagonalReport {
  std::int64_t X = 0;
  double m1 = 0.0;
  double diagonal_total = 0.0;  // sum_r S_Delta(r), by direct (r, s) enumeration
  double relative_error = 0.0;
  std::uint64_t support_rowwise = 0;
  std::uint64_t support_diagonal = 0;
  std::uint64_t mass_points_rowwise = 0;  // points with omega != 0
  std::uint64_t mass_points_diagonal = 0;
  bool within_tolerance = false;
  bool counts_equal = false;
  bool passed() const { return within_tolerance && counts_equal; }
};

inline constexpr double kDiagonalTolerance = 1e-9;

// Re-enumerates the lattice in (r, s) = (m + n, m) with the transformed core
// forms and compares the diagonal total with M1.
DiagonalReport diagonal_mass_check(const CoreMassField& field);

struct DirectionCheck {
  std::vector<Direction> directions;  // transformed core directions, A1..A5
  bool matches_expected = false;      // {(0,1),(1,-1),(1,0),(1,1),(2,-1)}
  bool nonproportional = false;
  bool ok() const { return matches_expected && nonproportional; }
};

// (a, b) -> (b, a - b): the coefficient of a m + b n in (r, s).
Direction diagonal_transform(Direction d);
DirectionCheck diagonal_direction_check(std::int64_t q0);

// Bump on [X, 2X]: exp(1 - 1/(1 - r^2)) with r = |n - 3X/2| / (X/2).
double bdh_window(double n, std::int64_t X);

struct VarianceReport {
  std::int64_t X = 0;
  std::int64_t Q = 0;
  double variance = 0.0;
  std::vector<double> per_modulus;  // contribution of each q = 1..Q
  double window_mass = 0.0;         // sum_n F(n)
  double log_power = 0.0;           // C with V = X Q (log X)^C
  double normalized() const { return variance / (static_cast<double>(X) * static_cast<double>(Q)); }
};

// Requires 1 <= Q <= X; X beyond the sieve budget throws Error{Resource}.
VarianceReport bdh_variance(std::int64_t X, std::int64_t Q, unsigned threads = default_threads());

// Points of R_X at which form(m, n) is a prime power p^k, k >= 2.
std::uint64_t prime_power_scan(const AffineForm& form, const Cutoff& cutoff, std::int64_t X);

// Least-squares slope of log(count) against log(X).
double loglog_slope(const std::vector<std::pair<double, double>>& samples);

}  // namespace primesquare
