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
#include <vector>

#include "primesquare/primes.hpp"
#include "primesquare/rational.hpp"

namespace primesquare {

// The closed trapezoid K = {1 <= x <= 2, 4x/3 <= y <= 5x/3}, written as four
// half-planes nx*x + ny*y <= h. Its area is 1/2 and its centroid (14/9, 7/3).
struct HalfPlane {
  std::int64_t nx;
  std::int64_t ny;
  std::int64_t h;
};

inline constexpr std::array<HalfPlane, 4> kRegionFacets{{
    {-1, 0, -1},  // x >= 1
    {1, 0, 2},    // x <= 2
    {4, -3, 0},   // y >= 4x/3
    {-5, 3, 0},   // y <= 5x/3
}};

inline constexpr double kRegionArea = 0.5;
inline const Rational kCentroidX{14, 9};
inline const Rational kCentroidY{7, 3};

bool in_region(const Rational& x, const Rational& y);
bool in_region(double x, double y);

struct LatticePoint {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// Rows of NK ∩ Z^2 in lexicographic (t, then u) order: t in [N, 2N],
// ceil(4t/3) <= u <= floor(5t/3).
std::vector<LatticeRow> dilation_rows(std::int64_t N);
std::vector<LatticePoint> enumerate_dilation(std::int64_t N);
std::uint64_t count_dilation(std::int64_t N);

// t < u < 2t < t+u < 2u < u+2t < 2u+t < 2u+2t
bool chain_check(std::int64_t t, std::int64_t u);

/// Smooth cutoff built on the gauge of K about its centroid:
///
///     gauge(p) = max_i (n_i . (p - c)) / (h_i - n_i . c)
///
/// so that c + s(K - c) = {gauge <= s}. With K0 = {gauge <= shrink} and
/// Kchi = {gauge <= support}, chi is 1 on K0, 0 off the interior of Kchi,
/// and exp(1 - 1/(1 - r^2)) in between, r the gauge rescaled to [0, 1].
class Cutoff {
 public:
  static constexpr double kDefaultShrink = 0.6;
  static constexpr double kDefaultSupport = 0.85;

  // Throws Error{InvalidArgument} unless 0 < shrink < support < 1.
  explicit Cutoff(double shrink = kDefaultShrink, double support = kDefaultSupport);

  double shrink() const noexcept { return shrink_; }
  double support() const noexcept { return support_; }

  static double gauge(double x, double y);
  double operator()(double x, double y) const;
  double operator()(const Rational& x, const Rational& y) const {
    return (*this)(x.to_double(), y.to_double());
  }
  bool in_support(double x, double y) const { return gauge(x, y) < support_; }

  // chi_X(m, n) = chi(m / X, n / X).
  double at_scale(std::int64_t m, std::int64_t n, std::int64_t X) const;

  // Euclidean distance from Kchi to the boundary of K.
  double margin() const;

  // Upper bound on |grad chi| from the profile and the gauge's Lipschitz
  // constant.
  double gradient_bound() const;

  // Bounding box of Kchi.
  std::array<double, 4> support_box() const;  // x_lo, x_hi, y_lo, y_hi

 private:
  double shrink_;
  double support_;
};

// R_X = {(m, n) : chi(m/X, n/X) != 0} as rows in ascending m; each row is a
// contiguous n-interval because Kchi is convex.
std::vector<LatticeRow> support_rows(const Cutoff& cutoff, std::int64_t X);
std::uint64_t support_size(const std::vector<LatticeRow>& rows);

struct ShiftCheck {
  bool ok = false;             // every support point maps into K
  std::int64_t threshold = 0;  // X0: shifts are guaranteed harmless for X >= X0
  double margin = 0.0;
};

// Whether (a_W + W m, b_W + W n) / (W X) lies in K for every (m, n) in R_X.
ShiftCheck support_shift_check(const Cutoff& cutoff, std::int64_t W, std::int64_t a_W,
                               std::int64_t b_W, std::int64_t X);

// Midpoint-rule integral of chi over the bounding box of Kchi on a
// grid x grid mesh.
double cutoff_integral(const Cutoff& cutoff, int grid = 1000);

}  // namespace primesquare
