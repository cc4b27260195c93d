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

#include "primesquare/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "primesquare/error.hpp"

namespace primesquare {

namespace {

constexpr double kCx = 14.0 / 9.0;
constexpr double kCy = 7.0 / 3.0;

// h_i - n_i . c for each facet of K.
constexpr std::array<double, 4> kSlack{5.0 / 9.0, 4.0 / 9.0, 7.0 / 9.0, 7.0 / 9.0};

// Vertices of K, counter-clockwise.
constexpr std::array<std::array<double, 2>, 4> kVertices{{
    {1.0, 4.0 / 3.0}, {2.0, 8.0 / 3.0}, {2.0, 10.0 / 3.0}, {1.0, 5.0 / 3.0}}};

double profile(double r) {
  if (r <= 0.0) return 1.0;
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

std::int64_t floor_to_int(double v) { return static_cast<std::int64_t>(std::floor(v)); }
std::int64_t ceil_to_int(double v) { return static_cast<std::int64_t>(std::ceil(v)); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

bool in_region(const Rational& x, const Rational& y) {
  if (x < Rational(1) || x > Rational(2)) return false;
  const Rational three_y = y * Rational(3);
  return x * Rational(4) <= three_y && three_y <= x * Rational(5);
}

bool in_region(double x, double y) {
  return x >= 1.0 && x <= 2.0 && 4.0 * x <= 3.0 * y && 3.0 * y <= 5.0 * x;
}

std::vector<LatticeRow> dilation_rows(std::int64_t N) {
  if (N < 1) throw Error(ErrorKind::Domain, "dilation scale must be positive");
  std::vector<LatticeRow> rows;
  for (std::int64_t t = N; t <= 2 * N; ++t) {
    const std::int64_t lo = ceil_div(4 * t, 3);
    const std::int64_t hi = floor_div(5 * t, 3);
    if (lo <= hi) rows.push_back({t, lo, hi});
  }
  return rows;
}

std::vector<LatticePoint> enumerate_dilation(std::int64_t N) {
  std::vector<LatticePoint> out;
  for (const auto& row : dilation_rows(N)) {
    for (std::int64_t u = row.y_lo; u <= row.y_hi; ++u) out.push_back({row.x, u});
  }
  return out;
}

std::uint64_t count_dilation(std::int64_t N) {
  std::uint64_t total = 0;
  for (const auto& row : dilation_rows(N)) total += static_cast<std::uint64_t>(row.y_hi - row.y_lo + 1);
  return total;
}

bool chain_check(std::int64_t t, std::int64_t u) {
  const __int128 T = t, U = u;
  const std::array<__int128, 8> chain{T, U, 2 * T, T + U, 2 * U, U + 2 * T, 2 * U + T, 2 * U + 2 * T};
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (!(chain[k - 1] < chain[k])) return false;
  }
  return true;
}

Cutoff::Cutoff(double shrink, double support) : shrink_(shrink), support_(support) {
  if (!(shrink > 0.0 && shrink < support && support < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "cutoff requires 0 < shrink < support < 1");
  }
}

double Cutoff::gauge(double x, double y) {
  double g = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kRegionFacets.size(); ++i) {
    const auto& f = kRegionFacets[i];
    g = std::max(g, (f.nx * (x - kCx) + f.ny * (y - kCy)) / kSlack[i]);
  }
  return g;
}

double Cutoff::operator()(double x, double y) const {
  const double g = gauge(x, y);
  if (g <= shrink_) return 1.0;
  if (g >= support_) return 0.0;
  return profile((g - shrink_) / (support_ - shrink_));
}

double Cutoff::at_scale(std::int64_t m, std::int64_t n, std::int64_t X) const {
  const auto s = static_cast<double>(X);
  return (*this)(static_cast<double>(m) / s, static_cast<double>(n) / s);
}

double Cutoff::margin() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kRegionFacets.size(); ++i) {
    const auto& f = kRegionFacets[i];
    best = std::min(best, (1.0 - support_) * kSlack[i] / std::hypot(f.nx, f.ny));
  }
  return best;
}

double Cutoff::gradient_bound() const {
  // sup |profile'| by dense sampling, padded.
  double slope = 0.0;
  constexpr int kSamples = 100000;
  for (int k = 1; k < kSamples; ++k) {
    const double r = static_cast<double>(k) / kSamples;
    const double d = profile(r) * 2.0 * r / ((1.0 - r * r) * (1.0 - r * r));
    slope = std::max(slope, d);
  }
  double lipschitz = 0.0;
  for (std::size_t i = 0; i < kRegionFacets.size(); ++i) {
    const auto& f = kRegionFacets[i];
    lipschitz = std::max(lipschitz, std::hypot(f.nx, f.ny) / kSlack[i]);
  }
  return 1.01 * slope * lipschitz / (support_ - shrink_);
}

std::array<double, 4> Cutoff::support_box() const {
  std::array<double, 4> box{std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity()};
  for (const auto& v : kVertices) {
    const double x = kCx + support_ * (v[0] - kCx);
    const double y = kCy + support_ * (v[1] - kCy);
    box[0] = std::min(box[0], x);
    box[1] = std::max(box[1], x);
    box[2] = std::min(box[2], y);
    box[3] = std::max(box[3], y);
  }
  return box;
}

std::vector<LatticeRow> support_rows(const Cutoff& cutoff, std::int64_t X) {
  if (X < 1) throw Error(ErrorKind::Domain, "scale X must be positive");
  const auto box = cutoff.support_box();
  const auto scale = static_cast<double>(X);
  auto inside = [&](std::int64_t m, std::int64_t n) {
    return cutoff.in_support(static_cast<double>(m) / scale, static_cast<double>(n) / scale);
  };
  std::vector<LatticeRow> rows;
  const std::int64_t m_lo = floor_to_int(box[0] * scale) - 1;
  const std::int64_t m_hi = ceil_to_int(box[1] * scale) + 1;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double x = static_cast<double>(m) / scale;
    // The slanted facets bound y within the row; snap to the lattice and
    // settle the ends against the exact membership test.
    double y_lo = -std::numeric_limits<double>::infinity();
    double y_hi = std::numeric_limits<double>::infinity();
    bool empty = false;
    for (std::size_t i = 0; i < kRegionFacets.size(); ++i) {
      const auto& f = kRegionFacets[i];
      const double H = f.nx * kCx + f.ny * kCy + cutoff.support() * kSlack[i];
      if (f.ny == 0) {
        if (f.nx * x >= H) empty = true;
      } else if (f.ny > 0) {
        y_hi = std::min(y_hi, (H - f.nx * x) / f.ny);
      } else {
        y_lo = std::max(y_lo, (H - f.nx * x) / f.ny);
      }
    }
    if (empty || !(y_lo < y_hi)) continue;
    std::int64_t n_lo = floor_to_int(y_lo * scale);
    std::int64_t n_hi = ceil_to_int(y_hi * scale);
    while (n_lo <= n_hi && !inside(m, n_lo)) ++n_lo;
    while (n_hi >= n_lo && !inside(m, n_hi)) --n_hi;
    if (n_lo > n_hi) continue;
    while (inside(m, n_lo - 1)) --n_lo;
    while (inside(m, n_hi + 1)) ++n_hi;
    rows.push_back({m, n_lo, n_hi});
  }
  return rows;
}

std::uint64_t support_size(const std::vector<LatticeRow>& rows) {
  std::uint64_t total = 0;
  for (const auto& row : rows) total += static_cast<std::uint64_t>(row.y_hi - row.y_lo + 1);
  return total;
}

ShiftCheck support_shift_check(const Cutoff& cutoff, std::int64_t W, std::int64_t a_W,
                               std::int64_t b_W, std::int64_t X) {
  if (X < 1 || W < 1) throw Error(ErrorKind::Domain, "support_shift_check needs W, X >= 1");
  ShiftCheck result;
  result.margin = cutoff.margin();
  const double shift = std::hypot(static_cast<double>(a_W), static_cast<double>(b_W));
  result.threshold = shift == 0.0 ? 0 : ceil_to_int(shift / (static_cast<double>(W) * result.margin));

  // Rows are segments and K is convex, so the row endpoints decide.
  const std::int64_t N = checked_mul(W, X);
  result.ok = true;
  for (const auto& row : support_rows(cutoff, X)) {
    const Rational t(checked_add(a_W, checked_mul(W, row.x)), N);
    for (std::int64_t n : {row.y_lo, row.y_hi}) {
      const Rational u(checked_add(b_W, checked_mul(W, n)), N);
      if (!in_region(t, u)) {
        result.ok = false;
        return result;
      }
    }
  }
  return result;
}

double cutoff_integral(const Cutoff& cutoff, int grid) {
  if (grid < 1) throw Error(ErrorKind::Domain, "quadrature grid must be positive");
  const auto box = cutoff.support_box();
  const double hx = (box[1] - box[0]) / grid;
  const double hy = (box[3] - box[2]) / grid;
  long double total = 0.0L;
  for (int i = 0; i < grid; ++i) {
    const double x = box[0] + (i + 0.5) * hx;
    long double row = 0.0L;
    for (int j = 0; j < grid; ++j) row += cutoff(x, box[2] + (j + 0.5) * hy);
    total += row;
  }
  return static_cast<double>(total) * hx * hy;
}

}  // namespace primesquare
