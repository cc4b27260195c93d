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

#include "primesquare/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "primesquare/error.hpp"

namespace primesquare {

namespace {

constexpr std::uint64_t kTableCap = std::uint64_t{1} << 27;

std::array<AffineForm, 8> all_forms(const WNormalization& norm) {
  const auto core = norm.core_forms();
  const auto res = norm.residual_forms();
  std::array<AffineForm, 8> out;
  std::copy(core.begin(), core.end(), out.begin());
  std::copy(res.begin(), res.end(), out.begin() + 5);
  return out;
}

double form_weight(const WeightTable& table, WeightKind kind, std::int64_t v) {
  return v < 2 ? 0.0 : table(kind, static_cast<std::uint64_t>(v));
}

std::uint64_t table_limit(double max_value) {
  if (max_value < 2.0) return 2;
  return std::min<std::uint64_t>(kTableCap, static_cast<std::uint64_t>(max_value) + 1);
}

}  // namespace

CoreMassField CoreMassField::build(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                                   WeightKind kind, unsigned threads) {
  if (!support_shift_check(cutoff, norm.W, norm.a_W, norm.b_W, X).ok) {
    throw Error(ErrorKind::Domain, "shifted support leaves K at X = " + std::to_string(X));
  }
  CoreMassField field;
  field.norm_ = norm;
  field.cutoff_ = cutoff;
  field.X_ = X;
  field.kind_ = kind;

  const auto rows = support_rows(cutoff, X);
  field.support_points_ = support_size(rows);
  if (field.support_points_ > kLatticeBudget) {
    throw Error(ErrorKind::Resource, "lattice exceeds point budget");
  }
  const auto forms = all_forms(norm);
  for (const auto& row : rows) {
    for (const auto& f : forms) {
      for (std::int64_t n : {row.y_lo, row.y_hi}) {
        field.max_form_value_ = std::max(field.max_form_value_, static_cast<double>(f(row.x, n)));
      }
    }
  }
  const WeightTable table(table_limit(field.max_form_value_));

  struct RowResult {
    std::vector<MassPoint> points;
    std::uint64_t all_eight = 0;
  };
  const auto per_row = parallel_map(rows.size(), threads, [&](std::size_t i) {
    RowResult out;
    const auto& row = rows[i];
    for (std::int64_t n = row.y_lo; n <= row.y_hi; ++n) {
      double omega = 1.0;
      bool core_prime = true;
      for (std::size_t j = 0; j < 5 && omega != 0.0; ++j) {
        const std::int64_t v = forms[j](row.x, n);
        omega *= form_weight(table, kind, v);
        core_prime = core_prime && v >= 2 && table.prime(static_cast<std::uint64_t>(v));
      }
      if (omega == 0.0) continue;
      MassPoint p;
      p.m = row.x;
      p.n = n;
      p.chi = cutoff.at_scale(row.x, n, X);
      p.omega = omega;
      bool residual_prime = true;
      for (std::size_t k = 0; k < 3; ++k) {
        p.residual[k] = form_weight(table, WeightKind::Theta, forms[5 + k](row.x, n));
        residual_prime = residual_prime && p.residual[k] != 0.0;
      }
      if (core_prime && residual_prime) ++out.all_eight;
      out.points.push_back(p);
    }
    return out;
  });

  CompensatedSum m1, joint;
  for (const auto& r : per_row) {
    field.all_eight_points_ += r.all_eight;
    for (const auto& p : r.points) {
      const double w = p.chi * p.omega;
      m1.add(w);
      joint.add(w * p.residual[0] * p.residual[1] * p.residual[2]);
      field.points_.push_back(p);
    }
  }
  field.m1_ = m1.value();
  field.joint_ = joint.value();
  return field;
}

std::int64_t CoreMassField::key(Residual star, const MassPoint& p) {
  switch (star) {
    case Residual::One: return p.m;
    case Residual::Two: return p.n;
    case Residual::Diagonal: return p.m + p.n;
  }
  return 0;
}

std::int64_t CoreMassField::residual_value(Residual star, std::int64_t key) const {
  const auto res = norm_.residual_forms();
  switch (star) {
    case Residual::One: return res[0](key, 0);
    case Residual::Two: return res[1](0, key);
    case Residual::Diagonal: return res[2](key, 0);  // both coefficients are 2W
  }
  return 0;
}

std::vector<std::pair<std::int64_t, double>> CoreMassField::marginal(Residual star) const {
  std::map<std::int64_t, CompensatedSum> sums;
  for (const auto& p : points_) sums[key(star, p)].add(p.chi * p.omega);
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(sums.size());
  for (const auto& [k, s] : sums) out.emplace_back(k, s.value());
  return out;
}

double CoreMassField::restricted_mass(std::int64_t d, Residual star) const {
  if (!admissible_modulus(d, norm_)) {
    throw Error(ErrorKind::Domain,
                "modulus " + std::to_string(d) + " must be squarefree and coprime to 6 W q0");
  }
  // Same point order as m1(), so d = 1 reproduces M1 bit for bit.
  CompensatedSum s;
  for (const auto& p : points_) {
    if (residual_value(star, key(star, p)) % d == 0) s.add(p.chi * p.omega);
  }
  return s.value();
}

MassReport core_mass(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                     WeightKind kind, const MassOptions& options) {
  const auto field = CoreMassField::build(norm, cutoff, X, kind, options.threads);
  MassReport r;
  r.X = X;
  r.kind = kind;
  r.m1 = field.m1();
  r.joint = field.joint();
  r.support_points = field.support_points();
  r.core_prime_points = field.core_prime_points();
  r.all_eight_points = field.all_eight_points();
  r.ratio = r.m1 / (static_cast<double>(X) * static_cast<double>(X));
  if (options.predict) {
    r.singular_core =
        singular_series(norm.q0, SeriesKind::Core, options.series_cutoff, norm.w, options.threads).value;
    r.cutoff_integral = cutoff_integral(cutoff, options.quadrature_grid);
    r.c_pred = r.singular_core * r.cutoff_integral;
  }
  return r;
}

double joint_functional(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                        unsigned threads) {
  return CoreMassField::build(norm, cutoff, X, WeightKind::Theta, threads).joint();
}

double restricted_mass(const WNormalization& norm, const Cutoff& cutoff, std::int64_t X,
                       std::int64_t d, Residual star, unsigned threads) {
  if (!admissible_modulus(d, norm)) {
    throw Error(ErrorKind::Domain,
                "modulus " + std::to_string(d) + " must be squarefree and coprime to 6 W q0");
  }
  return CoreMassField::build(norm, cutoff, X, WeightKind::Theta, threads).restricted_mass(d, star);
}

bool is_squarefree(std::int64_t d) {
  if (d < 1) return false;
  for (std::int64_t p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    d /= p;
    if (d % p == 0) return false;
  }
  return true;
}

int moebius(std::int64_t d) {
  if (d < 1) throw Error(ErrorKind::Domain, "moebius needs d >= 1");
  int sign = 1;
  for (std::int64_t p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    d /= p;
    if (d % p == 0) return 0;
    sign = -sign;
  }
  return d > 1 ? -sign : sign;
}

bool admissible_modulus(std::int64_t d, const WNormalization& norm) {
  if (!is_squarefree(d)) return false;
  const std::int64_t bad = checked_mul(checked_mul(6, norm.W), norm.q0);
  return std::gcd(d, bad) == 1;
}

double g_star_multiplicative(std::int64_t d, std::int64_t q0, Residual star) {
  if (!is_squarefree(d)) throw Error(ErrorKind::Domain, "g(d) needs squarefree d");
  double g = 1.0;
  for (std::int64_t p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    g *= g_star(p, q0, star).to_double();
    d /= p;
  }
  if (d > 1) g *= g_star(d, q0, star).to_double();
  return g;
}

DiscrepancyReport discrepancy_sum(const CoreMassField& field, double delta, Residual star) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::Domain, "delta must lie in (0, 1)");
  DiscrepancyReport report;
  report.X = field.X();
  report.delta = delta;
  report.star = star;
  report.m1 = field.m1();
  report.level = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(field.X()), delta)));

  CompensatedSum abs_sum, unit_sum, mu_sum;
  for (std::int64_t d = 1; d <= report.level; ++d) {
    if (!admissible_modulus(d, field.normalization())) continue;
    DiscrepancyRow row;
    row.d = d;
    row.mu = moebius(d);
    row.restricted = field.restricted_mass(d, star);
    row.density = g_star_multiplicative(d, field.normalization().q0, star);
    row.predicted = row.density * report.m1;
    row.error = d == 1 ? 0.0 : row.restricted - row.predicted;  // A_1 = M1 exactly
    abs_sum.add(std::abs(row.error));
    unit_sum.add(row.error);
    mu_sum.add(row.mu * row.error);
    report.rows.push_back(row);
  }
  report.sum_abs = abs_sum.value();
  report.sum_unit = unit_sum.value();
  report.sum_moebius = mu_sum.value();
  return report;
}

Direction diagonal_transform(Direction d) { return {d.y, d.x - d.y}; }

DirectionCheck diagonal_direction_check(std::int64_t q0) {
  DirectionCheck check;
  for (const auto& dir : core_directions(FormSystem(q0))) {
    check.directions.push_back(diagonal_transform(dir));
  }
  const std::vector<Direction> expected{{0, 1}, {1, -1}, {1, 0}, {1, 1}, {2, -1}};
  check.matches_expected = check.directions == expected;
  check.nonproportional = pairwise_nonproportional(check.directions);
  return check;
}

DiagonalReport diagonal_mass_check(const CoreMassField& field) {
  DiagonalReport report;
  report.X = field.X();
  report.m1 = field.m1();
  report.support_rowwise = field.support_points();
  report.mass_points_rowwise = field.core_prime_points();

  const auto rows = support_rows(field.cutoff(), field.X());
  if (rows.empty()) {
    report.within_tolerance = report.m1 == 0.0;
    report.counts_equal = report.mass_points_rowwise == 0 && report.support_rowwise == 0;
    return report;
  }
  const std::int64_t s_min = rows.front().x;
  const std::int64_t s_max = rows.back().x;
  std::vector<const LatticeRow*> by_s(static_cast<std::size_t>(s_max - s_min + 1), nullptr);
  std::int64_t r_min = INT64_MAX, r_max = INT64_MIN;
  for (const auto& row : rows) {
    by_s[static_cast<std::size_t>(row.x - s_min)] = &row;
    r_min = std::min(r_min, row.x + row.y_lo);
    r_max = std::max(r_max, row.x + row.y_hi);
  }

  // A(m, n) = c + a m + b n becomes c + b r + (a - b) s under m = s, n = r - s.
  std::array<AffineForm, 5> diag_forms;
  const auto core = field.normalization().core_forms();
  for (std::size_t j = 0; j < 5; ++j) {
    diag_forms[j] = {core[j].constant, core[j].coeff_y, core[j].coeff_x - core[j].coeff_y};
  }
  const WeightTable table(table_limit(field.max_form_value()));

  CompensatedSum total;
  for (std::int64_t r = r_min; r <= r_max; ++r) {
    CompensatedSum s_delta;
    for (std::int64_t s = s_min; s <= s_max; ++s) {
      const LatticeRow* row = by_s[static_cast<std::size_t>(s - s_min)];
      const std::int64_t n = r - s;
      if (!row || n < row->y_lo || n > row->y_hi) continue;
      ++report.support_diagonal;
      double omega = 1.0;
      for (std::size_t j = 0; j < 5 && omega != 0.0; ++j) {
        omega *= form_weight(table, field.kind(), diag_forms[j](r, s));
      }
      if (omega == 0.0) continue;
      ++report.mass_points_diagonal;
      s_delta.add(field.cutoff().at_scale(s, n, field.X()) * omega);
    }
    total.add(s_delta.value());
  }
  report.diagonal_total = total.value();
  const double scale = std::max(std::abs(report.m1), std::abs(report.diagonal_total));
  report.relative_error = scale == 0.0 ? 0.0 : std::abs(report.m1 - report.diagonal_total) / scale;
  report.within_tolerance = report.relative_error <= kDiagonalTolerance;
  report.counts_equal = report.support_diagonal == report.support_rowwise &&
                        report.mass_points_diagonal == report.mass_points_rowwise;
  return report;
}

double bdh_window(double n, std::int64_t X) {
  const double half = 0.5 * static_cast<double>(X);
  const double r = std::abs(n - 3.0 * half) / half;
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

VarianceReport bdh_variance(std::int64_t X, std::int64_t Q, unsigned threads) {
  if (X < 2 || Q < 1 || Q > X) throw Error(ErrorKind::Domain, "bdh_variance needs 1 <= Q <= X, X >= 2");
  if (X > (std::int64_t{1} << 30)) throw Error(ErrorKind::Resource, "X beyond sieve budget");
  const WeightTable table(static_cast<std::uint64_t>(2 * X));
  const auto width = static_cast<std::size_t>(X + 1);  // n in [X, 2X]
  std::vector<double> window(width), weighted(width);
  CompensatedSum mass;
  for (std::size_t i = 0; i < width; ++i) {
    const auto n = static_cast<std::uint64_t>(X) + i;
    window[i] = bdh_window(static_cast<double>(n), X);
    weighted[i] = table.lambda(n) * window[i];
    mass.add(window[i]);
  }

  VarianceReport report;
  report.X = X;
  report.Q = Q;
  report.window_mass = mass.value();
  report.per_modulus = parallel_map(static_cast<std::size_t>(Q), threads, [&](std::size_t idx) {
    const auto q = static_cast<std::int64_t>(idx + 1);
    std::vector<CompensatedSum> prime_sum(static_cast<std::size_t>(q)), window_sum(static_cast<std::size_t>(q));
    std::int64_t a = X % q;
    for (std::size_t i = 0; i < width; ++i) {
      prime_sum[static_cast<std::size_t>(a)].add(weighted[i]);
      window_sum[static_cast<std::size_t>(a)].add(window[i]);
      if (++a == q) a = 0;
    }
    CompensatedSum coprime_window;
    std::int64_t phi = 0;
    for (std::int64_t b = 0; b < q; ++b) {
      if (std::gcd(b, q) != 1) continue;
      ++phi;
      coprime_window.add(window_sum[static_cast<std::size_t>(b)].value());
    }
    const double expected = coprime_window.value() / static_cast<double>(phi);
    CompensatedSum v;
    for (std::int64_t b = 0; b < q; ++b) {
      if (std::gcd(b, q) != 1) continue;
      const double diff = prime_sum[static_cast<std::size_t>(b)].value() - expected;
      v.add(diff * diff);
    }
    return v.value();
  });
  report.variance = compensated_total(report.per_modulus);
  const double log_x = std::log(static_cast<double>(X));
  const double norm = report.normalized();
  report.log_power = norm > 0.0 ? std::log(norm) / std::log(log_x) : -INFINITY;
  return report;
}

std::uint64_t prime_power_scan(const AffineForm& form, const Cutoff& cutoff, std::int64_t X) {
  if (X < 1) return 0;
  const auto rows = support_rows(cutoff, X);
  return prime_power_scan(form, std::span<const LatticeRow>(rows));
}

double loglog_slope(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw Error(ErrorKind::Domain, "slope needs at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : samples) {
    if (x <= 0.0 || y <= 0.0) throw Error(ErrorKind::Domain, "log-log slope needs positive samples");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(samples.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace primesquare
