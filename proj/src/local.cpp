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

#include "primesquare/local.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "primesquare/error.hpp"

namespace primesquare {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  // p prime, a a unit: a^(p-2).
  __int128 result = 1, base = mod(a, p);
  for (std::int64_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::int64_t>(result);
}

void require_prime(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(ErrorKind::Domain, "modulus " + std::to_string(p) + " is not prime");
  }
}

// A form reduced mod p, viewed as a function of y for each fixed x.
struct ReducedForm {
  std::int64_t c, a, b, b_inv;

  ReducedForm(const AffineForm& f, std::int64_t p)
      : c(mod(f.constant, p)), a(mod(f.coeff_x, p)), b(mod(f.coeff_y, p)),
        b_inv(b == 0 ? 0 : inverse_mod(b, p)) {}

  std::int64_t at_row(std::int64_t x, std::int64_t p) const { return (c + a * x) % p; }
};

// Zeros of the forms along row x: returns false if some form vanishes on the
// whole row, otherwise fills `roots` with the distinct killed y values.
bool row_roots(std::span<const ReducedForm> forms, std::int64_t x, std::int64_t p,
               std::vector<std::int64_t>& roots) {
  roots.clear();
  for (const auto& f : forms) {
    const std::int64_t k = f.at_row(x, p);
    if (f.b == 0) {
      if (k == 0) return false;
      continue;
    }
    roots.push_back(static_cast<std::int64_t>(static_cast<__int128>(p - k) % p * f.b_inv % p));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return true;
}

std::vector<ReducedForm> reduce_all(std::span<const AffineForm> forms, std::int64_t p) {
  std::vector<ReducedForm> out;
  out.reserve(forms.size());
  for (const auto& f : forms) out.emplace_back(f, p);
  return out;
}

AffineForm substitute(const AffineForm& f, const WNormalization& norm) {
  return {f(norm.a_W, norm.b_W), checked_mul(norm.W, f.coeff_x), checked_mul(norm.W, f.coeff_y)};
}

}  // namespace

std::array<AffineForm, 5> WNormalization::core_forms() const {
  const auto core = FormSystem(q0).core();
  std::array<AffineForm, 5> out;
  for (std::size_t k = 0; k < 5; ++k) out[k] = substitute(core[k], *this);
  return out;
}

std::array<AffineForm, 3> WNormalization::residual_forms() const {
  const auto res = FormSystem(q0).residuals();
  std::array<AffineForm, 3> out;
  for (std::size_t k = 0; k < 3; ++k) out[k] = substitute(res[k], *this);
  return out;
}

std::uint64_t count_nonvanishing(std::span<const AffineForm> forms, std::int64_t p) {
  require_prime(p);
  const auto reduced = reduce_all(forms, p);
  std::vector<std::int64_t> roots;
  std::uint64_t total = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    if (row_roots(reduced, x, p, roots)) total += static_cast<std::uint64_t>(p) - roots.size();
  }
  return total;
}

std::uint64_t count_nonvanishing_on_zero_set(std::span<const AffineForm> forms,
                                             const AffineForm& divisor, std::int64_t p) {
  require_prime(p);
  const auto reduced = reduce_all(forms, p);
  const ReducedForm d(divisor, p);
  std::vector<std::int64_t> roots;
  std::uint64_t total = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    if (!row_roots(reduced, x, p, roots)) continue;
    const std::int64_t k = d.at_row(x, p);
    if (d.b == 0) {
      if (k == 0) total += static_cast<std::uint64_t>(p) - roots.size();
      continue;
    }
    const auto y = static_cast<std::int64_t>(static_cast<__int128>(p - k) % p * d.b_inv % p);
    if (!std::binary_search(roots.begin(), roots.end(), y)) ++total;
  }
  return total;
}

WNormalization compute_w_normalization(std::int64_t w, std::int64_t q0) {
  const FormSystem fs = forms_for(q0);
  if (w < 2) throw Error(ErrorKind::Domain, "w must be at least 2");
  if (w > 1000) throw Error(ErrorKind::Domain, "w is too large for a 64-bit modulus");

  WNormalization norm;
  norm.w = w;
  norm.q0 = q0;
  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(w))) {
    if (p == q0) continue;
    norm.primes.push_back(p);
    norm.W = checked_mul(norm.W, p);
  }

  // admissible[k][t * p + u]: all eight forms are units at (t, u) mod p_k.
  std::vector<std::vector<std::uint8_t>> admissible;
  std::vector<std::vector<std::uint8_t>> row_ok;
  for (std::int64_t p : norm.primes) {
    std::vector<std::uint8_t> table(static_cast<std::size_t>(p * p), 0);
    std::vector<std::uint8_t> rows(static_cast<std::size_t>(p), 0);
    for (std::int64_t t = 0; t < p; ++t) {
      for (std::int64_t u = 0; u < p; ++u) {
        bool ok = true;
        for (const auto& f : fs.forms()) ok = ok && mod(f(t, u), p) != 0;
        table[static_cast<std::size_t>(t * p + u)] = ok;
        rows[static_cast<std::size_t>(t)] |= ok;
      }
    }
    admissible.push_back(std::move(table));
    row_ok.push_back(std::move(rows));
  }

  // Lexicographic minimum over (Z/W)^2; by the Chinese remainder theorem a
  // pair mod W is admissible iff each reduction mod p is.
  auto a_ok = [&](std::int64_t a) {
    for (std::size_t k = 0; k < norm.primes.size(); ++k) {
      if (!row_ok[k][static_cast<std::size_t>(a % norm.primes[k])]) return false;
    }
    return true;
  };
  auto pair_ok = [&](std::int64_t a, std::int64_t b) {
    for (std::size_t k = 0; k < norm.primes.size(); ++k) {
      const std::int64_t p = norm.primes[k];
      if (!admissible[k][static_cast<std::size_t>((a % p) * p + b % p)]) return false;
    }
    return true;
  };
  for (std::int64_t a = 0; a < norm.W; ++a) {
    if (!a_ok(a)) continue;
    for (std::int64_t b = 0; b < norm.W; ++b) {
      if (pair_ok(a, b)) {
        norm.a_W = a;
        norm.b_W = b;
        return norm;
      }
    }
  }
  throw Error(ErrorKind::Domain, "no admissible residue pair modulo W");
}

std::optional<AdmissibilityWitness> admissibility_witness(std::int64_t p, std::int64_t q0) {
  require_prime(p);
  const FormSystem fs(q0);
  auto residues_at = [&](std::int64_t t, std::int64_t u) -> std::optional<AdmissibilityWitness> {
    std::set<std::int64_t> values;
    for (const auto& f : fs.forms()) {
      const std::int64_t r = mod(f(t, u), p);
      if (r == 0) return std::nullopt;
      values.insert(r);
    }
    return AdmissibilityWitness{t, u, {values.begin(), values.end()}};
  };
  const std::int64_t start = (p == q0) ? 1 : 0;
  if (auto w = residues_at(start, start)) return w;
  for (std::int64_t t = 0; t < p; ++t) {
    for (std::int64_t u = 0; u < p; ++u) {
      if (auto w = residues_at(t, u)) return w;
    }
  }
  return std::nullopt;
}

std::uint64_t local_core_count(std::int64_t p, std::int64_t q0) {
  const auto core = FormSystem(q0).core();
  return count_nonvanishing(core, p);
}

const char* to_string(Residual star) {
  switch (star) {
    case Residual::One: return "1";
    case Residual::Two: return "2";
    case Residual::Diagonal: return "delta";
  }
  return "?";
}

std::optional<Residual> parse_residual(std::string_view name) {
  if (name == "1") return Residual::One;
  if (name == "2") return Residual::Two;
  if (name == "delta" || name == "diag" || name == "3") return Residual::Diagonal;
  return std::nullopt;
}

AffineForm residual_form(std::int64_t q0, Residual star) {
  switch (star) {
    case Residual::One: return {q0, 2, 0};
    case Residual::Two: return {q0, 0, 2};
    case Residual::Diagonal: return {q0, 2, 2};
  }
  return {};
}

Rational g_star(std::int64_t p, std::int64_t q0, Residual star) {
  require_prime(p);
  if (p == 2 || q0 % p == 0) {
    throw Error(ErrorKind::UnsupportedPrime,
                "g_star undefined at p = " + std::to_string(p) + " (divides 2 q0)");
  }
  const auto core = FormSystem(q0).core();
  const std::uint64_t den = count_nonvanishing(core, p);
  const std::uint64_t num = count_nonvanishing_on_zero_set(core, residual_form(q0, star), p);
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

LocalFactor local_factor(std::int64_t p, const WNormalization& norm) {
  const auto core = norm.core_forms();
  const auto res = norm.residual_forms();
  std::array<AffineForm, 8> all;
  std::copy(core.begin(), core.end(), all.begin());
  std::copy(res.begin(), res.end(), all.begin() + 5);

  LocalFactor f;
  f.p = p;
  f.core_count = count_nonvanishing(core, p);
  f.full_count = count_nonvanishing(all, p);
  const double pd = static_cast<double>(p);
  const double unit = 1.0 - 1.0 / pd;
  f.sigma = static_cast<double>(f.core_count) / (pd * pd) / std::pow(unit, 5);
  f.beta = f.core_count == 0
               ? 0.0
               : static_cast<double>(f.full_count) / static_cast<double>(f.core_count) / std::pow(unit, 3);
  return f;
}

double prime_reciprocal_square_tail(std::int64_t P) {
  // Primes above max(P, 2) are odd: sum_{odd n > P} n^-2 <= 1 / (2 (P - 1)).
  const double base = static_cast<double>(std::max<std::int64_t>(P, 2));
  return 1.0 / (2.0 * (base - 1.0));
}

SingularSeries singular_series(std::int64_t q0, SeriesKind kind, std::int64_t P, std::int64_t w,
                               unsigned threads) {
  if (P < w) throw Error(ErrorKind::Domain, "series cutoff P must be at least w");
  if (P > (std::int64_t{1} << 31)) throw Error(ErrorKind::Resource, "series cutoff too large");
  const WNormalization norm = compute_w_normalization(w, q0);
  const auto primes = primes_up_to(static_cast<std::uint32_t>(P));

  SingularSeries s;
  s.kind = kind;
  s.cutoff = P;
  s.factors = parallel_map(primes.size(), threads,
                           [&](std::size_t i) { return local_factor(primes[i], norm); });

  CompensatedSum log_sum;
  const std::int64_t asymptotic_from = std::max<std::int64_t>({w, q0, 7});
  for (const auto& f : s.factors) {
    const double factor = kind == SeriesKind::Core ? f.sigma : f.beta;
    const double lf = std::log(factor);
    log_sum.add(lf);
    if (f.p > asymptotic_from) {
      const double pd = static_cast<double>(f.p);
      s.tail_constant = std::max(s.tail_constant, pd * pd * std::abs(lf));
    }
  }
  s.value = std::exp(log_sum.value());
  s.log_tail_bound = s.tail_constant * prime_reciprocal_square_tail(P);
  return s;
}

std::vector<LocalDensityRow> local_density_table(std::int64_t q0, std::int64_t p_max, std::int64_t w) {
  const WNormalization norm = compute_w_normalization(w, q0);
  if (p_max > (std::int64_t{1} << 20)) throw Error(ErrorKind::Resource, "p_max too large");
  std::vector<LocalDensityRow> rows;
  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(std::max<std::int64_t>(p_max, 0)))) {
    LocalDensityRow row;
    row.p = p;
    row.core_count = local_core_count(p, q0);
    if (p != 2 && q0 % p != 0) {
      row.g1 = g_star(p, q0, Residual::One);
      row.g2 = g_star(p, q0, Residual::Two);
      row.g_diag = g_star(p, q0, Residual::Diagonal);
    }
    const auto f = local_factor(p, norm);
    row.sigma = f.sigma;
    row.beta = f.beta;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace primesquare
