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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "primesquare/error.hpp"

namespace primesquare {
namespace {

using oracle::mod;

// #{(t, u) mod p : all `forms` nonzero and, if given, `divisor` zero}.
std::uint64_t brute_count(std::span<const AffineForm> forms, std::int64_t p,
                          const AffineForm* divisor = nullptr) {
  std::uint64_t n = 0;
  for (std::int64_t t = 0; t < p; ++t) {
    for (std::int64_t u = 0; u < p; ++u) {
      bool ok = true;
      for (const auto& f : forms) ok = ok && mod(f(t, u), p) != 0;
      if (divisor) ok = ok && mod((*divisor)(t, u), p) == 0;
      n += ok;
    }
  }
  return n;
}

const std::int64_t kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 97, 101};

TEST(LocalCounts, Examples) {
  EXPECT_EQ(local_core_count(7, 5), 22u);
  for (std::int64_t q0 : {5, 7, 11, 13, 101}) EXPECT_EQ(local_core_count(2, q0), 1u);
  const auto big = static_cast<std::int64_t>(local_core_count(101, 5));
  EXPECT_LE(std::abs(big - (101 * 101 - 5 * 101)), 10);
}

TEST(LocalCounts, AgainstBruteForce) {
  for (std::int64_t q0 : {5, 7, 11, 13, 23}) {
    const FormSystem fs(q0);
    const auto core = fs.core();
    for (std::int64_t p : kSmallPrimes) {
      ASSERT_EQ(local_core_count(p, q0), brute_count(core, p)) << p << " " << q0;
      ASSERT_EQ(count_nonvanishing(fs.forms(), p), brute_count(fs.forms(), p)) << p << " " << q0;
      for (Residual star : {Residual::One, Residual::Two, Residual::Diagonal}) {
        const AffineForm div = residual_form(q0, star);
        ASSERT_EQ(count_nonvanishing_on_zero_set(core, div, p), brute_count(core, p, &div))
            << p << " " << q0;
      }
    }
  }
}

TEST(LocalCounts, NonPrimeModulus) {
  const auto core = FormSystem(5).core();
  EXPECT_THROW(count_nonvanishing(core, 9), Error);
  EXPECT_THROW(count_nonvanishing(core, 1), Error);
}

TEST(Density, Examples) {
  EXPECT_EQ(g_star(7, 5, Residual::One), Rational(3, 22));
  EXPECT_EQ(g_star(7, 5, Residual::Two), Rational(3, 22));
  for (std::int64_t p : {7, 11, 13, 101}) {
    for (Residual star : {Residual::One, Residual::Two, Residual::Diagonal}) {
      const Rational g = g_star(p, 5, star);
      const Rational mass = g * Rational(static_cast<std::int64_t>(local_core_count(p, 5)));
      EXPECT_EQ(mass.den(), 1);
    }
  }
  try {
    g_star(5, 5, Residual::One);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedPrime);
  }
  EXPECT_THROW(g_star(2, 7, Residual::Diagonal), Error);
}

TEST(Density, LawForModeratePrimes) {
  for (std::int64_t q0 : {5, 7, 11, 13}) {
    for (std::uint32_t p : primes_up_to(199)) {
      if (p < 11 || q0 % p == 0) continue;
      const Rational g1 = g_star(p, q0, Residual::One);
      EXPECT_EQ(g1, g_star(p, q0, Residual::Two));
      for (Residual star : {Residual::One, Residual::Two, Residual::Diagonal}) {
        const double dev = std::abs(p * g_star(p, q0, star).to_double() - 1.0);
        EXPECT_LE(dev, 6.0 / p) << p << " " << q0;
      }
    }
  }
}

TEST(Residuals, Names) {
  EXPECT_EQ(parse_residual("1"), Residual::One);
  EXPECT_EQ(parse_residual("2"), Residual::Two);
  EXPECT_EQ(parse_residual("delta"), Residual::Diagonal);
  EXPECT_EQ(parse_residual("diag"), Residual::Diagonal);
  EXPECT_FALSE(parse_residual("4"));
  EXPECT_STREQ(to_string(Residual::Diagonal), "delta");
  EXPECT_EQ(residual_form(5, Residual::Diagonal), (AffineForm{5, 2, 2}));
}

TEST(Admissibility, Witnesses) {
  const auto w7 = admissibility_witness(7, 5);
  ASSERT_TRUE(w7);
  EXPECT_EQ(w7->t, 0);
  EXPECT_EQ(w7->u, 0);
  const auto w5 = admissibility_witness(5, 5);
  ASSERT_TRUE(w5);
  EXPECT_EQ(w5->t, 1);
  EXPECT_EQ(w5->u, 1);
  EXPECT_EQ(std::set<std::int64_t>(w5->residues.begin(), w5->residues.end()),
            (std::set<std::int64_t>{1, 2, 3, 4}));
  EXPECT_FALSE(admissibility_witness(3, 3));
  for (std::int64_t q0 : {5, 7, 11, 13}) {
    for (std::int64_t p : kSmallPrimes) {
      const auto w = admissibility_witness(p, q0);
      ASSERT_TRUE(w) << p << " " << q0;
      for (auto v : evaluate_forms(FormSystem(q0), w->t, w->u)) ASSERT_NE(mod(v, p), 0);
    }
  }
}

TEST(WNormalization, Examples) {
  const auto a = compute_w_normalization(5, 7);
  EXPECT_EQ(a.W, 30);
  EXPECT_EQ(a.a_W, 0);
  EXPECT_EQ(a.b_W, 0);
  EXPECT_EQ(compute_w_normalization(5, 5).W, 6);
  EXPECT_EQ(compute_w_normalization(7, 5).W, 42);
  EXPECT_EQ(compute_w_normalization(7, 5).primes, (std::vector<std::int64_t>{2, 3, 7}));
  EXPECT_THROW(compute_w_normalization(1, 5), Error);
  EXPECT_THROW(compute_w_normalization(7, 3), Error);
}

TEST(WNormalization, LexicographicMinimumByBruteForce) {
  for (std::int64_t q0 : {5, 7, 11, 13}) {
    for (std::int64_t w : {2, 3, 5, 7}) {
      const auto norm = compute_w_normalization(w, q0);
      const FormSystem fs(q0);
      std::optional<std::pair<std::int64_t, std::int64_t>> want;
      for (std::int64_t a = 0; a < norm.W && !want; ++a) {
        for (std::int64_t b = 0; b < norm.W && !want; ++b) {
          bool ok = true;
          for (auto v : evaluate_forms(fs, a, b)) ok = ok && std::gcd(v, norm.W) == 1;
          if (ok) want = {{a, b}};
        }
      }
      ASSERT_TRUE(want);
      EXPECT_EQ(norm.a_W, want->first);
      EXPECT_EQ(norm.b_W, want->second);
    }
  }
}

TEST(WNormalization, FormsInMN) {
  const auto norm = compute_w_normalization(7, 11);
  const FormSystem fs(11);
  const auto core = norm.core_forms();
  const auto res = norm.residual_forms();
  for (std::int64_t m = 0; m < 5; ++m) {
    for (std::int64_t n = 0; n < 5; ++n) {
      const std::int64_t t = norm.a_W + norm.W * m, u = norm.b_W + norm.W * n;
      for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(core[j](m, n), fs.core()[j](t, u));
      for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(res[k](m, n), fs.residuals()[k](t, u));
        EXPECT_EQ(std::gcd(res[k](m, n), norm.W), 1);
      }
    }
  }
}

TEST(LocalFactors, Properties) {
  const auto norm = compute_w_normalization(7, 5);
  for (std::uint32_t p : primes_up_to(300)) {
    const auto f = local_factor(p, norm);
    EXPECT_GT(f.sigma, 0.0) << p;
    EXPECT_GT(f.beta, 0.0) << p;
  }
  const auto f = local_factor(101, norm);
  EXPECT_LE(std::abs(f.beta - 1.0), 10.0 / (101.0 * 101.0));
  // Units only for p | W.
  EXPECT_EQ(local_factor(7, norm).core_count, 49u);
  EXPECT_DOUBLE_EQ(local_factor(7, norm).sigma, std::pow(7.0 / 6.0, 5));
}

TEST(LocalFactors, FullCountOracle) {
  const auto norm = compute_w_normalization(7, 13);
  for (std::int64_t p : {5, 11, 13, 17, 19, 23}) {
    const auto core = norm.core_forms();
    const auto res = norm.residual_forms();
    std::array<AffineForm, 8> all;
    std::copy(core.begin(), core.end(), all.begin());
    std::copy(res.begin(), res.end(), all.begin() + 5);
    const auto f = local_factor(p, norm);
    EXPECT_EQ(f.core_count, brute_count(core, p));
    EXPECT_EQ(f.full_count, brute_count(all, p));
  }
}

TEST(SingularSeries, TruncationStable) {
  const auto a = singular_series(5, SeriesKind::Core, 1000, 7, 1);
  const auto b = singular_series(5, SeriesKind::Core, 10000, 7, 1);
  EXPECT_GT(a.value, 0.0);
  EXPECT_LE(std::abs(a.value / b.value - 1.0), 1e-3);
  // The tail estimate covers the observed change.
  EXPECT_LE(std::abs(std::log(a.value / b.value)), a.log_tail_bound);
  const auto r = singular_series(5, SeriesKind::Residual, 1000, 7, 1);
  EXPECT_GT(r.value, 0.0);
  EXPECT_THROW(singular_series(5, SeriesKind::Core, 5, 7, 1), Error);
}

TEST(SingularSeries, ThreadIndependent) {
  const auto a = singular_series(7, SeriesKind::Core, 3000, 7, 1);
  const auto b = singular_series(7, SeriesKind::Core, 3000, 7, 4);
  EXPECT_EQ(a.value, b.value);
}

TEST(SingularSeries, TailOfReciprocalSquares) {
  double s = 0;
  for (std::uint32_t p : primes_up_to(2000000)) {
    if (p > 1000) s += 1.0 / (static_cast<double>(p) * p);
  }
  EXPECT_GE(prime_reciprocal_square_tail(1000), s);
}

TEST(LocalTable, Rows) {
  const auto rows = local_density_table(5, 20, 7);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].p, 2);
  EXPECT_FALSE(rows[0].g1);
  EXPECT_FALSE(rows[2].g1);  // p = q0
  EXPECT_EQ(*rows[3].g1, Rational(3, 22));
  EXPECT_EQ(rows[3].core_count, 22u);
}

}  // namespace
}  // namespace primesquare
