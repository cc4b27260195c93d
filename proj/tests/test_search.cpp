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

#include "primesquare/search.hpp"

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "primesquare/error.hpp"

namespace primesquare {
namespace {

bool oracle_valid(std::int64_t q0, std::int64_t t, std::int64_t u) {
  const auto sq = square_for(q0, t, u);
  std::set<std::int64_t> seen;
  for (auto v : sq.entries()) {
    if (!oracle::is_prime(v)) return false;
    seen.insert(v);
  }
  return seen.size() == 9;
}

// First valid (t, u) with 0 < t < u by ascending t + u, then t.
std::optional<LatticePoint> oracle_first(std::int64_t q0, bool region) {
  for (std::int64_t s = 3; s < 100000; ++s) {
    for (std::int64_t t = 1; 2 * t < s; ++t) {
      const std::int64_t u = s - t;
      if (region && !(3 * u >= 4 * t && 3 * u <= 5 * t)) continue;
      if (oracle_valid(q0, t, u)) return LatticePoint{t, u};
    }
  }
  return std::nullopt;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

TEST(Distinctness, AgainstSort) {
  for (std::int64_t q0 : {5, 7}) {
    for (std::int64_t t = -30; t <= 30; ++t) {
      for (std::int64_t u = -30; u <= 30; ++u) {
        const auto e = square_for(q0, t, u).entries();
        const std::set<std::int64_t> s(e.begin(), e.end());
        const bool want = s.size() == 9 && *s.begin() > 0;
        ASSERT_EQ(distinct_positive(q0, t, u), want) << t << "," << u;
      }
    }
  }
}

TEST(Construct, FiveLexicographic) {
  const auto out = find_solution(5);
  ASSERT_TRUE(out.found());
  EXPECT_EQ(out.solution->t, 12);
  EXPECT_EQ(out.solution->u, 42);
  EXPECT_EQ(out.solution->square, MagicSquare({71, 5, 101, 89, 59, 29, 17, 113, 47}));
  EXPECT_EQ(out.solution->magic_constant, 177);
  EXPECT_EQ(out.solution->candidates_tested, out.candidates_tested);
}

TEST(Construct, MatchesOracleOrder) {
  for (std::int64_t q0 : {5, 7, 11, 13, 17, 19, 23, 29, 31, 101, 997}) {
    for (bool region : {false, true}) {
      SearchOptions o;
      o.strategy = region ? SearchStrategy::RegionStrict : SearchStrategy::Lexicographic;
      const auto out = find_solution(q0, o);
      const auto want = oracle_first(q0, region);
      ASSERT_TRUE(out.found()) << q0;
      ASSERT_TRUE(want);
      EXPECT_EQ(out.solution->t, want->x) << q0 << " region=" << region;
      EXPECT_EQ(out.solution->u, want->y) << q0 << " region=" << region;
      EXPECT_TRUE(verify_prime_magic(out.solution->square, q0).passed());
    }
  }
}

TEST(Construct, RegionStrictLandsInDilation) {
  for (std::int64_t q0 : {5, 7, 11, 13, 37}) {
    SearchOptions o;
    o.strategy = SearchStrategy::RegionStrict;
    const auto s = find_solution(q0, o).solution;
    ASSERT_TRUE(s);
    EXPECT_TRUE(chain_check(s->t, s->u));
    const std::int64_t N = (s->t + 1) / 2;  // any N with t/N in [1, 2]
    EXPECT_TRUE(in_region(Rational(s->t, N), Rational(s->u, N)));
  }
}

TEST(Construct, WAcceleratedClasses) {
  for (std::int64_t q0 : {5, 7, 11, 13}) {
    SearchOptions o;
    o.strategy = SearchStrategy::WAccelerated;
    const auto norm = compute_w_normalization(o.w, q0);
    const auto s = find_solution(q0, o).solution;
    ASSERT_TRUE(s) << q0;
    EXPECT_EQ(oracle::mod(s->t - norm.a_W, norm.W), 0);
    EXPECT_EQ(oracle::mod(s->u - norm.b_W, norm.W), 0);
    EXPECT_TRUE(verify_prime_magic(s->square, q0).passed());
  }
}

TEST(Construct, Errors) {
  for (auto strategy : {SearchStrategy::Lexicographic, SearchStrategy::RegionStrict,
                        SearchStrategy::WAccelerated}) {
    SearchOptions o;
    o.strategy = strategy;
    EXPECT_EQ(kind_of([&] { find_solution(2, o); }), ErrorKind::SmallObstruction);
    EXPECT_EQ(kind_of([&] { find_solution(3, o); }), ErrorKind::SmallObstruction);
  }
  EXPECT_EQ(kind_of([] { find_solution(15); }), ErrorKind::NotPrime);
}

TEST(Construct, Budget) {
  SearchOptions o;
  o.budget = 10;
  const auto out = find_solution(5, o);
  EXPECT_FALSE(out.found());
  EXPECT_EQ(out.candidates_tested, 10u);
  o.budget = find_solution(5).candidates_tested;
  EXPECT_TRUE(find_solution(5, o).found());
}

TEST(Enumerate, AgainstOracle) {
  const auto got = enumerate_solutions(5, SearchStrategy::Lexicographic, 200);
  std::vector<LatticePoint> want;
  for (std::int64_t s = 3; s <= 200; ++s) {
    for (std::int64_t t = 1; 2 * t < s; ++t) {
      if (oracle_valid(5, t, s - t)) want.push_back({t, s - t});
    }
  }
  EXPECT_EQ(got, want);
  EXPECT_FALSE(got.empty());
}

TEST(Scan, Small) {
  const auto s = scan_primes(13, {});
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_EQ(s.rows[0].q0, 5);
  EXPECT_EQ(s.rows[3].q0, 13);
  EXPECT_EQ(s.found_count, 4u);
  EXPECT_EQ(s.success_rate, 1.0);
  for (const auto& r : s.rows) EXPECT_TRUE(r.verified);
  EXPECT_TRUE(scan_primes(4, {}).rows.empty());
}

TEST(Scan, ThreadIndependent) {
  const auto a = scan_primes(300, {}, 1);
  const auto b = scan_primes(300, {}, 3);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].t, b.rows[i].t);
    EXPECT_EQ(a.rows[i].u, b.rows[i].u);
  }
}

TEST(Strategies, Names) {
  EXPECT_EQ(parse_strategy("lex"), SearchStrategy::Lexicographic);
  EXPECT_EQ(parse_strategy("region"), SearchStrategy::RegionStrict);
  EXPECT_EQ(parse_strategy("wtrick"), SearchStrategy::WAccelerated);
  EXPECT_FALSE(parse_strategy("random"));
}

TEST(Positivity, Witness) {
  const Cutoff chi;
  const auto norm = compute_w_normalization(7, 5);
  EXPECT_FALSE(positivity_witness(5, 1, norm, chi));
  const auto run = positivity_by_doubling(5, norm, chi, 1, 1 << 12);
  ASSERT_TRUE(run.witness);
  const auto& w = *run.witness;
  EXPECT_TRUE(w.in_dilation);
  EXPECT_TRUE(verify_prime_magic(w.square, 5).passed());
  EXPECT_EQ(w.t, norm.a_W + norm.W * w.m);
  EXPECT_EQ(w.X, run.scales_tried.back());
  // Nothing at the previous scale.
  if (run.scales_tried.size() > 1) {
    EXPECT_FALSE(positivity_witness(5, run.scales_tried[run.scales_tried.size() - 2], norm, chi));
  }
  EXPECT_THROW(positivity_witness(7, 64, norm, chi), Error);
}

}  // namespace
}  // namespace primesquare
