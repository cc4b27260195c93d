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
#include <string_view>
#include <vector>

#include "primesquare/algebra.hpp"
#include "primesquare/geometry.hpp"
#include "primesquare/local.hpp"
#include "primesquare/parallel.hpp"

namespace primesquare {

// All strategies walk pairs in ascending magic constant (t + u), then
// ascending t.
//   Lexicographic: every 0 < t < u.
//   RegionStrict:  4t/3 <= u <= 5t/3, i.e. (t, u) in some dilation NK.
//   WAccelerated:  t = a_W + W m, u = b_W + W n with m, n >= 0, 0 < t < u.
enum class SearchStrategy { Lexicographic, RegionStrict, WAccelerated };

const char* to_string(SearchStrategy s);
std::optional<SearchStrategy> parse_strategy(std::string_view name);

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct SearchOptions {
  SearchStrategy strategy = SearchStrategy::Lexicographic;
  std::uint64_t budget = kDefaultBudget;  // candidates, not time
  std::int64_t w = kDefaultW;             // WAccelerated only
};

struct SolutionRecord {
  std::int64_t q0 = 0;
  std::int64_t t = 0;
  std::int64_t u = 0;
  MagicSquare square;
  std::int64_t magic_constant = 0;
  SearchStrategy strategy = SearchStrategy::Lexicographic;
  std::uint64_t candidates_tested = 0;
  double wall_time_seconds = 0.0;
};

struct SearchOutcome {
  std::optional<SolutionRecord> solution;
  std::uint64_t candidates_tested = 0;
  bool found() const noexcept { return solution.has_value(); }
};

// The nine entries of M_{q0}(t, u) are pairwise distinct and positive.
bool distinct_positive(std::int64_t q0, std::int64_t t, std::int64_t u);

// Whether all eight forms are prime at (t, u), testing the smallest value
// first.
bool all_forms_prime(const FormSystem& fs, std::int64_t t, std::int64_t u);

// First solution in the strategy's order. A candidate is a pair that passed
// the distinctness filter and reached primality testing. Throws the
// forms_for errors for invalid q0 (SmallObstruction for 2 and 3).
SearchOutcome find_solution(std::int64_t q0, const SearchOptions& options = {});

// Every (t, u) with t + u <= max_sum accepted by the strategy whose square
// verifies, in the strategy's order.
std::vector<LatticePoint> enumerate_solutions(std::int64_t q0, SearchStrategy strategy,
                                              std::int64_t max_sum, std::int64_t w = kDefaultW);

struct ScanRow {
  std::int64_t q0 = 0;
  bool found = false;
  std::int64_t t = 0;
  std::int64_t u = 0;
  std::int64_t magic_constant = 0;
  std::uint64_t candidates_tested = 0;
  bool verified = false;
};

struct ScanSummary {
  std::vector<ScanRow> rows;
  std::size_t found_count = 0;
  double success_rate = 0.0;  // 0 when there are no rows
  double wall_time_seconds = 0.0;
};

// One row per prime 5 <= q0 <= q0_max.
ScanSummary scan_primes(std::int64_t q0_max, const SearchOptions& options,
                        unsigned threads = default_threads());

struct PositivityWitness {
  std::int64_t X = 0;
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t t = 0;
  std::int64_t u = 0;
  std::int64_t N = 0;  // W X
  bool in_dilation = false;  // (t/N, u/N) in K
  MagicSquare square;
};

// First (m, n) in R_X (ascending m, then n) at which all eight normalized
// forms are prime. Throws Error{Domain} if the shifted support leaves K.
std::optional<PositivityWitness> positivity_witness(std::int64_t q0, std::int64_t X,
                                                    const WNormalization& norm,
                                                    const Cutoff& cutoff);

struct PositivitySearch {
  std::optional<PositivityWitness> witness;
  std::vector<std::int64_t> scales_tried;
};

// X = x_start, 2 x_start, 4 x_start, ... while X <= x_max.
PositivitySearch positivity_by_doubling(std::int64_t q0, const WNormalization& norm,
                                        const Cutoff& cutoff, std::int64_t x_start,
                                        std::int64_t x_max);

}  // namespace primesquare
