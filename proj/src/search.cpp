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

#include <algorithm>
#include <chrono>

#include "primesquare/error.hpp"

namespace primesquare {

const char* to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::Lexicographic: return "lex";
    case SearchStrategy::RegionStrict: return "region";
    case SearchStrategy::WAccelerated: return "wtrick";
  }
  return "?";
}

std::optional<SearchStrategy> parse_strategy(std::string_view name) {
  if (name == "lex") return SearchStrategy::Lexicographic;
  if (name == "region") return SearchStrategy::RegionStrict;
  if (name == "wtrick") return SearchStrategy::WAccelerated;
  return std::nullopt;
}

bool distinct_positive(std::int64_t q0, std::int64_t t, std::int64_t u) {
  if (q0 <= 0) return false;
  if (t > 0 && chain_check(t, u)) return true;  // forms are q0 + an increasing chain
  const auto entries = square_for(q0, t, u).entries();
  std::array<std::int64_t, 9> sorted = entries;
  std::sort(sorted.begin(), sorted.end());
  return sorted.front() > 0 && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool all_forms_prime(const FormSystem& fs, std::int64_t t, std::int64_t u) {
  auto values = evaluate_forms(fs, t, u);
  std::sort(values.begin(), values.end());
  const auto& table = PrimeTable::shared();
  for (std::int64_t v : values) {
    if (v < 2 || !table(static_cast<std::uint64_t>(v))) return false;
  }
  return true;
}

namespace {

// Calls visit(t, u) over the strategy's order until it returns true.
template <typename Visit>
void walk(SearchStrategy strategy, const WNormalization* norm, std::int64_t max_sum, Visit&& visit) {
  switch (strategy) {
    case SearchStrategy::Lexicographic:
      for (std::int64_t s = 3; s <= max_sum; ++s) {
        for (std::int64_t t = 1; 2 * t < s; ++t) {
          if (visit(t, s - t)) return;
        }
      }
      return;
    case SearchStrategy::RegionStrict:
      for (std::int64_t s = 3; s <= max_sum; ++s) {
        // 4t/3 <= s - t <= 5t/3  <=>  3s/8 <= t <= 3s/7
        for (std::int64_t t = (3 * s + 7) / 8; 7 * t <= 3 * s; ++t) {
          if (visit(t, s - t)) return;
        }
      }
      return;
    case SearchStrategy::WAccelerated: {
      // t + u = a_W + b_W + W k is increasing in k = m + n.
      const std::int64_t W = norm->W;
      for (std::int64_t k = 0; norm->a_W + norm->b_W + W * k <= max_sum; ++k) {
        for (std::int64_t m = 0; m <= k; ++m) {
          const std::int64_t t = norm->a_W + W * m;
          const std::int64_t u = norm->b_W + W * (k - m);
          if (t <= 0 || u <= t) continue;
          if (visit(t, u)) return;
        }
      }
      return;
    }
  }
}

}  // namespace

SearchOutcome find_solution(std::int64_t q0, const SearchOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const FormSystem fs = forms_for(q0);
  std::optional<WNormalization> norm;
  if (options.strategy == SearchStrategy::WAccelerated) norm = compute_w_normalization(options.w, q0);

  SearchOutcome outcome;
  // Keep t + u small enough that every entry stays far from overflow.
  const std::int64_t max_sum = kMaxQ0;
  walk(options.strategy, norm ? &*norm : nullptr, max_sum, [&](std::int64_t t, std::int64_t u) {
    if (outcome.candidates_tested >= options.budget) return true;
    if (!distinct_positive(q0, t, u)) return false;
    ++outcome.candidates_tested;
    if (!all_forms_prime(fs, t, u)) return false;
    SolutionRecord rec;
    rec.q0 = q0;
    rec.t = t;
    rec.u = u;
    rec.square = square_for(q0, t, u);
    rec.magic_constant = 3 * rec.square.center();
    rec.strategy = options.strategy;
    rec.candidates_tested = outcome.candidates_tested;
    outcome.solution = rec;
    return true;
  });
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (outcome.solution) outcome.solution->wall_time_seconds = elapsed;
  return outcome;
}

std::vector<LatticePoint> enumerate_solutions(std::int64_t q0, SearchStrategy strategy,
                                              std::int64_t max_sum, std::int64_t w) {
  const FormSystem fs = forms_for(q0);
  std::optional<WNormalization> norm;
  if (strategy == SearchStrategy::WAccelerated) norm = compute_w_normalization(w, q0);
  std::vector<LatticePoint> out;
  walk(strategy, norm ? &*norm : nullptr, max_sum, [&](std::int64_t t, std::int64_t u) {
    if (distinct_positive(q0, t, u) && all_forms_prime(fs, t, u)) out.push_back({t, u});
    return false;
  });
  return out;
}

ScanSummary scan_primes(std::int64_t q0_max, const SearchOptions& options, unsigned threads) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::int64_t> q0s;
  if (q0_max >= 5) {
    if (q0_max > (std::int64_t{1} << 31)) throw Error(ErrorKind::Resource, "scan bound too large");
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(q0_max))) {
      if (p >= 5) q0s.push_back(p);
    }
  }
  ScanSummary summary;
  summary.rows = parallel_map(q0s.size(), threads, [&](std::size_t i) {
    ScanRow row;
    row.q0 = q0s[i];
    const SearchOutcome outcome = find_solution(row.q0, options);
    row.candidates_tested = outcome.candidates_tested;
    if (outcome.solution) {
      row.found = true;
      row.t = outcome.solution->t;
      row.u = outcome.solution->u;
      row.magic_constant = outcome.solution->magic_constant;
      row.verified = verify_prime_magic(outcome.solution->square, row.q0).passed();
    }
    return row;
  });
  for (const auto& row : summary.rows) summary.found_count += row.found ? 1 : 0;
  if (!summary.rows.empty()) {
    summary.success_rate = static_cast<double>(summary.found_count) / static_cast<double>(summary.rows.size());
  }
  summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return summary;
}

std::optional<PositivityWitness> positivity_witness(std::int64_t q0, std::int64_t X,
                                                    const WNormalization& norm,
                                                    const Cutoff& cutoff) {
  if (norm.q0 != q0) throw Error(ErrorKind::InvalidArgument, "normalization built for another q0");
  if (!support_shift_check(cutoff, norm.W, norm.a_W, norm.b_W, X).ok) {
    throw Error(ErrorKind::Domain, "shifted support leaves K at this X");
  }
  const auto core = norm.core_forms();
  const auto res = norm.residual_forms();
  std::array<AffineForm, 8> forms;
  std::copy(core.begin(), core.end(), forms.begin());
  std::copy(res.begin(), res.end(), forms.begin() + 5);
  const auto& table = PrimeTable::shared();

  for (const auto& row : support_rows(cutoff, X)) {
    for (std::int64_t n = row.y_lo; n <= row.y_hi; ++n) {
      const bool all_prime = std::all_of(forms.begin(), forms.end(), [&](const AffineForm& f) {
        const std::int64_t v = f(row.x, n);
        return v >= 2 && table(static_cast<std::uint64_t>(v));
      });
      if (!all_prime) continue;
      PositivityWitness w;
      w.X = X;
      w.m = row.x;
      w.n = n;
      w.t = checked_add(norm.a_W, checked_mul(norm.W, row.x));
      w.u = checked_add(norm.b_W, checked_mul(norm.W, n));
      w.N = checked_mul(norm.W, X);
      w.in_dilation = in_region(Rational(w.t, w.N), Rational(w.u, w.N));
      w.square = square_for(q0, w.t, w.u);
      return w;
    }
  }
  return std::nullopt;
}

PositivitySearch positivity_by_doubling(std::int64_t q0, const WNormalization& norm,
                                        const Cutoff& cutoff, std::int64_t x_start,
                                        std::int64_t x_max) {
  if (x_start < 1) throw Error(ErrorKind::Domain, "doubling must start at X >= 1");
  PositivitySearch result;
  for (std::int64_t X = x_start; X <= x_max; X *= 2) {
    result.scales_tried.push_back(X);
    if (!support_shift_check(cutoff, norm.W, norm.a_W, norm.b_W, X).ok) continue;
    if (auto w = positivity_witness(q0, X, norm, cutoff)) {
      result.witness = w;
      break;
    }
  }
  return result;
}

}  // namespace primesquare
