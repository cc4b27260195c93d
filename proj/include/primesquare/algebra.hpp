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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primesquare/primes.hpp"

namespace primesquare {

/// A 3x3 integer square stored row-major:
///
///     a b c
///     d e f
///     g h i
///
/// Nothing here enforces the magic property; see is_magic().
class MagicSquare {
 public:
  using Entries = std::array<std::int64_t, 9>;

  MagicSquare() = default;
  explicit MagicSquare(const Entries& entries) : entries_(entries) {}

  std::int64_t at(int row, int col) const { return entries_[static_cast<std::size_t>(3 * row + col)]; }
  std::int64_t center() const { return entries_[4]; }
  const Entries& entries() const noexcept { return entries_; }

  // Row sums, column sums, main diagonal, anti-diagonal.
  std::array<__int128, 8> line_sums() const;
  bool is_magic() const;

  // Index of the cell opposite `index` through the center (4 maps to 4).
  static constexpr int opposite(int index) { return 8 - index; }

  friend bool operator==(const MagicSquare&, const MagicSquare&) = default;

 private:
  Entries entries_{};
};

struct ParamTriple {
  std::int64_t e = 0;  // center
  std::int64_t t = 0;  // a - e
  std::int64_t u = 0;  // c - e
  friend bool operator==(const ParamTriple&, const ParamTriple&) = default;
};

// Every 3x3 integer magic square has this form, with magic constant 3e.
MagicSquare square_from_center_params(std::int64_t e, std::int64_t t, std::int64_t u);

// Inverse of square_from_center_params; throws Error{NotMagic} unless all
// eight line sums agree.
ParamTriple params_from_square(const MagicSquare& sq);

std::string to_csv(const MagicSquare& sq);
MagicSquare parse_square(std::string_view csv);

enum class FormRole { Core, Residual };

/// The eight affine forms in (t, u) obtained by pinning q0 to cell (1,2),
/// ordered L1..L8:
///
///     L1 = q0 + 2t + u    L2 = q0 + t + 2u
///     L3 = q0 + 2u        L4 = q0 + t + u
///     L5 = q0 + 2t        L6 = q0 + t
///     L7 = q0 + 2t + 2u   L8 = q0 + u
///
/// The core A1..A5 = L6, L8, L4, L1, L2 has pairwise non-proportional
/// directions. Each residual B1, B2, B3 = L5, L3, L7 equals 2*A_k - q0 for
/// k = 1, 2, 3.
class FormSystem {
 public:
  static constexpr std::size_t kForms = 8;
  static constexpr std::array<std::size_t, 5> kCoreIndices{5, 7, 3, 0, 1};
  static constexpr std::array<std::size_t, 3> kResidualIndices{4, 2, 6};

  explicit FormSystem(std::int64_t q0);

  std::int64_t q0() const noexcept { return q0_; }
  const std::array<AffineForm, kForms>& forms() const noexcept { return forms_; }
  const AffineForm& form(std::size_t index) const { return forms_.at(index); }
  std::array<AffineForm, 5> core() const;
  std::array<AffineForm, 3> residuals() const;
  FormRole role(std::size_t index) const;

 private:
  std::int64_t q0_;
  std::array<AffineForm, kForms> forms_;
};

// Largest q0 accepted by forms_for; keeps every form value of a searched
// pair far below 2^62.
inline constexpr std::int64_t kMaxQ0 = std::int64_t{1} << 40;

// Throws Error{SmallObstruction} for q0 in {2, 3} and Error{NotPrime} when q0
// is not a prime (or exceeds kMaxQ0, Error{Domain}).
FormSystem forms_for(std::int64_t q0);

std::array<std::int64_t, 8> evaluate_forms(const FormSystem& fs, std::int64_t t, std::int64_t u);

// M_{q0}(t, u): the square with q0 at (row 0, col 1) and center q0 + t + u.
MagicSquare square_for(std::int64_t q0, std::int64_t t, std::int64_t u);

struct Direction {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(const Direction&, const Direction&) = default;
};

bool proportional(Direction a, Direction b);
bool pairwise_nonproportional(std::span<const Direction> dirs);
std::vector<Direction> core_directions(const FormSystem& fs);

struct VerificationReport {
  bool is_magic = false;
  bool all_positive = false;
  bool all_prime = false;
  bool all_distinct = false;
  bool contains_q0 = false;
  std::vector<std::string> failures;

  bool passed() const noexcept {
    return is_magic && all_positive && all_prime && all_distinct && contains_q0;
  }
};

// Checks every property and records every failure, not just the first.
VerificationReport verify_prime_magic(const MagicSquare& sq, std::int64_t q0);

}  // namespace primesquare
