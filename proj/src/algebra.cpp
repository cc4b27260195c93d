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

#include "primesquare/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "primesquare/error.hpp"

namespace primesquare {

std::array<__int128, 8> MagicSquare::line_sums() const {
  auto v = [this](int r, int c) { return static_cast<__int128>(at(r, c)); };
  return {
      v(0, 0) + v(0, 1) + v(0, 2), v(1, 0) + v(1, 1) + v(1, 2), v(2, 0) + v(2, 1) + v(2, 2),
      v(0, 0) + v(1, 0) + v(2, 0), v(0, 1) + v(1, 1) + v(2, 1), v(0, 2) + v(1, 2) + v(2, 2),
      v(0, 0) + v(1, 1) + v(2, 2), v(0, 2) + v(1, 1) + v(2, 0),
  };
}

bool MagicSquare::is_magic() const {
  const auto sums = line_sums();
  return std::all_of(sums.begin(), sums.end(), [&](__int128 s) { return s == sums[0]; });
}

MagicSquare square_from_center_params(std::int64_t e, std::int64_t t, std::int64_t u) {
  const std::int64_t tu = checked_add(t, u);
  const std::int64_t t_minus_u = checked_sub(t, u);
  return MagicSquare({
      checked_add(e, t), checked_sub(e, tu), checked_add(e, u),
      checked_sub(e, t_minus_u), e, checked_add(e, t_minus_u),
      checked_sub(e, u), checked_add(e, tu), checked_sub(e, t),
  });
}

ParamTriple params_from_square(const MagicSquare& sq) {
  if (!sq.is_magic()) {
    throw Error(ErrorKind::NotMagic, "square " + to_csv(sq) + " is not magic");
  }
  const std::int64_t e = sq.center();
  return {e, checked_sub(sq.at(0, 0), e), checked_sub(sq.at(0, 2), e)};
}

std::string to_csv(const MagicSquare& sq) {
  std::string out;
  for (std::size_t i = 0; i < 9; ++i) {
    if (i) out += ',';
    out += std::to_string(sq.entries()[i]);
  }
  return out;
}

MagicSquare parse_square(std::string_view csv) {
  MagicSquare::Entries entries{};
  std::size_t count = 0;
  const char* p = csv.data();
  const char* end = csv.data() + csv.size();
  while (p <= end) {
    while (p < end && *p == ' ') ++p;
    if (count == 9) throw Error(ErrorKind::InvalidArgument, "square needs exactly nine entries");
    std::int64_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc()) {
      throw Error(ErrorKind::InvalidArgument, "bad square entry in '" + std::string(csv) + "'");
    }
    entries[count++] = value;
    p = next;
    while (p < end && *p == ' ') ++p;
    if (p == end) break;
    if (*p != ',') throw Error(ErrorKind::InvalidArgument, "square entries must be comma-separated");
    ++p;
  }
  if (count != 9) throw Error(ErrorKind::InvalidArgument, "square needs exactly nine entries");
  return MagicSquare(entries);
}

FormSystem::FormSystem(std::int64_t q0)
    : q0_(q0),
      forms_{{
          {q0, 2, 1}, {q0, 1, 2}, {q0, 0, 2}, {q0, 1, 1},
          {q0, 2, 0}, {q0, 1, 0}, {q0, 2, 2}, {q0, 0, 1},
      }} {}

std::array<AffineForm, 5> FormSystem::core() const {
  std::array<AffineForm, 5> out;
  for (std::size_t k = 0; k < 5; ++k) out[k] = forms_[kCoreIndices[k]];
  return out;
}

std::array<AffineForm, 3> FormSystem::residuals() const {
  std::array<AffineForm, 3> out;
  for (std::size_t k = 0; k < 3; ++k) out[k] = forms_[kResidualIndices[k]];
  return out;
}

FormRole FormSystem::role(std::size_t index) const {
  if (index >= kForms) throw Error(ErrorKind::Domain, "form index out of range");
  return std::find(kCoreIndices.begin(), kCoreIndices.end(), index) != kCoreIndices.end()
             ? FormRole::Core
             : FormRole::Residual;
}

FormSystem forms_for(std::int64_t q0) {
  if (q0 == 2 || q0 == 3) {
    throw Error(ErrorKind::SmallObstruction,
                "q0 = " + std::to_string(q0) + " cannot appear in a magic square of distinct primes");
  }
  if (q0 > kMaxQ0) throw Error(ErrorKind::Domain, "q0 exceeds supported range");
  if (q0 < 2 || !is_prime(static_cast<std::uint64_t>(q0))) {
    throw Error(ErrorKind::NotPrime, "q0 = " + std::to_string(q0) + " is not prime");
  }
  return FormSystem(q0);
}

std::array<std::int64_t, 8> evaluate_forms(const FormSystem& fs, std::int64_t t, std::int64_t u) {
  std::array<std::int64_t, 8> out;
  for (std::size_t k = 0; k < 8; ++k) out[k] = fs.form(k)(t, u);
  return out;
}

MagicSquare square_for(std::int64_t q0, std::int64_t t, std::int64_t u) {
  return square_from_center_params(checked_add(q0, checked_add(t, u)), t, u);
}

bool proportional(Direction a, Direction b) {
  return static_cast<__int128>(a.x) * b.y == static_cast<__int128>(a.y) * b.x;
}

bool pairwise_nonproportional(std::span<const Direction> dirs) {
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      if (proportional(dirs[i], dirs[j])) return false;
    }
  }
  return true;
}

std::vector<Direction> core_directions(const FormSystem& fs) {
  std::vector<Direction> out;
  for (const auto& f : fs.core()) out.push_back({f.coeff_x, f.coeff_y});
  return out;
}

VerificationReport verify_prime_magic(const MagicSquare& sq, std::int64_t q0) {
  VerificationReport report;
  const auto& v = sq.entries();

  report.is_magic = sq.is_magic();
  if (!report.is_magic) report.failures.push_back("line sums differ");

  report.all_positive = std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x > 0; });
  if (!report.all_positive) report.failures.push_back("non-positive entry");

  report.all_prime = true;
  for (std::int64_t x : v) {
    if (x < 2 || !is_prime(static_cast<std::uint64_t>(x))) {
      report.all_prime = false;
      report.failures.push_back("entry " + std::to_string(x) + " is not prime");
    }
  }

  report.all_distinct = std::set<std::int64_t>(v.begin(), v.end()).size() == 9;
  if (!report.all_distinct) report.failures.push_back("entries repeat");

  report.contains_q0 = std::find(v.begin(), v.end(), q0) != v.end();
  if (!report.contains_q0) report.failures.push_back("q0 = " + std::to_string(q0) + " absent");
  return report;
}

}  // namespace primesquare
