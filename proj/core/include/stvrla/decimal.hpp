/*
 * Copyright 2026 The stvrla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STVRLA_DECIMAL_HPP_
#define STVRLA_DECIMAL_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace stvrla {

/// Exact fixed-point decimal with nine fractional digits.
///
/// Ballot weights, transfer values and tallies are all carried in this type
/// so that sums are independent of summation order. A coarser working
/// precision P (the number of decimals transfer values are truncated to) is
/// applied explicitly with truncated(); the internal scale only bounds P.
class Decimal {
 public:
  static constexpr int kMaxPrecision = 9;
  static constexpr std::int64_t kScale = 1'000'000'000;

  constexpr Decimal() = default;

  static constexpr Decimal from_raw(std::int64_t raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t v) { return from_raw(v * kScale); }

  /// Parses "12", "-0.396", "1e-3" is rejected. Throws std::invalid_argument
  /// on malformed text or more than kMaxPrecision decimals.
  static Decimal parse(std::string_view text);

  /// trunc_P(num / den) toward zero. den must be non-zero.
  static Decimal ratio_truncated(Decimal num, Decimal den, int precision);

  /// Nearest representable value below (toward negative infinity) num/den.
  static Decimal ratio_floor(std::int64_t num, std::int64_t den);

  constexpr std::int64_t raw() const { return raw_; }

  /// Drops digits beyond `precision` decimals, rounding toward zero.
  Decimal truncated(int precision) const;

  /// True iff the value has no non-zero digits past `precision` decimals.
  bool representable_at(int precision) const;

  bool is_integer() const { return raw_ % kScale == 0; }

  double to_double() const { return static_cast<double>(raw_) / kScale; }

  /// Fixed rendering with exactly `places` decimals (truncating).
  std::string to_string(int places) const;
  /// Shortest exact rendering ("0.396", "308", "201.96").
  std::string to_string() const;

  constexpr Decimal operator-() const { return from_raw(-raw_); }
  constexpr Decimal& operator+=(Decimal o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Decimal& operator-=(Decimal o) {
    raw_ -= o.raw_;
    return *this;
  }
  friend constexpr Decimal operator+(Decimal a, Decimal b) { return a += b; }
  friend constexpr Decimal operator-(Decimal a, Decimal b) { return a -= b; }
  friend constexpr Decimal operator*(Decimal a, std::int64_t k) { return from_raw(a.raw_ * k); }
  friend constexpr Decimal operator*(std::int64_t k, Decimal a) { return from_raw(a.raw_ * k); }

  /// Product truncated toward zero at the internal scale.
  friend Decimal operator*(Decimal a, Decimal b);

  friend constexpr auto operator<=>(Decimal, Decimal) = default;
  friend constexpr bool operator==(Decimal, Decimal) = default;

 private:
  std::int64_t raw_ = 0;
};

/// Sign of (a*b - c*d), computed without rounding.
int compare_products(Decimal a, Decimal b, Decimal c, Decimal d);

/// Ballot value under re-weighting; always in [0, 1].
using BallotWeight = Decimal;

}  // namespace stvrla

#endif  // STVRLA_DECIMAL_HPP_
