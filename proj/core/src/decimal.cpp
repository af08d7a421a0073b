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

#include "stvrla/decimal.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace stvrla {

namespace {

using i128 = __int128;

constexpr std::int64_t pow10(int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

void check_precision(int precision) {
  if (precision < 0 || precision > Decimal::kMaxPrecision)
    throw std::invalid_argument("decimal precision must lie in [0, 9]");
}

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("decimal overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t end = text.size();
  while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  text = text.substr(i, end - i);
  if (text.empty()) throw std::invalid_argument("empty decimal");

  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  i128 whole = 0;
  i128 frac = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed decimal: " + std::string(text));
    seen_digit = true;
    if (seen_point) {
      if (++frac_digits > kMaxPrecision) {
        if (c != '0') throw std::invalid_argument("too many decimals: " + std::string(text));
        continue;
      }
      frac = frac * 10 + (c - '0');
    } else {
      whole = whole * 10 + (c - '0');
      if (whole > std::numeric_limits<std::int64_t>::max() / kScale)
        throw std::overflow_error("decimal overflow: " + std::string(text));
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal: " + std::string(text));
  if (frac_digits > kMaxPrecision) frac_digits = kMaxPrecision;
  i128 raw = whole * kScale + frac * pow10(kMaxPrecision - frac_digits);
  return from_raw(narrow(negative ? -raw : raw));
}

Decimal Decimal::ratio_truncated(Decimal num, Decimal den, int precision) {
  check_precision(precision);
  if (den.raw_ == 0) throw std::domain_error("division by zero");
  // C++ integer division truncates toward zero.
  i128 q = static_cast<i128>(num.raw_) * kScale / den.raw_;
  return from_raw(narrow(q)).truncated(precision);
}

Decimal Decimal::ratio_floor(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("division by zero");
  i128 n = static_cast<i128>(num) * kScale;
  i128 q = n / den;
  if ((n % den != 0) && ((n < 0) != (den < 0))) --q;
  return from_raw(narrow(q));
}

Decimal Decimal::truncated(int precision) const {
  check_precision(precision);
  const std::int64_t unit = pow10(kMaxPrecision - precision);
  return from_raw(raw_ / unit * unit);
}

bool Decimal::representable_at(int precision) const {
  check_precision(precision);
  return raw_ % pow10(kMaxPrecision - precision) == 0;
}

std::string Decimal::to_string(int places) const {
  check_precision(places);
  const Decimal t = truncated(places);
  std::int64_t v = t.raw_;
  std::string out;
  if (v < 0) {
    out.push_back('-');
    v = -v;
  }
  out += std::to_string(v / kScale);
  if (places > 0) {
    std::string frac = std::to_string(v % kScale);
    frac.insert(0, static_cast<std::size_t>(kMaxPrecision) - frac.size(), '0');
    out.push_back('.');
    out += frac.substr(0, static_cast<std::size_t>(places));
  }
  return out;
}

std::string Decimal::to_string() const {
  int places = kMaxPrecision;
  while (places > 0 && representable_at(places - 1)) --places;
  return to_string(places);
}

Decimal operator*(Decimal a, Decimal b) {
  i128 p = static_cast<i128>(a.raw()) * b.raw() / Decimal::kScale;
  return Decimal::from_raw(narrow(p));
}

int compare_products(Decimal a, Decimal b, Decimal c, Decimal d) {
  const i128 lhs = static_cast<i128>(a.raw()) * b.raw();
  const i128 rhs = static_cast<i128>(c.raw()) * d.raw();
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace stvrla
