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

#ifndef STVRLA_ASSERTION_HPP_
#define STVRLA_ASSERTION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stvrla/decimal.hpp"
#include "stvrla/election.hpp"

namespace stvrla {

enum class AssertionKind { IQ, UT, LT, AGStar, NLStar, IQX };

std::string_view to_string(AssertionKind kind);
std::optional<AssertionKind> parse_assertion_kind(std::string_view text);

/// Lower and upper transfer-value bounds for winners W assumed seated on
/// first preferences. Both maps share the key set W.
struct TransferBounds {
  std::map<CandidateId, Decimal> lower;
  std::map<CandidateId, Decimal> upper;

  CandidateSet domain() const {
    CandidateSet s;
    for (const auto& [c, v] : lower) s.insert(c);
    return s;
  }
  bool empty() const { return lower.empty(); }

  /// Throws std::invalid_argument unless keys match and 0 <= lower < upper <= tau_max.
  void validate(int seats) const;

  friend auto operator<=>(const TransferBounds&, const TransferBounds&) = default;
  friend bool operator==(const TransferBounds&, const TransferBounds&) = default;
};

/// Thrown when an assertion's kind-specific preconditions are violated.
class AssertionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One of the six assertion types. Value type; ordered and hashable so sets
/// of assertions deduplicate.
struct Assertion {
  AssertionKind kind = AssertionKind::IQ;
  /// c for IQ/UT/LT, w for AG*/NL*/IQX.
  CandidateId subject;
  /// l for AG*/NL*.
  std::optional<CandidateId> opponent;
  /// W with its bounds (AG*/NL*/IQX); empty when W is empty.
  TransferBounds bounds;
  /// O* (NL*/IQX).
  CandidateSet eliminated;
  /// Transfer value bound for UT (upper) and LT (lower).
  std::optional<Decimal> bound;

  friend auto operator<=>(const Assertion&, const Assertion&) = default;
  friend bool operator==(const Assertion&, const Assertion&) = default;
};

Assertion make_iq(CandidateId c);
/// UT(c, tau_bar): t_{c,1} < Q / (1 - tau_bar).
Assertion make_ut(CandidateId c, Decimal tau_bar);
/// LT(c, tau): t_{c,1} > Q / (1 - tau).
Assertion make_lt(CandidateId c, Decimal tau);
Assertion make_ag_star(CandidateId w, CandidateId l, TransferBounds bounds);
Assertion make_nl_star(CandidateId w, CandidateId l, TransferBounds bounds, CandidateSet eliminated);
Assertion make_iqx(CandidateId w, TransferBounds bounds, CandidateSet eliminated);

/// Stable across runs and platforms; used to derive simulation seeds.
std::uint64_t stable_hash(const Assertion& a);

/// Human-readable form, e.g. "AG*(A, D | W={C})".
std::string describe(const Assertion& a, const Election& election);

// ---- per-ballot contributions ------------------------------------------

/// 1 iff c is ranked first.
int score_iq(std::span<const CandidateId> prefs, CandidateId c);

struct Contribution {
  Decimal min;  // to w's minimum tally
  Decimal max;  // to l's maximum tally
  friend bool operator==(const Contribution&, const Contribution&) = default;
};

Contribution score_ag_star(std::span<const CandidateId> prefs, CandidateId w, CandidateId l,
                           const TransferBounds& bounds);
Contribution score_nl_star(std::span<const CandidateId> prefs, CandidateId w, CandidateId l,
                           const TransferBounds& bounds, CandidateSet eliminated);
Decimal score_iqx(std::span<const CandidateId> prefs, CandidateId w, const TransferBounds& bounds,
                  CandidateSet eliminated);

/// Q / (1 - bound) kept as an exact ratio.
struct Threshold {
  Decimal num;
  Decimal den = Decimal::from_int(1);
  double value() const { return num.to_double() / den.to_double(); }
};

/// Q / (1 - tau_bar). Throws std::domain_error unless 0 <= bound < 1.
Threshold ut_threshold(std::int64_t quota, Decimal tau_bar);
Threshold lt_threshold(std::int64_t quota, Decimal tau_lo);

/// Aggregate comparison an assertion makes over the ballot multiset.
struct AssertionTally {
  Decimal lhs;    // t_{c,1}, t1^min_w, t2^min_w or T^IQX_w
  Threshold rhs;  // Q, Q/(1-tau) or t1^max_l / t2^max_l
  bool holds = false;
};

/// Evaluates the assertion's defining inequality on the election's ballots.
AssertionTally evaluate(const Assertion& a, const Election& election);

/// Per-ballot score g(b) of the linear form sum_b g(b) > T.
Decimal raw_score(const Assertion& a, std::span<const CandidateId> prefs);

class AssorterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Assertion rewritten as a SHANGRLA assorter A(b) = (g(b) - g_lo) / (2(T/n - g_lo)).
/// The population mean of A exceeds 1/2 iff sum_b g(b) > T.
class Assorter {
 public:
  Assorter(std::vector<Decimal> raw, std::span<const Ballot> ballots, Decimal g_lo, Decimal g_hi,
           Threshold threshold, std::int64_t population);

  /// Normalised value of a raw score.
  double score(Decimal g) const;
  /// Normalised value of ballot type i.
  double score_of(std::size_t i) const { return score(raw_[i]); }
  Decimal raw_of(std::size_t i) const { return raw_[i]; }
  std::size_t num_types() const { return raw_.size(); }

  Decimal g_lo() const { return g_lo_; }
  Decimal g_hi() const { return g_hi_; }
  double upper_bound() const { return score(g_hi_); }
  double reported_mean() const { return mean_; }
  double margin() const { return 2.0 * mean_ - 1.0; }
  /// Exact: sum_b g(b) > T.
  bool holds() const { return holds_; }
  std::int64_t population() const { return population_; }

  /// Exact content: raw scores per ballot type, g_lo, g_hi, threshold and
  /// population. Assorters with equal signatures are the same statistical test.
  std::vector<std::int64_t> signature() const;
  /// Stable 64-bit hash of signature().
  std::uint64_t fingerprint() const;

 private:
  std::vector<Decimal> raw_;
  Decimal g_lo_;
  Decimal g_hi_;
  Threshold threshold_;
  std::int64_t population_;
  __int128 denominator_ = 0;
  double mean_ = 0.0;
  bool holds_ = false;
};

/// Throws AssorterError when T/n <= g_lo (vacuous or ill-posed assertion).
Assorter to_assorter(const Assertion& a, const Election& election);

}  // namespace stvrla

#endif  // STVRLA_ASSERTION_HPP_
