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

#ifndef STVRLA_ELECTION_HPP_
#define STVRLA_ELECTION_HPP_

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stvrla/decimal.hpp"

namespace stvrla {

/// Dense candidate index, 0..|C|-1.
struct CandidateId {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(CandidateId, CandidateId) = default;
  friend constexpr bool operator==(CandidateId, CandidateId) = default;
};

/// Elections are limited to this many candidates (CandidateSet is a bitmask).
inline constexpr std::size_t kMaxCandidates = 64;

/// Value-type set of candidates backed by a 64-bit mask. Iterates in index order.
class CandidateSet {
 public:
  constexpr CandidateSet() = default;
  CandidateSet(std::initializer_list<CandidateId> ids) {
    for (CandidateId c : ids) insert(c);
  }

  static constexpr CandidateSet all(std::size_t count) {
    CandidateSet s;
    s.bits_ = count >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
    return s;
  }

  constexpr bool contains(CandidateId c) const { return (bits_ >> c.index) & 1U; }
  constexpr void insert(CandidateId c) { bits_ |= std::uint64_t{1} << c.index; }
  constexpr void erase(CandidateId c) { bits_ &= ~(std::uint64_t{1} << c.index); }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr CandidateSet operator|(CandidateSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr CandidateSet operator&(CandidateSet o) const { return from_bits(bits_ & o.bits_); }
  /// Set difference.
  constexpr CandidateSet operator-(CandidateSet o) const { return from_bits(bits_ & ~o.bits_); }

  std::vector<CandidateId> members() const {
    std::vector<CandidateId> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      out.push_back(CandidateId{static_cast<std::uint32_t>(std::countr_zero(b))});
    return out;
  }

  friend constexpr auto operator<=>(CandidateSet, CandidateSet) = default;
  friend constexpr bool operator==(CandidateSet, CandidateSet) = default;

 private:
  static constexpr CandidateSet from_bits(std::uint64_t b) {
    CandidateSet s;
    s.bits_ = b;
    return s;
  }
  std::uint64_t bits_ = 0;
};

using Ranking = std::vector<CandidateId>;

/// One ranking type and the number of ballots cast with it.
struct Ballot {
  Ranking prefs;
  std::int64_t count = 1;

  friend bool operator==(const Ballot&, const Ballot&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An STV election (C, B, Q, N). Immutable once constructed.
class Election {
 public:
  /// Validates and compresses: identical rankings are merged by summing counts,
  /// and ballots are stored in ascending ranking order.
  Election(std::vector<std::string> candidate_names, std::vector<Ballot> ballots, int seats);

  const std::vector<std::string>& candidate_names() const { return names_; }
  std::size_t num_candidates() const { return names_.size(); }
  const std::string& name(CandidateId c) const { return names_.at(c.index); }
  std::optional<CandidateId> find(std::string_view name) const;
  CandidateSet all_candidates() const { return CandidateSet::all(names_.size()); }

  std::span<const Ballot> ballots() const { return ballots_; }
  int seats() const { return seats_; }
  std::int64_t quota() const { return quota_; }
  std::int64_t total_ballots() const { return total_; }

  friend bool operator==(const Election&, const Election&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Ballot> ballots_;
  int seats_ = 1;
  std::int64_t quota_ = 1;
  std::int64_t total_ = 0;
};

/// floor(num_ballots / (seats + 1)) + 1.
std::int64_t droop_quota(std::int64_t num_ballots, int seats);

/// Subsequence of `prefs` restricted to `keep`, order preserved.
Ranking projection(std::span<const CandidateId> prefs, CandidateSet keep);

/// First preference, or nullopt for an exhausted sequence.
std::optional<CandidateId> first(std::span<const CandidateId> prefs);

/// first(projection(prefs, keep)) without materialising the projection.
inline std::optional<CandidateId> first_in(std::span<const CandidateId> prefs, CandidateSet keep) {
  for (CandidateId c : prefs)
    if (keep.contains(c)) return c;
  return std::nullopt;
}

/// N/(N+1), truncated to the decimal grid (exact for N+1 in {2,4,5,8,10,...}).
Decimal tau_max(int seats);

// Canonical text ballot file:
//   candidates: A,B,C
//   seats: 3
//   250 : A
//   120 : B,A,C
// '#' lines are comments. A JSON object {candidates, seats, ballots:[{count,prefs}]}
// is accepted as well; both yield identical Elections.

/// Parses either format (JSON when the first non-blank character is '{').
/// `seats` overrides the file's seats line; one of the two must be present.
Election parse_election(std::string_view content, std::optional<int> seats = std::nullopt);

Election read_election_file(const std::string& path, std::optional<int> seats = std::nullopt);

std::string to_canonical_text(const Election& election);
std::string to_json_text(const Election& election);

}  // namespace stvrla

#endif  // STVRLA_ELECTION_HPP_
