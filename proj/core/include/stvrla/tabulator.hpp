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

#ifndef STVRLA_TABULATOR_HPP_
#define STVRLA_TABULATOR_HPP_

#include <map>
#include <optional>
#include <vector>

#include "stvrla/decimal.hpp"
#include "stvrla/election.hpp"

namespace stvrla {

enum class RoundKind { Elected, Eliminated };

struct RoundEvent {
  RoundKind kind = RoundKind::Elected;
  CandidateId candidate;
  /// Set when an elected candidate's surplus was distributed.
  std::optional<Decimal> transfer_value;
  /// Tallies of every continuing candidate at the start of the round.
  std::map<CandidateId, Decimal> tallies_before;
  /// Seated without a quota because remaining candidates == unfilled seats.
  bool final_fill = false;

  friend bool operator==(const RoundEvent&, const RoundEvent&) = default;
};

struct TabulationOptions {
  /// Decimal places transfer values and ballot weights are truncated to.
  int precision = 5;
};

struct TabulationOutcome {
  std::vector<CandidateId> winners;  // election order
  CandidateSet losers;
  /// Winners with a quota on first preferences.
  CandidateSet first_round_winners;
  /// (t_{w,1} - Q) / t_{w,1}, truncated, for each first-round winner.
  std::map<CandidateId, Decimal> reported_transfer_values;
  std::vector<RoundEvent> rounds;
  /// An election or elimination choice was decided by lowest index.
  bool tie_occurred = false;
  /// Some seats were filled by the remaining-equals-vacancies rule.
  bool final_fill_used = false;

  CandidateSet winner_set() const {
    CandidateSet s;
    for (CandidateId w : winners) s.insert(w);
    return s;
  }

  friend bool operator==(const TabulationOutcome&, const TabulationOutcome&) = default;
};

/// Weighted Inclusive Gregory STV count.
TabulationOutcome tabulate(const Election& election, const TabulationOptions& options = {});

/// True iff at least one candidate was seated on first preferences.
bool check_first_winner_criterion(const TabulationOutcome& outcome);

}  // namespace stvrla

#endif  // STVRLA_TABULATOR_HPP_
