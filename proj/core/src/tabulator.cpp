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

#include "stvrla/tabulator.hpp"

#include <algorithm>
#include <stdexcept>

namespace stvrla {

namespace {

// A parcel of identical ballots currently sitting in some candidate's pile.
struct Parcel {
  std::size_t ballot = 0;
  BallotWeight weight = Decimal::from_int(1);
};

class Count {
 public:
  Count(const Election& e, const TabulationOptions& opts)
      : election_(e), precision_(opts.precision), piles_(e.num_candidates()), tallies_(e.num_candidates()) {
    standing_ = e.all_candidates();
    const auto ballots = e.ballots();
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      CandidateId c = ballots[i].prefs.front();
      piles_[c.index].push_back(Parcel{i, Decimal::from_int(1)});
      tallies_[c.index] += Decimal::from_int(ballots[i].count);
    }
  }

  TabulationOutcome run() {
    TabulationOutcome out;
    const Decimal quota = Decimal::from_int(election_.quota());
    for (CandidateId c : standing_.members()) {
      if (tallies_[c.index] >= quota) {
        out.first_round_winners.insert(c);
        out.reported_transfer_values[c] =
            Decimal::ratio_truncated(tallies_[c.index] - quota, tallies_[c.index], precision_);
      }
    }

    const auto seats = static_cast<std::size_t>(election_.seats());
    while (out.winners.size() < seats) {
      const std::size_t vacancies = seats - out.winners.size();
      if (standing_.size() <= vacancies) {
        fill_remaining(out);
        break;
      }

      RoundEvent ev;
      ev.tallies_before = snapshot();
      CandidateSet with_quota;
      for (CandidateId c : standing_.members())
        if (tallies_[c.index] >= quota) with_quota.insert(c);

      if (!with_quota.empty()) {
        CandidateId elected = pick(with_quota, /*highest=*/true, out.tie_occurred);
        ev.kind = RoundKind::Elected;
        ev.candidate = elected;
        standing_.erase(elected);
        out.winners.push_back(elected);
        if (out.winners.size() < seats) {
          const Decimal t = tallies_[elected.index];
          const Decimal tv = Decimal::ratio_truncated(t - quota, t, precision_);
          ev.transfer_value = tv;
          // Candidates already holding a quota at the start of the round do
          // not receive transfers.
          distribute(elected, tv, standing_ - with_quota);
        }
      } else {
        CandidateId out_c = pick(standing_, /*highest=*/false, out.tie_occurred);
        ev.kind = RoundKind::Eliminated;
        ev.candidate = out_c;
        standing_.erase(out_c);
        out.losers.insert(out_c);
        distribute(out_c, Decimal::from_int(1), standing_);
      }
      out.rounds.push_back(std::move(ev));
    }
    out.losers = out.losers | standing_;
    return out;
  }

 private:
  std::map<CandidateId, Decimal> snapshot() const {
    std::map<CandidateId, Decimal> m;
    for (CandidateId c : standing_.members()) m[c] = tallies_[c.index];
    return m;
  }

  CandidateId pick(CandidateSet among, bool highest, bool& tie) const {
    std::optional<CandidateId> best;
    bool tied = false;
    for (CandidateId c : among.members()) {
      if (!best) {
        best = c;
        continue;
      }
      const Decimal a = tallies_[c.index];
      const Decimal b = tallies_[best->index];
      if (a == b) {
        tied = true;
      } else if (highest ? a > b : a < b) {
        best = c;
        tied = false;
      }
    }
    tie = tie || tied;
    return *best;
  }

  void distribute(CandidateId from, Decimal factor, CandidateSet receivers) {
    const auto ballots = election_.ballots();
    auto pile = std::move(piles_[from.index]);
    piles_[from.index].clear();
    tallies_[from.index] = Decimal{};
    for (Parcel p : pile) {
      const Ballot& b = ballots[p.ballot];
      auto next = first_in(b.prefs, receivers);
      if (!next) continue;  // exhausted
      p.weight = (p.weight * factor).truncated(precision_);
      piles_[next->index].push_back(p);
      tallies_[next->index] += p.weight * b.count;
    }
  }

  void fill_remaining(TabulationOutcome& out) {
    auto rest = standing_.members();
    std::stable_sort(rest.begin(), rest.end(), [&](CandidateId a, CandidateId b) {
      return tallies_[a.index] > tallies_[b.index];
    });
    for (std::size_t i = 1; i < rest.size(); ++i)
      if (tallies_[rest[i].index] == tallies_[rest[i - 1].index]) out.tie_occurred = true;
    auto before = snapshot();
    for (CandidateId c : rest) {
      RoundEvent ev;
      ev.kind = RoundKind::Elected;
      ev.candidate = c;
      ev.tallies_before = before;
      ev.final_fill = true;
      out.winners.push_back(c);
      out.rounds.push_back(std::move(ev));
    }
    out.final_fill_used = !rest.empty();
    standing_ = CandidateSet{};
  }

  const Election& election_;
  int precision_;
  CandidateSet standing_;
  std::vector<std::vector<Parcel>> piles_;
  std::vector<Decimal> tallies_;
};

}  // namespace

TabulationOutcome tabulate(const Election& election, const TabulationOptions& options) {
  if (options.precision < 0 || options.precision > Decimal::kMaxPrecision)
    throw std::invalid_argument("precision must lie in [0, 9]");
  if (static_cast<std::size_t>(election.seats()) >= election.num_candidates())
    throw std::invalid_argument("seats must be fewer than candidates");
  return Count(election, options).run();
}

bool check_first_winner_criterion(const TabulationOutcome& outcome) {
  return !outcome.first_round_winners.empty();
}

}  // namespace stvrla
