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

#ifndef STVRLA_PLANNER_HPP_
#define STVRLA_PLANNER_HPP_

#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "stvrla/assertion.hpp"
#include "stvrla/election.hpp"
#include "stvrla/risk.hpp"
#include "stvrla/tabulator.hpp"

namespace stvrla {

/// Statistical standing of one assertion on the reported ballots.
struct Pricing {
  bool holds = false;
  double margin = 0.0;
  AsnEstimate asn;

  friend bool operator==(const Pricing&, const Pricing&) = default;
};

using AssertionSet = std::map<Assertion, Pricing>;

/// ASN of a set: the maximum member ASN (0 when empty).
AsnEstimate set_asn(const AssertionSet& set);

/// Prices assertions against one election, at most once each. Safe for
/// concurrent use. Simulations are keyed and seeded by assorter content, so
/// assertions that score every ballot identically share one ASN.
class AssertionPricer {
 public:
  AssertionPricer(const Election& election, AsnParams params);

  Pricing price(const Assertion& a);

  /// True on the reported ballots, positive margin and ASN <= M.
  bool auditable(const Assertion& a);

  const AsnParams& params() const { return params_; }
  const Election& election() const { return election_; }
  /// Distinct assertions priced.
  std::size_t cache_size() const;
  /// Distinct simulations run.
  std::size_t simulation_count() const;

 private:
  Pricing compute(const Assertion& a);
  AsnEstimate simulate(const Assorter& assorter);

  const Election& election_;
  AsnParams params_;
  mutable std::mutex mu_;
  std::map<Assertion, std::shared_future<Pricing>> cache_;
  std::map<std::vector<std::int64_t>, std::shared_future<AsnEstimate>> asn_cache_;
};

enum class PlanKind { Full, Partial, None };
enum class Strategy { StraightIQX, DualLoop };

std::string_view to_string(PlanKind kind);
std::string_view to_string(Strategy strategy);

struct AuditPlan {
  AssertionSet assertions;
  CandidateSet verified_winners;
  AsnEstimate asn = AsnEstimate::of(0);
  PlanKind kind = PlanKind::None;
  Strategy strategy = Strategy::DualLoop;

  friend bool operator==(const AuditPlan&, const AuditPlan&) = default;
};

/// Builds a plan, deriving asn and kind from the assertions and the
/// reported winner set.
AuditPlan make_plan(AssertionSet assertions, CandidateSet verified, CandidateSet winners, Strategy strategy);

/// a is strictly better than b: verifies more winners, or as many more cheaply.
bool plan_order(const AuditPlan& a, const AuditPlan& b);

enum class BoundKind { Lower, Upper };

/// A transfer-value bound per assumed first-round winner.
struct BoundVector {
  std::map<CandidateId, Decimal> values;
  BoundKind kind = BoundKind::Lower;

  friend auto operator<=>(const BoundVector&, const BoundVector&) = default;
  friend bool operator==(const BoundVector&, const BoundVector&) = default;
};

/// One vector per movable coordinate: lower bounds step down by delta to a
/// floor of 0, upper bounds step up by delta to a cap of tau_max(seats).
std::vector<BoundVector> neighbours(const BoundVector& v, Decimal delta, int seats);

struct PlannerParams {
  AsnParams asn;
  Decimal delta = Decimal::parse("0.005");
};

struct PlanPair {
  std::optional<AuditPlan> full;
  AuditPlan partial;
};

/// Memo of construct_audit results; neighbourhoods revisit vectors.
using ConstructCache = std::map<std::pair<BoundVector, BoundVector>, PlanPair>;

/// Fixed inputs shared by the dual-loop stages.
struct DualLoopContext {
  const Election& election;
  const TabulationOutcome& outcome;
  AssertionPricer& pricer;
  CandidateSet verified_first;  // W'
  CandidateSet unverified;      // R
  AuditPlan iq_plan;            // A_IQ as a partial audit
  Decimal delta;
  ConstructCache* cache = nullptr;
};

/// All auditable AG*(r, l, W', bounds) over the reported losers.
AssertionSet auditable_ag_stars(const Election& election, CandidateId r, const TransferBounds& bounds,
                                CandidateSet losers, AssertionPricer& pricer);

/// Vo1: r beats every loser by AG*; empty otherwise.
AssertionSet verify_vo1(const AssertionSet& ag_stars, CandidateSet losers);

struct Vo2Result {
  AssertionSet assertions;  // empty when r is not verified
  int iterations = 0;
};

/// Vo2: NL* formation iterated to a fixed point, with O* grown from
/// AG*-beaten and previously NL*-beaten losers.
Vo2Result verify_vo2(const Election& election, CandidateId r, const TransferBounds& bounds, CandidateSet losers,
                     const AssertionSet& ag_stars, AssertionPricer& pricer);

/// Vo3: IQX(r, W', bounds, O*) with O* the AG*-beaten losers, plus those AG*s.
AssertionSet verify_vo3(const Election& election, CandidateId r, const TransferBounds& bounds,
                        const AssertionSet& ag_stars, AssertionPricer& pricer);

PlanPair construct_audit(const DualLoopContext& ctx, const BoundVector& lower, const BoundVector& upper);
PlanPair inner_loop(const DualLoopContext& ctx, const BoundVector& lower);

std::optional<AuditPlan> straight_iqx_audit(const Election& election, const TabulationOutcome& outcome,
                                            AssertionPricer& pricer);
AuditPlan dual_loop_audit(const Election& election, const TabulationOutcome& outcome, AssertionPricer& pricer,
                          Decimal delta);

/// Cheapest full audit from either strategy, else the dual-loop partial.
AuditPlan plan_audit(const Election& election, const TabulationOutcome& outcome, const PlannerParams& params);
AuditPlan plan_audit(const Election& election, const TabulationOutcome& outcome, AssertionPricer& pricer,
                     Decimal delta);

}  // namespace stvrla

#endif  // STVRLA_PLANNER_HPP_
