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

#include "stvrla/planner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace stvrla {

// ---- pricing -------------------------------------------------------------

AsnEstimate set_asn(const AssertionSet& set) {
  std::vector<AsnEstimate> members;
  members.reserve(set.size());
  for (const auto& [a, p] : set) members.push_back(p.asn);
  return asn_of_set(members);
}

AssertionPricer::AssertionPricer(const Election& election, AsnParams params)
    : election_(election), params_(std::move(params)) {
  params_.validate();
}

namespace {

// Returns the cached value for key, computing it at most once across threads.
template <class Key, class Value, class Fn>
Value once(std::mutex& mu, std::map<Key, std::shared_future<Value>>& cache, const Key& key, Fn&& fn) {
  std::promise<Value> promise;
  std::shared_future<Value> fut;
  bool owner = false;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) {
      fut = it->second;
    } else {
      fut = promise.get_future().share();
      cache.emplace(key, fut);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(fn());
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return fut.get();
}

}  // namespace

AsnEstimate AssertionPricer::simulate(const Assorter& assorter) {
  return once(mu_, asn_cache_, assorter.signature(),
              [&] { return estimate_asn(assorter, election_, params_, assorter.fingerprint()); });
}

Pricing AssertionPricer::compute(const Assertion& a) {
  Pricing p;
  p.holds = evaluate(a, election_).holds;
  try {
    const Assorter assorter = to_assorter(a, election_);
    p.margin = assorter.margin();
    if (p.holds && assorter.holds() && p.margin > 0.0) {
      p.asn = simulate(assorter);
    } else {
      p.asn = AsnEstimate::infeasible("non-positive margin");
    }
  } catch (const AssorterError& e) {
    p.margin = 0.0;
    p.asn = AsnEstimate::infeasible(e.what());
  }
  return p;
}

Pricing AssertionPricer::price(const Assertion& a) { return once(mu_, cache_, a, [&] { return compute(a); }); }

bool AssertionPricer::auditable(const Assertion& a) {
  const Pricing p = price(a);
  return p.holds && p.margin > 0.0 && p.asn.feasible() && *p.asn.value <= params_.max_sample;
}

std::size_t AssertionPricer::cache_size() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

std::size_t AssertionPricer::simulation_count() const {
  std::lock_guard lock(mu_);
  return asn_cache_.size();
}

// ---- plans ---------------------------------------------------------------

std::string_view to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::Full: return "Full";
    case PlanKind::Partial: return "Partial";
    case PlanKind::None: return "None";
  }
  return "?";
}

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::StraightIQX ? "StraightIQX" : "DualLoop";
}

AuditPlan make_plan(AssertionSet assertions, CandidateSet verified, CandidateSet winners, Strategy strategy) {
  AuditPlan plan;
  plan.asn = set_asn(assertions);
  plan.assertions = std::move(assertions);
  plan.verified_winners = verified & winners;
  plan.strategy = strategy;
  if (plan.verified_winners.empty())
    plan.kind = PlanKind::None;
  else if (plan.verified_winners == winners)
    plan.kind = PlanKind::Full;
  else
    plan.kind = PlanKind::Partial;
  return plan;
}

bool plan_order(const AuditPlan& a, const AuditPlan& b) {
  const auto na = a.verified_winners.size();
  const auto nb = b.verified_winners.size();
  if (na != nb) return na > nb;
  return a.asn.cost() < b.asn.cost();
}

std::vector<BoundVector> neighbours(const BoundVector& v, Decimal delta, int seats) {
  std::vector<BoundVector> out;
  const Decimal cap = tau_max(seats);
  for (const auto& [w, value] : v.values) {
    if (v.kind == BoundKind::Lower ? value > Decimal{} : value < cap) {
      BoundVector next = v;
      next.values[w] = v.kind == BoundKind::Lower ? std::max(Decimal{}, value - delta) : std::min(cap, value + delta);
      out.push_back(std::move(next));
    }
  }
  return out;
}

// ---- verification options --------------------------------------------------

namespace {

void merge_into(AssertionSet& dst, const AssertionSet& src) {
  for (const auto& [a, p] : src) dst.emplace(a, p);
}

void add(AssertionSet& dst, AssertionPricer& pricer, const Assertion& a) { dst.emplace(a, pricer.price(a)); }

CandidateSet opponents(const AssertionSet& set) {
  CandidateSet s;
  for (const auto& [a, p] : set)
    if (a.opponent) s.insert(*a.opponent);
  return s;
}

TransferBounds to_bounds(const BoundVector& lower, const BoundVector& upper) {
  TransferBounds b;
  b.lower = lower.values;
  b.upper = upper.values;
  return b;
}

// True when the partial contains `kind` assertions and none of them carries
// the plan's maximum ASN.
bool kind_not_most_expensive(const AuditPlan& plan, AssertionKind kind) {
  std::int64_t max_all = 0;
  std::optional<std::int64_t> max_kind;
  for (const auto& [a, p] : plan.assertions) {
    max_all = std::max(max_all, p.asn.cost());
    if (a.kind == kind) max_kind = std::max(max_kind.value_or(0), p.asn.cost());
  }
  return max_kind && *max_kind < max_all;
}

bool ut_vacuous(const Election& e, Decimal tau_bar) {
  // Every possible tally t <= n already satisfies t < Q / (1 - tau_bar).
  return compare_products(Decimal::from_int(e.total_ballots()), Decimal::from_int(1) - tau_bar,
                          Decimal::from_int(e.quota()), Decimal::from_int(1)) < 0;
}

}  // namespace

AssertionSet auditable_ag_stars(const Election& election, CandidateId r, const TransferBounds& bounds,
                                CandidateSet losers, AssertionPricer& pricer) {
  (void)election;
  AssertionSet out;
  for (CandidateId l : losers.members()) {
    Assertion a = make_ag_star(r, l, bounds);
    if (pricer.auditable(a)) add(out, pricer, a);
  }
  return out;
}

AssertionSet verify_vo1(const AssertionSet& ag_stars, CandidateSet losers) {
  return (losers - opponents(ag_stars)).empty() ? ag_stars : AssertionSet{};
}

Vo2Result verify_vo2(const Election& election, CandidateId r, const TransferBounds& bounds, CandidateSet losers,
                     const AssertionSet& ag_stars, AssertionPricer& pricer) {
  (void)election;
  Vo2Result result;
  const CandidateSet ag_beaten = opponents(ag_stars);
  AssertionSet nl_stars;
  CandidateSet covered;
  CandidateSet eliminated = ag_beaten;
  while (true) {
    ++result.iterations;
    CandidateSet gained;
    for (CandidateId l : (losers - covered).members()) {
      CandidateSet o = eliminated;
      o.erase(l);
      Assertion a = make_nl_star(r, l, bounds, o);
      if (pricer.auditable(a)) {
        add(nl_stars, pricer, a);
        gained.insert(l);
      }
    }
    covered = covered | gained;
    if (gained.empty() || covered == losers) break;
    eliminated = ag_beaten | covered;
  }
  if (covered == losers) {
    result.assertions = std::move(nl_stars);
    merge_into(result.assertions, ag_stars);
  }
  return result;
}

AssertionSet verify_vo3(const Election& election, CandidateId r, const TransferBounds& bounds,
                        const AssertionSet& ag_stars, AssertionPricer& pricer) {
  (void)election;
  Assertion a = make_iqx(r, bounds, opponents(ag_stars));
  if (!pricer.auditable(a)) return {};
  AssertionSet out = ag_stars;
  add(out, pricer, a);
  return out;
}

// ---- dual loop ---------------------------------------------------------------

PlanPair construct_audit(const DualLoopContext& ctx, const BoundVector& lower, const BoundVector& upper) {
  if (ctx.cache) {
    auto it = ctx.cache->find({lower, upper});
    if (it != ctx.cache->end()) return it->second;
  }
  const Election& e = ctx.election;
  const Decimal cap = tau_max(e.seats());
  PlanPair result{std::nullopt, ctx.iq_plan};

  auto finish = [&]() {
    if (ctx.cache) ctx.cache->emplace(std::make_pair(lower, upper), result);
    return result;
  };

  AssertionSet bound_checks;
  for (const auto& [w, tau] : lower.values) {
    if (tau == Decimal{}) continue;  // no LT needed at a zero lower bound
    Assertion a = make_lt(w, tau);
    if (!ctx.pricer.auditable(a)) return finish();
    add(bound_checks, ctx.pricer, a);
  }
  for (const auto& [w, tau_bar] : upper.values) {
    if (tau_bar >= cap || ut_vacuous(e, tau_bar)) continue;
    Assertion a = make_ut(w, tau_bar);
    if (!ctx.pricer.auditable(a)) return finish();
    add(bound_checks, ctx.pricer, a);
  }

  const TransferBounds bounds = to_bounds(lower, upper);
  const CandidateSet losers = ctx.outcome.losers;
  AssertionSet for_remaining;
  CandidateSet verified = ctx.verified_first;
  std::size_t count = 0;
  for (CandidateId r : ctx.unverified.members()) {
    const AssertionSet ag = auditable_ag_stars(e, r, bounds, losers, ctx.pricer);
    const AssertionSet options[3] = {
        verify_vo1(ag, losers),
        verify_vo2(e, r, bounds, losers, ag, ctx.pricer).assertions,
        verify_vo3(e, r, bounds, ag, ctx.pricer),
    };
    const AssertionSet* cheapest = nullptr;
    for (const auto& opt : options) {
      if (opt.empty()) continue;
      if (!cheapest || set_asn(opt).cost() < set_asn(*cheapest).cost()) cheapest = &opt;
    }
    if (!cheapest) continue;
    merge_into(for_remaining, *cheapest);
    verified.insert(r);
    ++count;
  }

  if (count > 0 || ctx.unverified.empty()) {
    AssertionSet all = ctx.iq_plan.assertions;
    merge_into(all, bound_checks);
    merge_into(all, for_remaining);
    result.partial = make_plan(std::move(all), verified, ctx.outcome.winner_set(), Strategy::DualLoop);
    if (count == ctx.unverified.size()) result.full = result.partial;
  }
  return finish();
}

PlanPair inner_loop(const DualLoopContext& ctx, const BoundVector& lower) {
  const Election& e = ctx.election;
  const Decimal cap = tau_max(e.seats());
  PlanPair best{std::nullopt, ctx.iq_plan};

  // construct_audit fails identically for every upper vector when a lower
  // bound cannot be verified.
  for (const auto& [w, tau] : lower.values)
    if (tau > Decimal{} && !ctx.pricer.auditable(make_lt(w, tau))) return best;

  BoundVector start{{}, BoundKind::Upper};
  for (CandidateId w : ctx.verified_first.members())
    start.values[w] = std::min(cap, ctx.outcome.reported_transfer_values.at(w) + ctx.delta);
  std::vector<BoundVector> hood{start};

  while (!hood.empty()) {
    BoundVector best_vec = hood.front();
    for (const auto& upper : hood) {
      PlanPair cand = construct_audit(ctx, lower, upper);
      const std::int64_t best_full = best.full ? best.full->asn.cost() : std::numeric_limits<std::int64_t>::max();
      if (cand.full && cand.full->asn.cost() < best_full) {
        best.full = cand.full;
        best.partial = *cand.full;
        best_vec = upper;
      } else if (plan_order(cand.partial, best.partial)) {
        best.partial = cand.partial;
        best_vec = upper;
      }
    }
    if (kind_not_most_expensive(best.partial, AssertionKind::UT)) break;
    hood = neighbours(best_vec, ctx.delta, e.seats());
  }
  return best;
}

AuditPlan dual_loop_audit(const Election& election, const TabulationOutcome& outcome, AssertionPricer& pricer,
                          Decimal delta) {
  const CandidateSet winners = outcome.winner_set();
  AssertionSet iq;
  CandidateSet verified_first;
  for (CandidateId w : outcome.first_round_winners.members()) {
    Assertion a = make_iq(w);
    if (pricer.auditable(a)) {
      add(iq, pricer, a);
      verified_first.insert(w);
    }
  }
  if (iq.empty()) return make_plan({}, {}, winners, Strategy::DualLoop);
  AuditPlan iq_plan = make_plan(iq, verified_first, winners, Strategy::DualLoop);
  if (verified_first == winners) return iq_plan;

  ConstructCache cache;
  DualLoopContext ctx{election, outcome, pricer, verified_first, winners - verified_first, iq_plan, delta, &cache};

  std::optional<AuditPlan> full;
  AuditPlan partial = iq_plan;
  BoundVector start{{}, BoundKind::Lower};
  for (CandidateId w : verified_first.members())
    start.values[w] = std::max(Decimal{}, outcome.reported_transfer_values.at(w) - delta);
  std::vector<BoundVector> hood{start};
  std::map<BoundVector, PlanPair> inner_cache;

  while (!hood.empty()) {
    BoundVector best_vec = hood.front();
    for (const auto& lower : hood) {
      auto it = inner_cache.find(lower);
      if (it == inner_cache.end()) it = inner_cache.emplace(lower, inner_loop(ctx, lower)).first;
      const PlanPair& cand = it->second;
      const std::int64_t best_full = full ? full->asn.cost() : std::numeric_limits<std::int64_t>::max();
      if (cand.full && cand.full->asn.cost() < best_full) {
        full = cand.full;
        partial = *cand.full;
        best_vec = lower;
      } else if (plan_order(cand.partial, partial)) {
        partial = cand.partial;
        best_vec = lower;
      }
    }
    if (kind_not_most_expensive(partial, AssertionKind::LT)) break;
    hood = neighbours(best_vec, delta, election.seats());
  }
  return full ? *full : partial;
}

// ---- straight IQX ------------------------------------------------------------

std::optional<AuditPlan> straight_iqx_audit(const Election& election, const TabulationOutcome& outcome,
                                            AssertionPricer& pricer) {
  const CandidateSet winners = outcome.winner_set();
  AssertionSet plan;
  for (CandidateId w : winners.members()) {
    const AssertionSet ag = auditable_ag_stars(election, w, TransferBounds{}, outcome.losers, pricer);
    Assertion iqx = make_iqx(w, TransferBounds{}, opponents(ag));
    if (!pricer.auditable(iqx)) return std::nullopt;
    merge_into(plan, ag);
    add(plan, pricer, iqx);
  }
  return make_plan(std::move(plan), winners, winners, Strategy::StraightIQX);
}

AuditPlan plan_audit(const Election& election, const TabulationOutcome& outcome, AssertionPricer& pricer,
                     Decimal delta) {
  if (!(delta > Decimal{}) || delta >= Decimal::from_int(1)) throw std::invalid_argument("delta must lie in (0, 1)");
  std::optional<AuditPlan> straight = straight_iqx_audit(election, outcome, pricer);
  AuditPlan dual = dual_loop_audit(election, outcome, pricer, delta);
  const bool dual_full = dual.kind == PlanKind::Full;
  if (straight && dual_full) return dual.asn.cost() < straight->asn.cost() ? dual : *straight;
  if (straight) return *straight;
  return dual;
}

AuditPlan plan_audit(const Election& election, const TabulationOutcome& outcome, const PlannerParams& params) {
  AssertionPricer pricer(election, params.asn);
  return plan_audit(election, outcome, pricer, params.delta);
}

}  // namespace stvrla
