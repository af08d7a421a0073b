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

#include "stvrla/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace stvrla {

namespace {

using nlohmann::json;

json names_of(const Election& e, CandidateSet s) {
  json arr = json::array();
  for (CandidateId c : s.members()) arr.push_back(e.name(c));
  return arr;
}

json bound_map(const Election& e, const std::map<CandidateId, Decimal>& m) {
  json obj = json::object();
  for (const auto& [c, v] : m) obj[e.name(c)] = v.to_string();
  return obj;
}

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos) s = std::string("0.") + std::string(places, '0');
  return s;
}

json asn_json(const AsnEstimate& asn) { return asn.value ? json(*asn.value) : json(nullptr); }

json assertion_object(const Assertion& a, const Pricing& p, const Election& e) {
  json obj;
  obj["kind"] = std::string(to_string(a.kind));
  obj["subject"] = e.name(a.subject);
  if (a.opponent) obj["opponent"] = e.name(*a.opponent);
  if (!a.bounds.empty()) {
    obj["W"] = names_of(e, a.bounds.domain());
    obj["lower"] = bound_map(e, a.bounds.lower);
    obj["upper"] = bound_map(e, a.bounds.upper);
  }
  if (a.kind == AssertionKind::NLStar || a.kind == AssertionKind::IQX) obj["eliminated"] = names_of(e, a.eliminated);
  if (a.bound) obj["bound"] = a.bound->to_string();
  obj["margin"] = fixed(p.margin, 6);
  obj["asn"] = asn_json(p.asn);
  return obj;
}

}  // namespace

std::string assertion_json(const Assertion& a, const Pricing& pricing, const Election& election) {
  return assertion_object(a, pricing, election).dump(2) + "\n";
}

std::string plan_report_json(const std::string& election_id, const Election& election,
                             const TabulationOutcome& outcome, const AuditPlan& plan, const RunParams& params) {
  const AsnParams& asn = params.planner.asn;
  json doc;
  doc["election"] = election_id;
  doc["seats"] = election.seats();
  doc["ballots"] = election.total_ballots();
  doc["quota"] = election.quota();
  json winners = json::array();
  for (CandidateId w : outcome.winners) winners.push_back(election.name(w));
  doc["winners"] = winners;
  doc["tie_occurred"] = outcome.tie_occurred;
  doc["kind"] = std::string(to_string(plan.kind));
  doc["strategy"] = std::string(to_string(plan.strategy));
  doc["verified"] = names_of(election, plan.verified_winners);
  doc["asn"] = asn_json(plan.asn);
  json list = json::array();
  for (const auto& [a, p] : plan.assertions) list.push_back(assertion_object(a, p, election));
  doc["assertions"] = list;
  json echo;
  echo["seed"] = asn.seed;
  echo["risk_limit"] = asn.risk_limit;
  echo["error_rate"] = asn.error_rate;
  echo["reps"] = asn.reps;
  echo["max_asn"] = asn.max_sample;
  echo["alpha_d"] = asn.alpha_d;
  echo["alpha_eps"] = asn.alpha_eps ? json(*asn.alpha_eps) : json(nullptr);
  echo["delta"] = params.planner.delta.to_string();
  echo["precision"] = params.precision;
  doc["parameters"] = echo;
  return doc.dump(2) + "\n";
}

std::string round_log_jsonl(const Election& election, const TabulationOutcome& outcome) {
  std::string out;
  int round = 0;
  for (const RoundEvent& ev : outcome.rounds) {
    json line;
    line["round"] = ++round;
    line["kind"] = ev.kind == RoundKind::Elected ? "elected" : "eliminated";
    line["candidate"] = election.name(ev.candidate);
    line["transfer_value"] = ev.transfer_value ? json(ev.transfer_value->to_string()) : json(nullptr);
    line["tallies"] = bound_map(election, ev.tallies_before);
    line["final_fill"] = ev.final_fill;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string outcome_text(const Election& election, const TabulationOutcome& outcome) {
  std::ostringstream os;
  os << "ballots " << election.total_ballots() << ", seats " << election.seats() << ", quota " << election.quota()
     << "\n";
  int round = 0;
  for (const RoundEvent& ev : outcome.rounds) {
    os << "round " << ++round << ":";
    for (const auto& [c, t] : ev.tallies_before) os << ' ' << election.name(c) << '=' << t.to_string();
    os << "\n  " << (ev.kind == RoundKind::Elected ? "elected " : "eliminated ") << election.name(ev.candidate);
    if (ev.transfer_value) os << " (transfer value " << ev.transfer_value->to_string() << ")";
    if (ev.final_fill) os << " (remaining seat)";
    os << "\n";
  }
  os << "winners:";
  for (std::size_t i = 0; i < outcome.winners.size(); ++i)
    os << (i ? ", " : " ") << election.name(outcome.winners[i]);
  os << "\n";
  if (outcome.tie_occurred) os << "note: a tie was broken by candidate order\n";
  return os.str();
}

int exit_code(PlanKind kind) {
  switch (kind) {
    case PlanKind::Full: return 0;
    case PlanKind::Partial: return 3;
    case PlanKind::None: return 4;
  }
  return 4;
}

std::vector<BatchSummaryRow> summarize(std::span<const InstanceResult> results) {
  std::map<int, int> per_seats;
  std::map<std::pair<int, int>, std::vector<const InstanceResult*>> groups;
  for (const auto& r : results) {
    ++per_seats[r.seats];
    groups[{r.seats, r.winners_verified}].push_back(&r);
  }
  std::vector<BatchSummaryRow> rows;
  for (const auto& [key, members] : groups) {
    BatchSummaryRow row;
    row.seats = key.first;
    row.winners_verified = key.second;
    row.instance_count = static_cast<int>(members.size());
    row.instance_pct = 100.0 * row.instance_count / per_seats[key.first];
    std::int64_t sum = 0;
    int n = 0;
    for (const InstanceResult* r : members) {
      if (!r->asn.feasible() || r->kind == PlanKind::None) continue;
      const std::int64_t v = *r->asn.value;
      row.asn_min = n == 0 ? v : std::min(row.asn_min, v);
      row.asn_max = n == 0 ? v : std::max(row.asn_max, v);
      sum += v;
      ++n;
    }
    if (n > 0) row.asn_avg = static_cast<double>(sum) / n;
    rows.push_back(row);
  }
  return rows;
}

std::string instances_csv(std::span<const InstanceResult> results) {
  std::string out = "instance,seats,winners,winners_verified,asn,strategy,kind\n";
  for (const auto& r : results) {
    out += r.instance + ',' + std::to_string(r.seats) + ',' + std::to_string(r.winners) + ',' +
           std::to_string(r.winners_verified) + ',' + (r.kind == PlanKind::None ? std::string() : r.asn.to_string()) +
           ',' + std::string(to_string(r.strategy)) + ',' + std::string(to_string(r.kind)) + '\n';
  }
  return out;
}

std::string summary_csv(std::span<const BatchSummaryRow> rows) {
  std::string out = "seats,winners_verified,instances,pct,asn_avg,asn_min,asn_max\n";
  for (const auto& r : rows) {
    out += std::to_string(r.seats) + ',' + std::to_string(r.winners_verified) + ',' +
           std::to_string(r.instance_count) + ',' + fixed(r.instance_pct, 1) + ',' + fixed(r.asn_avg, 1) + ',' +
           std::to_string(r.asn_min) + ',' + std::to_string(r.asn_max) + '\n';
  }
  return out;
}

}  // namespace stvrla
