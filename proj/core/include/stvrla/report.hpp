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

#ifndef STVRLA_REPORT_HPP_
#define STVRLA_REPORT_HPP_

#include <span>
#include <string>
#include <vector>

#include "stvrla/planner.hpp"
#include "stvrla/tabulator.hpp"

namespace stvrla {

// All JSON written here is canonical: keys sorted, decimals rendered as
// strings, two-space indentation and a trailing newline.

/// {kind, subject, opponent?, W?, lower?, upper?, eliminated?, bound?, margin, asn}
std::string assertion_json(const Assertion& a, const Pricing& pricing, const Election& election);

/// Everything needed to rerun an audit bit-identically.
struct RunParams {
  PlannerParams planner;
  int precision = 5;
};

std::string plan_report_json(const std::string& election_id, const Election& election,
                             const TabulationOutcome& outcome, const AuditPlan& plan, const RunParams& params);

/// One JSON object per line, one line per RoundEvent.
std::string round_log_jsonl(const Election& election, const TabulationOutcome& outcome);

/// Human-readable count summary.
std::string outcome_text(const Election& election, const TabulationOutcome& outcome);

/// Process exit status for a plan kind: 0 Full, 3 Partial, 4 None.
int exit_code(PlanKind kind);

/// One audited instance of a batch.
struct InstanceResult {
  std::string instance;
  int seats = 0;
  int winners = 0;
  int winners_verified = 0;
  AsnEstimate asn;
  Strategy strategy = Strategy::DualLoop;
  PlanKind kind = PlanKind::None;

  friend bool operator==(const InstanceResult&, const InstanceResult&) = default;
};

struct BatchSummaryRow {
  int seats = 0;
  int winners_verified = 0;
  int instance_count = 0;
  /// Share of the seats group, in percent.
  double instance_pct = 0.0;
  /// Over feasible plan ASNs; zero when none.
  double asn_avg = 0.0;
  std::int64_t asn_min = 0;
  std::int64_t asn_max = 0;

  friend bool operator==(const BatchSummaryRow&, const BatchSummaryRow&) = default;
};

/// Rows grouped by (seats, winners_verified), ascending.
std::vector<BatchSummaryRow> summarize(std::span<const InstanceResult> results);

/// instance,seats,winners,winners_verified,asn,strategy,kind
std::string instances_csv(std::span<const InstanceResult> results);
/// seats,winners_verified,instances,pct,asn_avg,asn_min,asn_max
std::string summary_csv(std::span<const BatchSummaryRow> rows);

}  // namespace stvrla

#endif  // STVRLA_REPORT_HPP_
