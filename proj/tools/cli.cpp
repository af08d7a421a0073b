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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "stvrla/tabulator.hpp"

namespace stvrla::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flag values as typed; converted and range-checked after parsing.
struct Flags {
  std::optional<int> seats;
  int precision = 5;
  double risk_limit = 0.05;
  double error_rate = 0.002;
  int reps = 20;
  std::string delta = "0.005";
  std::int64_t max_asn = 2500;
  std::uint64_t seed = 20250101;
  double alpha_d = 100.0;
};

void add_audit_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seats", f.seats, "Number of seats (overrides the file)")->envname("STVRLA_SEATS");
  cmd->add_option("--precision", f.precision, "Decimal places for transfer values")->envname("STVRLA_PRECISION");
  cmd->add_option("--risk-limit", f.risk_limit, "Risk limit alpha")->envname("STVRLA_RISK_LIMIT");
  cmd->add_option("--error-rate", f.error_rate, "Simulated 1-vote overstatement rate")->envname("STVRLA_ERROR_RATE");
  cmd->add_option("--reps", f.reps, "Simulation replicates per assertion")->envname("STVRLA_REPS");
  cmd->add_option("--delta", f.delta, "Transfer value bound step")->envname("STVRLA_DELTA");
  cmd->add_option("--max-asn", f.max_asn, "Largest auditable ASN")->envname("STVRLA_MAX_ASN");
  cmd->add_option("--seed", f.seed, "Simulation seed")->envname("STVRLA_SEED");
  cmd->add_option("--alpha-d", f.alpha_d, "ALPHA shrink-trunc weight")->envname("STVRLA_ALPHA_D");
}

void check_precision(int precision) {
  if (precision < 0 || precision > Decimal::kMaxPrecision)
    throw UsageError("--precision must lie in [0, " + std::to_string(Decimal::kMaxPrecision) + "]");
}

RunParams to_params(const Flags& f) {
  check_precision(f.precision);
  RunParams p;
  p.precision = f.precision;
  p.planner.asn.risk_limit = f.risk_limit;
  p.planner.asn.error_rate = f.error_rate;
  p.planner.asn.reps = f.reps;
  p.planner.asn.max_sample = f.max_asn;
  p.planner.asn.seed = f.seed;
  p.planner.asn.alpha_d = f.alpha_d;
  try {
    p.planner.asn.validate();
    p.planner.delta = Decimal::parse(f.delta);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(p.planner.delta > Decimal{}) || p.planner.delta >= Decimal::from_int(1))
    throw UsageError("--delta must lie in (0, 1)");
  if (!p.planner.delta.representable_at(p.precision))
    throw UsageError("--delta must be representable at --precision decimals");
  if (f.seats && *f.seats < 1) throw UsageError("--seats must be positive");
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

int cmd_tabulate(const std::string& path, std::optional<int> seats, int precision, bool as_json, std::ostream& out) {
  check_precision(precision);
  const Election election = read_election_file(path, seats);
  const TabulationOutcome outcome = tabulate(election, {precision});
  out << (as_json ? round_log_jsonl(election, outcome) : outcome_text(election, outcome));
  return 0;
}

int cmd_audit(const std::string& path, const Flags& flags, const std::string& out_path, std::ostream& out) {
  const RunParams params = to_params(flags);
  InstanceResult result;
  const std::string report = audit_file(path, params, flags.seats, result);
  if (out_path.empty())
    out << report;
  else
    write_file(out_path, report);
  return exit_code(result.kind);
}

int cmd_batch(const std::string& dir, const Flags& flags, const std::string& summary_path,
              const std::string& csv_path, const std::string& reports_dir, int jobs, std::ostream& out,
              std::ostream& err) {
  const RunParams params = to_params(flags);
  if (!fs::is_directory(dir)) throw std::runtime_error("no such directory: " + dir);
  if (jobs < 1) throw UsageError("--jobs must be positive");
  if (!reports_dir.empty()) fs::create_directories(reports_dir);

  const std::vector<fs::path> files = list_instances(dir);
  std::vector<std::optional<InstanceResult>> results(files.size());
  std::vector<std::string> reports(files.size());
  std::vector<std::string> failures(files.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        InstanceResult r;
        reports[i] = audit_file(files[i], params, flags.seats, r);
        results[i] = std::move(r);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(jobs), files.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<InstanceResult> ok;
  int failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!results[i]) {
      err << files[i].filename().string() << ": " << failures[i] << "\n";
      ++failed;
      continue;
    }
    ok.push_back(*results[i]);
    if (!reports_dir.empty()) write_file(fs::path(reports_dir) / (files[i].stem().string() + ".json"), reports[i]);
  }

  const std::string csv = instances_csv(ok);
  const std::vector<BatchSummaryRow> rows = summarize(ok);
  const std::string summary = summary_csv(rows);
  if (csv_path.empty())
    out << csv;
  else
    write_file(csv_path, csv);
  if (summary_path.empty())
    out << "\n" << summary;
  else
    write_file(summary_path, summary);
  if (failed > 0) err << failed << " of " << files.size() << " instances failed\n";
  return failed > 0 ? kExitDataError : 0;
}

}  // namespace

std::vector<fs::path> list_instances(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".txt" || ext == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

std::string audit_file(const fs::path& path, const RunParams& params, std::optional<int> seats,
                       InstanceResult& result) {
  const Election election = read_election_file(path.string(), seats);
  const TabulationOutcome outcome = tabulate(election, {params.precision});
  const AuditPlan plan = plan_audit(election, outcome, params.planner);
  result.instance = path.stem().string();
  result.seats = election.seats();
  result.winners = static_cast<int>(outcome.winners.size());
  result.winners_verified = static_cast<int>(plan.verified_winners.size());
  result.asn = plan.asn;
  result.strategy = plan.strategy;
  result.kind = plan.kind;
  return plan_report_json(result.instance, election, outcome, plan, params);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plans risk-limiting audits for STV elections"};
  app.name(args.empty() ? "stvrla" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  std::string path;
  bool as_json = false;
  std::optional<int> tab_seats;
  int tab_precision = 5;
  auto* tab = app.add_subcommand("tabulate", "Count an election and print the rounds");
  tab->add_option("file", path, "Election file")->required();
  tab->add_option("--seats", tab_seats, "Number of seats (overrides the file)")->envname("STVRLA_SEATS");
  tab->add_option("--precision", tab_precision, "Decimal places for transfer values")->envname("STVRLA_PRECISION");
  tab->add_flag("--json", as_json, "Emit the round log as JSON lines");

  Flags audit_flags;
  std::string out_path;
  auto* audit = app.add_subcommand("audit", "Plan an audit for one election");
  audit->add_option("file", path, "Election file")->required();
  add_audit_flags(audit, audit_flags);
  audit->add_option("--out", out_path, "Write the report here instead of standard output")->envname("STVRLA_OUT");

  Flags batch_flags;
  std::string dir, summary_path, csv_path, reports_dir;
  int jobs = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  auto* batch = app.add_subcommand("batch", "Plan audits for every election file in a directory");
  batch->add_option("dir", dir, "Directory of election files")->required();
  add_audit_flags(batch, batch_flags);
  batch->add_option("--summary", summary_path, "Write grouped summary CSV here")->envname("STVRLA_SUMMARY");
  batch->add_option("--csv", csv_path, "Write per-instance CSV here")->envname("STVRLA_CSV");
  batch->add_option("--reports", reports_dir, "Write one report per instance into this directory")
      ->envname("STVRLA_REPORTS");
  batch->add_option("--jobs", jobs, "Instances audited concurrently")->envname("STVRLA_JOBS");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("stvrla");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*tab) return cmd_tabulate(path, tab_seats, tab_precision, as_json, out);
    if (*audit) {
      if (!fs::exists(path)) throw UsageError("no such file: " + path);
      return cmd_audit(path, audit_flags, out_path, out);
    }
    return cmd_batch(dir, batch_flags, summary_path, csv_path, reports_dir, jobs, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    const std::string what = e.what();
    err << "error: " << what << "\n";
    return what.rfind("no such", 0) == 0 ? kExitUsage : kExitDataError;
  }
}

}  // namespace stvrla::cli
