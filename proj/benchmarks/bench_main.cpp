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

#include <benchmark/benchmark.h>

#include <string>

#include "stvrla/planner.hpp"
#include "stvrla/risk.hpp"
#include "stvrla/tabulator.hpp"

using namespace stvrla;

namespace {

const Election& table1() {
  static const Election e = read_election_file(STVRLA_DATA_DIR "/table1.txt");
  return e;
}

const Election& ward(int i) {
  static const Election wards[] = {
      read_election_file(STVRLA_DATA_DIR "/corpus/ward02.txt"),
      read_election_file(STVRLA_DATA_DIR "/corpus/ward07.txt"),
  };
  return wards[i];
}

void BM_Tabulate(benchmark::State& state) {
  const Election& e = ward(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tabulate(e));
}
BENCHMARK(BM_Tabulate)->Arg(0)->Arg(1);

void BM_EvaluateNLStar(benchmark::State& state) {
  const Election& e = table1();
  TransferBounds b;
  b.lower[*e.find("C")] = Decimal::parse("0.39");
  b.upper[*e.find("C")] = Decimal::parse("0.40");
  const Assertion a = make_nl_star(*e.find("A"), *e.find("D"), b, CandidateSet{*e.find("B")});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(a, e));
}
BENCHMARK(BM_EvaluateNLStar);

void BM_EstimateAsn(benchmark::State& state) {
  const Election& e = table1();
  const Assorter as = to_assorter(make_iq(*e.find("C")), e);
  const AsnParams params;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_asn(as, e, params, as.fingerprint()));
}
BENCHMARK(BM_EstimateAsn)->Unit(benchmark::kMicrosecond);

void BM_PlanAudit(benchmark::State& state) {
  const Election& e = state.range(0) < 0 ? table1() : ward(static_cast<int>(state.range(0)));
  const TabulationOutcome o = tabulate(e);
  const PlannerParams params;
  for (auto _ : state) benchmark::DoNotOptimize(plan_audit(e, o, params));
}
BENCHMARK(BM_PlanAudit)->Arg(-1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
