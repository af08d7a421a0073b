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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "stvrla/risk.hpp"

using namespace stvrla;

TEST_SUITE("risk") {

TEST_CASE("martingale matches the straight-line recurrence") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const double u = 0.5 + std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const int population = 20 + static_cast<int>(rng() % 500);
    const int draws = 1 + static_cast<int>(rng() % population);
    const double eta0 = std::uniform_real_distribution<double>(0.5, 1.0)(rng) * u;
    std::vector<double> x;
    for (int i = 0; i < draws; ++i) x.push_back(std::uniform_real_distribution<double>(0.0, u)(rng));
    AsnParams params;
    const double eps = u / (2.0 * population);
    const auto got = alpha_martingale(x, u, population, eta0, params);
    const auto want = oracle::alpha_p_values(x, u, population, eta0, params.alpha_d, eps);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-9);
  }
}

TEST_CASE("constant one half never moves") {
  const std::vector<double> x(300, 0.5);
  for (double eta0 : {0.51, 0.7, 0.99}) {
    const auto p = alpha_martingale(x, 1.0, 1000, eta0, AsnParams{});
    for (double v : p) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ten draws of one") {
  const std::vector<double> x(10, 1.0);
  const auto p = alpha_martingale(x, 1.0, 1000, 0.9, AsnParams{});
  const auto want = oracle::alpha_p_values(x, 1.0, 1000, 0.9, 100.0, 1.0 / 2000.0);
  CHECK(std::abs(p.back() - want.back()) <= 1e-9);
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] <= p[i - 1]);
  CHECK(p.back() < 1.0);
}

TEST_CASE("null exhausted without replacement") {
  const std::vector<double> x(6, 1.0);
  const auto p = alpha_martingale(x, 1.0, 10, 0.9, AsnParams{});
  // After five ones the remaining population cannot average one half or less.
  for (int i = 0; i < 5; ++i) CHECK(p[static_cast<std::size_t>(i)] > 0.0);
  CHECK(p[5] == 0.0);
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(alpha_martingale(std::vector<double>{1.5}, 1.0, 10, 0.9, AsnParams{}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaMartingale(1.0, 10, 0.0, 100, 0.01), std::invalid_argument);
  AsnParams bad;
  bad.risk_limit = 1.0;
  CHECK_THROWS(bad.validate());
  bad = AsnParams{};
  bad.reps = 0;
  CHECK_THROWS(bad.validate());
  bad = AsnParams{};
  bad.error_rate = -0.1;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("uniform helpers") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(uniform_below(rng, 7) < 7);
    const double u = uniform_unit(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
}

namespace {

Election two_way(std::int64_t a, std::int64_t b) {
  return Election({"A", "B"}, {{{CandidateId{0}}, a}, {{CandidateId{1}}, b}}, 1);
}

}  // namespace

TEST_CASE("ASN estimation") {
  const Election e = two_way(600, 400);
  const Assorter wide = to_assorter(make_ag_star(CandidateId{0}, CandidateId{1}, {}), e);
  AsnParams params;
  const AsnEstimate first = estimate_asn(wide, e, params, 5);
  REQUIRE(first.feasible());
  CHECK(first == estimate_asn(wide, e, params, 5));
  CHECK(first.per_rep.size() == 20);
  std::int64_t total = 0;
  for (auto v : first.per_rep) total += v;
  CHECK(*first.value == (total + 19) / 20);

  // Narrower margin needs more ballots.
  const Election close = two_way(520, 480);
  const Assorter narrow = to_assorter(make_ag_star(CandidateId{0}, CandidateId{1}, {}), close);
  const AsnEstimate harder = estimate_asn(narrow, close, params, 5);
  REQUIRE(harder.feasible());
  CHECK(*harder.value > *first.value);

  // More errors on the same draws never make it easier.
  AsnParams noisy = params;
  noisy.error_rate = 0.5;
  const AsnEstimate worse = estimate_asn(wide, e, noisy, 5);
  CHECK(worse.cost() >= first.cost());

  AsnParams tight = params;
  tight.max_sample = 5;
  CHECK_FALSE(estimate_asn(narrow, close, tight, 5).feasible());

  const Election tie = two_way(500, 500);
  const Assorter flat = to_assorter(make_ag_star(CandidateId{0}, CandidateId{1}, {}), tie);
  CHECK_FALSE(estimate_asn(flat, tie, params).feasible());
}

TEST_CASE("set ASN is the maximum member") {
  const std::vector<AsnEstimate> set{AsnEstimate::of(10), AsnEstimate::of(40), AsnEstimate::of(25)};
  CHECK(asn_of_set(set) == AsnEstimate::of(40));
  CHECK(asn_of_set({}) == AsnEstimate::of(0));
  const std::vector<AsnEstimate> bad{AsnEstimate::of(10), AsnEstimate::infeasible("x")};
  CHECK_FALSE(asn_of_set(bad).feasible());
  CHECK(AsnEstimate::infeasible("x").to_string() == "INFEASIBLE");
}

}
