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

#ifndef STVRLA_RISK_HPP_
#define STVRLA_RISK_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "stvrla/assertion.hpp"
#include "stvrla/election.hpp"

namespace stvrla {

struct AsnParams {
  double risk_limit = 0.05;
  /// Expected 1-vote overstatements per ballot.
  double error_rate = 0.002;
  int reps = 20;
  std::uint64_t seed = 20250101;
  /// Largest ASN considered auditable (M).
  std::int64_t max_sample = 2500;
  /// Shrink-trunc weight on the prior eta0.
  double alpha_d = 100.0;
  /// Estimator floor clearance; u / (2 * population) when unset.
  std::optional<double> alpha_eps;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct AsnEstimate {
  /// Unset means infeasible.
  std::optional<std::int64_t> value;
  std::vector<std::int64_t> per_rep;
  std::string reason;

  static AsnEstimate infeasible(std::string why) {
    AsnEstimate e;
    e.reason = std::move(why);
    return e;
  }
  static AsnEstimate of(std::int64_t v) {
    AsnEstimate e;
    e.value = v;
    return e;
  }

  bool feasible() const { return value.has_value(); }
  /// Value, or the int64 maximum when infeasible.
  std::int64_t cost() const { return value.value_or(std::numeric_limits<std::int64_t>::max()); }
  std::string to_string() const { return value ? std::to_string(*value) : "INFEASIBLE"; }

  friend bool operator==(const AsnEstimate&, const AsnEstimate&) = default;
};

/// ALPHA test supermartingale with the shrink-trunc estimator, sampling
/// without replacement. Feed draws one at a time; each call returns the
/// running p-value.
class AlphaMartingale {
 public:
  AlphaMartingale(double upper_bound, std::int64_t population, double eta0, double alpha_d, double alpha_eps);

  /// Throws std::invalid_argument when x lies outside [0, u].
  double step(double x);
  double p_value() const { return p_; }
  std::int64_t draws() const { return j_; }

 private:
  double u_;
  double population_;
  double eta0_;
  double d_;
  double eps_;
  std::int64_t j_ = 0;
  double sum_ = 0.0;
  double t_ = 1.0;
  double p_ = 1.0;
  bool null_exhausted_ = false;
};

/// Running p-values after each draw.
std::vector<double> alpha_martingale(std::span<const double> samples, double upper_bound,
                                     std::int64_t population, double eta0, const AsnParams& params);

/// Simulated ASN for one assorter. `stream` (normally the assorter's
/// fingerprint) decorrelates seeds across assorters so results do not depend
/// on pricing order. Infeasible when a replicate needs more than
/// min(max_sample, population) draws, or once the mean is certain to exceed
/// max_sample.
AsnEstimate estimate_asn(const Assorter& assorter, const Election& election, const AsnParams& params,
                         std::uint64_t stream = 0);

/// Maximum over members; infeasible if any member is; 0 for an empty set.
AsnEstimate asn_of_set(std::span<const AsnEstimate> members);

/// Seed for replicate `rep` of stream `stream`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t rep);

/// Uniform integer in [0, bound) by rejection, identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
/// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng);

}  // namespace stvrla

#endif  // STVRLA_RISK_HPP_
