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

#include "stvrla/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stvrla {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void AsnParams::validate() const {
  if (!(risk_limit > 0.0 && risk_limit < 1.0)) throw std::invalid_argument("risk limit must lie in (0, 1)");
  if (!(error_rate >= 0.0 && error_rate < 1.0)) throw std::invalid_argument("error rate must lie in [0, 1)");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (max_sample < 1) throw std::invalid_argument("max sample must be at least 1");
  if (!(alpha_d > 0.0)) throw std::invalid_argument("alpha_d must be positive");
  if (alpha_eps && !(*alpha_eps > 0.0)) throw std::invalid_argument("alpha_eps must be positive");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t rep) {
  return splitmix64(seed ^ splitmix64(stream ^ splitmix64(rep)));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % bound;
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

AlphaMartingale::AlphaMartingale(double upper_bound, std::int64_t population, double eta0, double alpha_d,
                                 double alpha_eps)
    : u_(upper_bound),
      population_(static_cast<double>(population)),
      eta0_(eta0),
      d_(alpha_d),
      eps_(alpha_eps) {
  if (!(u_ > 0.0)) throw std::invalid_argument("upper bound must be positive");
  if (population < 1) throw std::invalid_argument("population must be positive");
  if (!(eta0_ > 0.0 && eta0_ <= u_)) throw std::invalid_argument("eta0 must lie in (0, u]");
}

double AlphaMartingale::step(double x) {
  constexpr double kSlack = 1e-12;
  if (!(x >= -kSlack && x <= u_ + kSlack)) throw std::invalid_argument("sample outside [0, u]");
  x = std::clamp(x, 0.0, u_);
  ++j_;
  if (static_cast<double>(j_) > population_) throw std::invalid_argument("more draws than population");
  if (null_exhausted_) {
    sum_ += x;
    return p_;
  }
  const double j = static_cast<double>(j_);
  const double mu = (population_ * 0.5 - sum_) / (population_ - j + 1.0);
  if (mu <= 0.0) {
    null_exhausted_ = true;
    p_ = 0.0;
  } else if (mu < u_) {
    const double shrunk = (d_ * eta0_ + sum_) / (d_ + j - 1.0);
    const double eta = std::min(u_ - eps_, std::max(mu + eps_, shrunk));
    t_ *= (x * eta / mu + (u_ - x) * (u_ - eta) / (u_ - mu)) / u_;
    p_ = std::min(1.0, 1.0 / t_);
  }
  // mu >= u: the null can no longer be rejected; p stays where it is.
  sum_ += x;
  return p_;
}

std::vector<double> alpha_martingale(std::span<const double> samples, double upper_bound,
                                     std::int64_t population, double eta0, const AsnParams& params) {
  const double eps = params.alpha_eps.value_or(upper_bound / (2.0 * static_cast<double>(population)));
  AlphaMartingale m(upper_bound, population, eta0, params.alpha_d, eps);
  std::vector<double> out;
  out.reserve(samples.size());
  for (double x : samples) out.push_back(m.step(x));
  return out;
}

AsnEstimate estimate_asn(const Assorter& assorter, const Election& election, const AsnParams& params,
                         std::uint64_t stream) {
  params.validate();
  if (!(assorter.margin() > 0.0)) return AsnEstimate::infeasible("non-positive margin");

  const auto ballots = election.ballots();
  const std::int64_t n = election.total_ballots();
  std::vector<std::uint32_t> base;
  base.reserve(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < ballots.size(); ++i)
    base.insert(base.end(), static_cast<std::size_t>(ballots[i].count), static_cast<std::uint32_t>(i));

  const double u = assorter.upper_bound();
  const double eta0 = std::min(assorter.reported_mean(), u);
  const double eps = params.alpha_eps.value_or(u / (2.0 * static_cast<double>(n)));
  const std::int64_t limit = std::min<std::int64_t>(params.max_sample, n);
  // The rounded-up mean exceeds max_sample once the draw total passes this.
  const std::int64_t total_budget = params.max_sample * params.reps;
  const Decimal one = Decimal::from_int(1);

  // Overstated and clean scores per ballot type.
  std::vector<double> clean(assorter.num_types());
  std::vector<double> overstated(assorter.num_types());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    clean[i] = assorter.score_of(i);
    overstated[i] = assorter.score(std::max(assorter.g_lo(), assorter.raw_of(i) - one));
  }

  AsnEstimate est;
  std::vector<std::uint32_t> pop;
  std::int64_t total = 0;
  for (int rep = 0; rep < params.reps; ++rep) {
    std::mt19937_64 rng(derive_seed(params.seed, stream, static_cast<std::uint64_t>(rep)));
    pop = base;
    AlphaMartingale mart(u, n, eta0, params.alpha_d, eps);
    std::optional<std::int64_t> hit;
    // Every later replicate needs at least one draw.
    const std::int64_t rep_budget = total_budget - total - (params.reps - rep - 1);
    for (std::int64_t j = 0; j < limit; ++j) {
      if (j + 1 > rep_budget) {
        est.reason = "mean sample size exceeds " + std::to_string(params.max_sample);
        return est;
      }
      const auto k = static_cast<std::size_t>(j) + uniform_below(rng, static_cast<std::uint64_t>(n - j));
      std::swap(pop[static_cast<std::size_t>(j)], pop[k]);
      const std::uint32_t type = pop[static_cast<std::size_t>(j)];
      // Always consume the draw so runs with different error rates stay paired.
      const bool error = uniform_unit(rng) < params.error_rate;
      if (mart.step(error ? overstated[type] : clean[type]) <= params.risk_limit) {
        hit = j + 1;
        break;
      }
    }
    if (!hit) {
      est.reason = "replicate " + std::to_string(rep) + " exceeded " + std::to_string(limit) + " draws";
      return est;
    }
    est.per_rep.push_back(*hit);
    total += *hit;
  }
  est.value = (total + params.reps - 1) / params.reps;
  return est;
}

AsnEstimate asn_of_set(std::span<const AsnEstimate> members) {
  std::int64_t best = 0;
  for (const auto& m : members) {
    if (!m.feasible()) return AsnEstimate::infeasible(m.reason.empty() ? "member infeasible" : m.reason);
    best = std::max(best, *m.value);
  }
  return AsnEstimate::of(best);
}

}  // namespace stvrla
