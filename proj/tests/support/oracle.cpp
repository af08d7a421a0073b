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

#include "oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oracle {

using stvrla::AssertionKind;

namespace {

const Decimal kZero = Decimal::from_int(0);
const Decimal kOne = Decimal::from_int(1);

bool in(const std::map<int, Decimal>& m, int c) { return m.count(c) != 0; }

std::set<int> keys(const std::map<int, Decimal>& m) {
  std::set<int> s;
  for (const auto& kv : m) s.insert(kv.first);
  return s;
}

int head(const Prefs& b) { return b.empty() ? -1 : b.front(); }

int position(const Prefs& b, int c) {
  auto it = std::find(b.begin(), b.end(), c);
  return it == b.end() ? -1 : static_cast<int>(it - b.begin());
}

// Second min clause shared by AG*, NL* and IQX.
Decimal transferred_min(const Prefs& b, int w, const Bounds& bounds) {
  const int f = head(b);
  if (f >= 0 && in(bounds.lower, f) && head(without(b, keys(bounds.lower))) == w) return bounds.lower.at(f);
  return kZero;
}

std::int64_t first_tally(const stvrla::Election& e, int c) {
  std::int64_t t = 0;
  for (const auto& bal : e.ballots())
    if (!bal.prefs.empty() && static_cast<int>(bal.prefs.front().index) == c) t += bal.count;
  return t;
}

}  // namespace

Prefs plain(const stvrla::Ranking& r) {
  Prefs p;
  for (auto c : r) p.push_back(static_cast<int>(c.index));
  return p;
}

Bounds plain(const stvrla::TransferBounds& b) {
  Bounds out;
  for (const auto& [c, v] : b.lower) out.lower[static_cast<int>(c.index)] = v;
  for (const auto& [c, v] : b.upper) out.upper[static_cast<int>(c.index)] = v;
  return out;
}

std::set<int> plain(stvrla::CandidateSet s) {
  std::set<int> out;
  for (auto c : s.members()) out.insert(static_cast<int>(c.index));
  return out;
}

Prefs without(const Prefs& b, const std::set<int>& drop) {
  Prefs out;
  for (int c : b)
    if (!drop.count(c)) out.push_back(c);
  return out;
}

Decimal iq(const Prefs& b, int c) { return head(b) == c ? kOne : kZero; }

Decimal ag_min(const Prefs& b, int w, const Bounds& bounds) {
  if (head(b) == w) return kOne;
  return transferred_min(b, w, bounds);
}

Decimal ag_max(const Prefs& b, int w, int l, const Bounds& bounds) {
  const int pl = position(b, l);
  if (pl < 0) return kZero;
  const int pw = position(b, w);
  if (pw >= 0 && pw < pl) return kZero;
  if (in(bounds.upper, head(b))) return bounds.upper.at(head(b));
  return kOne;
}

Decimal nl_min(const Prefs& b, int w, const Bounds& bounds, const std::set<int>& eliminated) {
  if (head(without(b, eliminated)) == w) return kOne;
  return transferred_min(b, w, bounds);
}

Decimal iqx(const Prefs& b, int w, const Bounds& bounds, const std::set<int>& eliminated) {
  return nl_min(b, w, bounds, eliminated);
}

Tally evaluate(const stvrla::Assertion& a, const stvrla::Election& e) {
  Tally t;
  const int s = static_cast<int>(a.subject.index);
  const Decimal quota = Decimal::from_int(e.quota());
  const Bounds bounds = plain(a.bounds);
  const std::set<int> elim = plain(a.eliminated);
  switch (a.kind) {
    case AssertionKind::IQ:
      t.lhs = Decimal::from_int(first_tally(e, s));
      t.rhs = quota;
      t.holds = t.lhs >= quota;
      break;
    case AssertionKind::UT:
    case AssertionKind::LT: {
      const std::int64_t tally = first_tally(e, s);
      t.lhs = Decimal::from_int(tally);
      t.rhs = quota;
      t.rhs_den = kOne - *a.bound;
      // tally (1 - bound) against Q, exact since tally is an integer.
      const Decimal scaled = t.rhs_den * tally;
      t.holds = a.kind == AssertionKind::UT ? scaled < quota : scaled > quota;
      break;
    }
    case AssertionKind::AGStar:
    case AssertionKind::NLStar: {
      const int l = static_cast<int>(a.opponent->index);
      Decimal mn, mx;
      for (const auto& bal : e.ballots()) {
        const Prefs p = plain(bal.prefs);
        mn += (a.kind == AssertionKind::AGStar ? ag_min(p, s, bounds) : nl_min(p, s, bounds, elim)) * bal.count;
        mx += ag_max(p, s, l, bounds) * bal.count;
      }
      t.lhs = mn;
      t.rhs = mx;
      t.holds = mn > mx;
      break;
    }
    case AssertionKind::IQX: {
      Decimal total;
      for (const auto& bal : e.ballots()) total += iqx(plain(bal.prefs), s, bounds, elim) * bal.count;
      t.lhs = total;
      t.rhs = quota;
      t.holds = total >= quota;
      break;
    }
  }
  return t;
}

std::vector<double> alpha_p_values(const std::vector<double>& x, double u, double population, double eta0, double d,
                                   double eps) {
  std::vector<double> p(x.size());
  double running_sum = 0.0;
  double T = 1.0;
  double last = 1.0;
  bool dead = false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double j = static_cast<double>(k + 1);
    const double mu = (population / 2.0 - running_sum) / (population - j + 1.0);
    if (dead || mu <= 0.0) {
      dead = true;
      last = 0.0;
    } else if (mu < u) {
      double eta = (d * eta0 + running_sum) / (d + j - 1.0);
      if (eta < mu + eps) eta = mu + eps;
      if (eta > u - eps) eta = u - eps;
      const double factor = (x[k] * eta / mu + (u - x[k]) * (u - eta) / (u - mu)) / u;
      T = T * factor;
      last = 1.0 / T < 1.0 ? 1.0 / T : 1.0;
    }
    p[k] = last;
    running_sum += x[k];
  }
  return p;
}

stvrla::Election random_election(std::mt19937_64& rng, int max_candidates, int max_types, int max_count, int seats) {
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int nc = pick(std::max(3, seats + 1), std::max(max_candidates, seats + 1));
  std::vector<std::string> names;
  for (int i = 0; i < nc; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
  std::vector<stvrla::Ballot> ballots;
  const int types = pick(1, max_types);
  std::vector<std::uint32_t> order(static_cast<std::size_t>(nc));
  for (int t = 0; t < types; ++t) {
    std::iota(order.begin(), order.end(), 0U);
    std::shuffle(order.begin(), order.end(), rng);
    const int len = pick(1, nc);
    stvrla::Ballot b;
    for (int i = 0; i < len; ++i) b.prefs.push_back(stvrla::CandidateId{order[static_cast<std::size_t>(i)]});
    b.count = pick(1, max_count);
    ballots.push_back(std::move(b));
  }
  return stvrla::Election(names, ballots, seats);
}

stvrla::TransferBounds random_bounds(std::mt19937_64& rng, stvrla::CandidateSet pool, int seats) {
  stvrla::TransferBounds b;
  const std::int64_t cap_k = stvrla::tau_max(seats).raw() / 1'000'000;  // in thousandths
  for (auto c : pool.members()) {
    if (rng() % 2) continue;
    const auto lo = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap_k));
    const auto hi = lo + 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap_k - lo));
    b.lower[c] = Decimal::from_raw(lo * 1'000'000);
    b.upper[c] = Decimal::from_raw(hi * 1'000'000);
  }
  return b;
}

stvrla::Election mutate(std::mt19937_64& rng, const stvrla::Election& e, int spread) {
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<stvrla::Ballot> ballots;
  for (const auto& b : e.ballots()) {
    stvrla::Ballot m = b;
    m.count = std::max<std::int64_t>(0, m.count + pick(-spread, spread));
    if (m.count > 0) ballots.push_back(std::move(m));
  }
  const int nc = static_cast<int>(e.num_candidates());
  while (ballots.empty() || pick(0, 2) == 0) {
    std::vector<std::uint32_t> order(static_cast<std::size_t>(nc));
    std::iota(order.begin(), order.end(), 0U);
    std::shuffle(order.begin(), order.end(), rng);
    stvrla::Ballot b;
    const int len = pick(1, nc);
    for (int i = 0; i < len; ++i) b.prefs.push_back(stvrla::CandidateId{order[static_cast<std::size_t>(i)]});
    b.count = pick(1, std::max(1, spread));
    ballots.push_back(std::move(b));
  }
  return stvrla::Election(e.candidate_names(), ballots, e.seats());
}

std::optional<stvrla::Assertion> random_assertion(std::mt19937_64& rng, const stvrla::Election& e,
                                                  stvrla::AssertionKind kind) {
  using namespace stvrla;
  const auto nc = static_cast<std::uint32_t>(e.num_candidates());
  auto any = [&] { return CandidateId{static_cast<std::uint32_t>(rng() % nc)}; };
  switch (kind) {
    case AssertionKind::IQ: return make_iq(any());
    case AssertionKind::UT:
    case AssertionKind::LT: {
      const auto k = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(tau_max(e.seats()).raw() / 1'000'000));
      const Decimal tau = Decimal::from_raw(k * 1'000'000);
      return kind == AssertionKind::UT ? make_ut(any(), tau) : make_lt(any(), tau);
    }
    default: break;
  }
  const CandidateId w = any();
  CandidateSet pool = e.all_candidates();
  pool.erase(w);
  std::optional<CandidateId> l;
  if (kind != AssertionKind::IQX) {
    auto rest = pool.members();
    l = rest[rng() % rest.size()];
    pool.erase(*l);
  }
  TransferBounds bounds = random_bounds(rng, pool, e.seats());
  CandidateSet eliminated;
  for (CandidateId c : (pool - bounds.domain()).members())
    if (rng() % 2) eliminated.insert(c);
  switch (kind) {
    case AssertionKind::AGStar: return make_ag_star(w, *l, bounds);
    case AssertionKind::NLStar: return make_nl_star(w, *l, bounds, eliminated);
    default: return make_iqx(w, bounds, eliminated);
  }
}

}  // namespace oracle
