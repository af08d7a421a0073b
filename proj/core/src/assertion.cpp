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

#include "stvrla/assertion.hpp"

#include <cmath>
#include <sstream>

namespace stvrla {

namespace {

const Decimal kOne = Decimal::from_int(1);

std::optional<CandidateId> first_outside(std::span<const CandidateId> prefs, CandidateSet excluded) {
  for (CandidateId c : prefs)
    if (!excluded.contains(c)) return c;
  return std::nullopt;
}

// Second clause shared by every minimum-tally contribution: the ballot sits
// with a first-preference winner in W and its first preference outside W is w,
// so w receives at least the lower bound on that winner's transfer value.
Decimal transfer_in(std::span<const CandidateId> prefs, CandidateId w, const TransferBounds& bounds) {
  if (bounds.empty() || prefs.empty()) return Decimal{};
  auto it = bounds.lower.find(prefs.front());
  if (it == bounds.lower.end()) return Decimal{};
  auto next = first_outside(prefs, bounds.domain());
  return next == w ? it->second : Decimal{};
}

Decimal max_contribution(std::span<const CandidateId> prefs, CandidateId w, CandidateId l,
                         const TransferBounds& bounds) {
  bool l_present = false;
  for (CandidateId c : prefs) {
    if (c == w) return Decimal{};  // w precedes l (or l absent)
    if (c == l) {
      l_present = true;
      break;
    }
  }
  if (!l_present) return Decimal{};
  auto it = bounds.upper.find(prefs.front());
  if (it != bounds.upper.end()) return it->second;
  return kOne;
}

void check_bounds_shape(const TransferBounds& b) {
  if (b.lower.size() != b.upper.size()) throw AssertionError("bound maps must share keys");
  auto lo = b.lower.begin();
  auto hi = b.upper.begin();
  for (; lo != b.lower.end(); ++lo, ++hi) {
    if (lo->first != hi->first) throw AssertionError("bound maps must share keys");
    if (lo->second < Decimal{}) throw AssertionError("negative transfer value lower bound");
    if (!(lo->second < hi->second)) throw AssertionError("lower bound must be below upper bound");
  }
}

void check_unit_interval(Decimal bound) {
  if (bound < Decimal{} || bound >= kOne) throw AssertionError("transfer value bound must lie in [0, 1)");
}

std::string names_of(CandidateSet s, const Election& e) {
  std::string out = "{";
  bool firstc = true;
  for (CandidateId c : s.members()) {
    out += (firstc ? "" : ",") + e.name(c);
    firstc = false;
  }
  return out + "}";
}

}  // namespace

std::string_view to_string(AssertionKind kind) {
  switch (kind) {
    case AssertionKind::IQ: return "IQ";
    case AssertionKind::UT: return "UT";
    case AssertionKind::LT: return "LT";
    case AssertionKind::AGStar: return "AG*";
    case AssertionKind::NLStar: return "NL*";
    case AssertionKind::IQX: return "IQX";
  }
  return "?";
}

std::optional<AssertionKind> parse_assertion_kind(std::string_view text) {
  for (auto k : {AssertionKind::IQ, AssertionKind::UT, AssertionKind::LT, AssertionKind::AGStar,
                 AssertionKind::NLStar, AssertionKind::IQX})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

void TransferBounds::validate(int seats) const {
  check_bounds_shape(*this);
  const Decimal cap = tau_max(seats);
  for (const auto& [c, v] : lower)
    if (v >= cap) throw AssertionError("lower bound must be below tau_max");
  for (const auto& [c, v] : upper)
    if (v <= Decimal{} || v > cap) throw AssertionError("upper bound must lie in (0, tau_max]");
}

Assertion make_iq(CandidateId c) {
  Assertion a;
  a.kind = AssertionKind::IQ;
  a.subject = c;
  return a;
}

Assertion make_ut(CandidateId c, Decimal tau_bar) {
  check_unit_interval(tau_bar);
  Assertion a;
  a.kind = AssertionKind::UT;
  a.subject = c;
  a.bound = tau_bar;
  return a;
}

Assertion make_lt(CandidateId c, Decimal tau) {
  check_unit_interval(tau);
  Assertion a;
  a.kind = AssertionKind::LT;
  a.subject = c;
  a.bound = tau;
  return a;
}

Assertion make_ag_star(CandidateId w, CandidateId l, TransferBounds bounds) {
  check_bounds_shape(bounds);
  const CandidateSet W = bounds.domain();
  if (w == l) throw AssertionError("AG* needs distinct candidates");
  if (W.contains(w) || W.contains(l)) throw AssertionError("AG* candidates must lie outside W");
  Assertion a;
  a.kind = AssertionKind::AGStar;
  a.subject = w;
  a.opponent = l;
  a.bounds = std::move(bounds);
  return a;
}

Assertion make_nl_star(CandidateId w, CandidateId l, TransferBounds bounds, CandidateSet eliminated) {
  Assertion a = make_ag_star(w, l, std::move(bounds));
  if (eliminated.contains(w) || eliminated.contains(l) || !(eliminated & a.bounds.domain()).empty())
    throw AssertionError("O* must exclude w, l and W");
  a.kind = AssertionKind::NLStar;
  a.eliminated = eliminated;
  return a;
}

Assertion make_iqx(CandidateId w, TransferBounds bounds, CandidateSet eliminated) {
  check_bounds_shape(bounds);
  const CandidateSet W = bounds.domain();
  if (W.contains(w)) throw AssertionError("IQX subject must lie outside W");
  if (eliminated.contains(w) || !(eliminated & W).empty()) throw AssertionError("O* must exclude w and W");
  Assertion a;
  a.kind = AssertionKind::IQX;
  a.subject = w;
  a.bounds = std::move(bounds);
  a.eliminated = eliminated;
  return a;
}

std::uint64_t stable_hash(const Assertion& a) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(a.kind));
  mix(a.subject.index);
  mix(a.opponent ? a.opponent->index : 0xFFFFFFFFULL);
  for (const auto& [c, v] : a.bounds.lower) {
    mix(c.index);
    mix(static_cast<std::uint64_t>(v.raw()));
    mix(static_cast<std::uint64_t>(a.bounds.upper.at(c).raw()));
  }
  mix(a.eliminated.bits());
  mix(a.bound ? static_cast<std::uint64_t>(a.bound->raw()) : ~0ULL);
  return h;
}

std::string describe(const Assertion& a, const Election& e) {
  std::ostringstream out;
  out << to_string(a.kind) << '(' << e.name(a.subject);
  if (a.opponent) out << ", " << e.name(*a.opponent);
  if (a.bound) out << ", " << a.bound->to_string();
  if (!a.bounds.empty()) {
    out << " | W=" << names_of(a.bounds.domain(), e) << " lo={";
    bool firstc = true;
    for (const auto& [c, v] : a.bounds.lower) {
      out << (firstc ? "" : ",") << e.name(c) << ':' << v.to_string();
      firstc = false;
    }
    out << "} hi={";
    firstc = true;
    for (const auto& [c, v] : a.bounds.upper) {
      out << (firstc ? "" : ",") << e.name(c) << ':' << v.to_string();
      firstc = false;
    }
    out << '}';
  }
  if (a.kind == AssertionKind::NLStar || a.kind == AssertionKind::IQX)
    out << (a.bounds.empty() ? " | " : " ") << "O*=" << names_of(a.eliminated, e);
  out << ')';
  return out.str();
}

int score_iq(std::span<const CandidateId> prefs, CandidateId c) {
  return !prefs.empty() && prefs.front() == c ? 1 : 0;
}

Contribution score_ag_star(std::span<const CandidateId> prefs, CandidateId w, CandidateId l,
                           const TransferBounds& bounds) {
  Contribution out;
  out.min = score_iq(prefs, w) ? kOne : transfer_in(prefs, w, bounds);
  out.max = max_contribution(prefs, w, l, bounds);
  return out;
}

Contribution score_nl_star(std::span<const CandidateId> prefs, CandidateId w, CandidateId l,
                           const TransferBounds& bounds, CandidateSet eliminated) {
  Contribution out;
  out.min = first_outside(prefs, eliminated) == w ? kOne : transfer_in(prefs, w, bounds);
  out.max = max_contribution(prefs, w, l, bounds);
  return out;
}

Decimal score_iqx(std::span<const CandidateId> prefs, CandidateId w, const TransferBounds& bounds,
                  CandidateSet eliminated) {
  return first_outside(prefs, eliminated) == w ? kOne : transfer_in(prefs, w, bounds);
}

Threshold ut_threshold(std::int64_t quota, Decimal tau_bar) {
  if (tau_bar < Decimal{} || tau_bar >= kOne) throw std::domain_error("transfer value bound must lie in [0, 1)");
  return Threshold{Decimal::from_int(quota), kOne - tau_bar};
}

Threshold lt_threshold(std::int64_t quota, Decimal tau_lo) { return ut_threshold(quota, tau_lo); }

AssertionTally evaluate(const Assertion& a, const Election& election) {
  AssertionTally t;
  const auto ballots = election.ballots();
  const Decimal quota = Decimal::from_int(election.quota());
  switch (a.kind) {
    case AssertionKind::IQ:
    case AssertionKind::UT:
    case AssertionKind::LT: {
      std::int64_t tally = 0;
      for (const auto& b : ballots) tally += score_iq(b.prefs, a.subject) * b.count;
      t.lhs = Decimal::from_int(tally);
      if (a.kind == AssertionKind::IQ) {
        t.rhs = Threshold{quota};
        t.holds = t.lhs >= quota;
      } else if (a.kind == AssertionKind::UT) {
        t.rhs = ut_threshold(election.quota(), *a.bound);
        t.holds = compare_products(t.lhs, t.rhs.den, t.rhs.num, kOne) < 0;
      } else {
        t.rhs = lt_threshold(election.quota(), *a.bound);
        t.holds = compare_products(t.lhs, t.rhs.den, t.rhs.num, kOne) > 0;
      }
      return t;
    }
    case AssertionKind::AGStar:
    case AssertionKind::NLStar: {
      Decimal mn;
      Decimal mx;
      for (const auto& b : ballots) {
        Contribution c = a.kind == AssertionKind::AGStar
                             ? score_ag_star(b.prefs, a.subject, *a.opponent, a.bounds)
                             : score_nl_star(b.prefs, a.subject, *a.opponent, a.bounds, a.eliminated);
        mn += c.min * b.count;
        mx += c.max * b.count;
      }
      t.lhs = mn;
      t.rhs = Threshold{mx};
      t.holds = mn > mx;
      return t;
    }
    case AssertionKind::IQX: {
      Decimal total;
      for (const auto& b : ballots) total += score_iqx(b.prefs, a.subject, a.bounds, a.eliminated) * b.count;
      t.lhs = total;
      t.rhs = Threshold{quota};
      t.holds = total >= quota;
      return t;
    }
  }
  return t;
}

Decimal raw_score(const Assertion& a, std::span<const CandidateId> prefs) {
  switch (a.kind) {
    case AssertionKind::IQ:
    case AssertionKind::LT: return Decimal::from_int(score_iq(prefs, a.subject));
    case AssertionKind::UT: return Decimal::from_int(1 - score_iq(prefs, a.subject));
    case AssertionKind::AGStar: {
      auto c = score_ag_star(prefs, a.subject, *a.opponent, a.bounds);
      return c.min - c.max;
    }
    case AssertionKind::NLStar: {
      auto c = score_nl_star(prefs, a.subject, *a.opponent, a.bounds, a.eliminated);
      return c.min - c.max;
    }
    case AssertionKind::IQX: return score_iqx(prefs, a.subject, a.bounds, a.eliminated);
  }
  return Decimal{};
}

Assorter::Assorter(std::vector<Decimal> raw, std::span<const Ballot> ballots, Decimal g_lo, Decimal g_hi,
                   Threshold threshold, std::int64_t population)
    : raw_(std::move(raw)), g_lo_(g_lo), g_hi_(g_hi), threshold_(threshold), population_(population) {
  using i128 = __int128;
  if (threshold_.den <= Decimal{}) throw AssorterError("threshold denominator must be positive");
  // 2 (T/n - g_lo), scaled by n * den * S^2.
  denominator_ = 2 * (static_cast<i128>(threshold_.num.raw()) * Decimal::kScale -
                      static_cast<i128>(population_) * g_lo_.raw() * threshold_.den.raw());
  if (denominator_ <= 0) throw AssorterError("assertion threshold does not exceed the score floor");

  Decimal sum;
  for (std::size_t i = 0; i < raw_.size(); ++i) sum += raw_[i] * ballots[i].count;
  holds_ = compare_products(sum, threshold_.den, threshold_.num, kOne) > 0;
  const i128 num = (static_cast<i128>(sum.raw()) - static_cast<i128>(population_) * g_lo_.raw()) *
                   threshold_.den.raw();
  mean_ = static_cast<double>(static_cast<long double>(num) / static_cast<long double>(denominator_));
  // Keep the floating mean consistent with the exact comparison at the boundary.
  if (holds_ && mean_ <= 0.5) mean_ = std::nextafter(0.5, 1.0);
  if (!holds_ && mean_ > 0.5) mean_ = 0.5;
}

double Assorter::score(Decimal g) const {
  using i128 = __int128;
  const i128 num = (static_cast<i128>(g.raw()) - g_lo_.raw()) * population_ * threshold_.den.raw();
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(denominator_));
}

std::vector<std::int64_t> Assorter::signature() const {
  std::vector<std::int64_t> sig;
  sig.reserve(raw_.size() + 5);
  for (Decimal g : raw_) sig.push_back(g.raw());
  sig.push_back(g_lo_.raw());
  sig.push_back(g_hi_.raw());
  sig.push_back(threshold_.num.raw());
  sig.push_back(threshold_.den.raw());
  sig.push_back(population_);
  return sig;
}

std::uint64_t Assorter::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t v : signature()) {
    for (int i = 0; i < 8; ++i) {
      h ^= (static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

Assorter to_assorter(const Assertion& a, const Election& election) {
  const auto ballots = election.ballots();
  const std::int64_t n = election.total_ballots();
  std::vector<Decimal> raw;
  raw.reserve(ballots.size());
  bool integral = true;
  for (const auto& b : ballots) {
    raw.push_back(raw_score(a, b.prefs));
    integral = integral && raw.back().is_integer();
  }
  const Decimal quota = Decimal::from_int(election.quota());
  const Decimal two = Decimal::from_int(2);
  Decimal g_lo;
  Threshold threshold;
  switch (a.kind) {
    case AssertionKind::IQ:
      threshold = Threshold{Decimal::from_int(2 * election.quota() - 1), two};
      break;
    case AssertionKind::IQX:
      // "At least a quota" becomes a strict test against Q - 1/2 when every
      // contribution is integral, and against Q otherwise.
      threshold = integral ? Threshold{Decimal::from_int(2 * election.quota() - 1), two} : Threshold{quota};
      break;
    case AssertionKind::LT:
      threshold = lt_threshold(election.quota(), *a.bound);
      break;
    case AssertionKind::UT: {
      // sum (1 - iq) > n - Q/(1 - tau_bar)
      const Decimal one_minus = kOne - *a.bound;
      threshold = Threshold{one_minus * n - quota, one_minus};
      break;
    }
    case AssertionKind::AGStar:
    case AssertionKind::NLStar:
      g_lo = Decimal::from_int(-1);
      threshold = Threshold{Decimal{}};
      break;
  }
  return Assorter(std::move(raw), ballots, g_lo, kOne, threshold, n);
}

}  // namespace stvrla
