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

#include "stvrla/election.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace stvrla {

Election::Election(std::vector<std::string> candidate_names, std::vector<Ballot> ballots, int seats)
    : names_(std::move(candidate_names)), seats_(seats) {
  if (seats_ < 1) throw ValidationError("seats must be at least 1");
  if (names_.empty()) throw ValidationError("no candidates");
  if (names_.size() > kMaxCandidates)
    throw ValidationError("at most " + std::to_string(kMaxCandidates) + " candidates supported");
  if (static_cast<std::size_t>(seats_) >= names_.size())
    throw ValidationError("seats must be fewer than the number of candidates");
  std::set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) throw ValidationError("duplicate candidate name");
  for (const auto& n : names_)
    if (n.empty()) throw ValidationError("empty candidate name");

  std::map<Ranking, std::int64_t> merged;
  for (auto& b : ballots) {
    if (b.prefs.empty()) throw ValidationError("empty ranking");
    if (b.count <= 0) throw ValidationError("ballot count must be positive");
    CandidateSet seen;
    for (CandidateId c : b.prefs) {
      if (c.index >= names_.size()) throw ValidationError("candidate index out of range");
      if (seen.contains(c)) throw ValidationError("duplicate candidate " + names_[c.index] + " in ranking");
      seen.insert(c);
    }
    merged[std::move(b.prefs)] += b.count;
  }
  if (merged.empty()) throw ValidationError("election has no ballots");
  ballots_.reserve(merged.size());
  for (auto& [prefs, count] : merged) {
    total_ += count;
    ballots_.push_back(Ballot{prefs, count});
  }
  quota_ = droop_quota(total_, seats_);
}

std::optional<CandidateId> Election::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return CandidateId{static_cast<std::uint32_t>(i)};
  return std::nullopt;
}

std::int64_t droop_quota(std::int64_t num_ballots, int seats) {
  return num_ballots / (seats + 1) + 1;
}

Ranking projection(std::span<const CandidateId> prefs, CandidateSet keep) {
  Ranking out;
  for (CandidateId c : prefs)
    if (keep.contains(c)) out.push_back(c);
  return out;
}

std::optional<CandidateId> first(std::span<const CandidateId> prefs) {
  if (prefs.empty()) return std::nullopt;
  return prefs.front();
}

Decimal tau_max(int seats) {
  if (seats < 1) throw std::invalid_argument("seats must be at least 1");
  return Decimal::ratio_floor(seats, seats + 1);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Election parse_text(std::string_view content, std::optional<int> seats_override) {
  std::vector<std::string> names;
  std::map<std::string, CandidateId, std::less<>> index;
  std::optional<int> seats;
  std::vector<Ballot> ballots;
  bool have_candidates = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto nl = content.find('\n', start);
    std::string_view raw = content.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.starts_with("candidates:")) {
      if (have_candidates) throw ParseError(line_no, "repeated candidates line");
      for (auto name : split(line.substr(11), ',')) {
        if (name.empty()) throw ParseError(line_no, "empty candidate name");
        if (index.contains(name)) throw ParseError(line_no, "duplicate candidate " + std::string(name));
        index.emplace(std::string(name), CandidateId{static_cast<std::uint32_t>(names.size())});
        names.emplace_back(name);
      }
      have_candidates = true;
      continue;
    }
    if (line.starts_with("seats:")) {
      auto v = to_int(trim(line.substr(6)));
      if (!v || *v < 1) throw ParseError(line_no, "seats must be a positive integer");
      seats = static_cast<int>(*v);
      continue;
    }
    if (!have_candidates) throw ParseError(line_no, "ranking before candidates line");

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<count> : <names>'");
    auto count = to_int(trim(line.substr(0, colon)));
    if (!count || *count <= 0) throw ParseError(line_no, "ballot count must be a positive integer");
    Ballot b;
    b.count = *count;
    CandidateSet seen;
    for (auto name : split(line.substr(colon + 1), ',')) {
      if (name.empty()) throw ParseError(line_no, "empty preference");
      auto it = index.find(name);
      if (it == index.end()) throw ParseError(line_no, "unknown candidate " + std::string(name));
      if (seen.contains(it->second))
        throw ValidationError("line " + std::to_string(line_no) + ": duplicate candidate " +
                              std::string(name) + " in ranking");
      seen.insert(it->second);
      b.prefs.push_back(it->second);
    }
    ballots.push_back(std::move(b));
  }
  if (!have_candidates) throw ValidationError("missing candidates line");
  if (seats_override) seats = seats_override;
  if (!seats) throw ValidationError("number of seats not given");
  return Election(std::move(names), std::move(ballots), *seats);
}

Election parse_json(std::string_view content, std::optional<int> seats_override) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  try {
    auto names = doc.at("candidates").get<std::vector<std::string>>();
    std::optional<int> seats = seats_override;
    if (!seats && doc.contains("seats")) seats = doc.at("seats").get<int>();
    if (!seats) throw ValidationError("number of seats not given");
    std::vector<Ballot> ballots;
    for (const auto& jb : doc.at("ballots")) {
      Ballot b;
      b.count = jb.at("count").get<std::int64_t>();
      for (const auto& name : jb.at("prefs")) {
        const auto n = name.get<std::string>();
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) throw ValidationError("unknown candidate " + n);
        b.prefs.push_back(CandidateId{static_cast<std::uint32_t>(it - names.begin())});
      }
      ballots.push_back(std::move(b));
    }
    return Election(std::move(names), std::move(ballots), *seats);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad election JSON: ") + e.what());
  }
}

}  // namespace

Election parse_election(std::string_view content, std::optional<int> seats) {
  if (seats && *seats < 1) throw ValidationError("seats must be at least 1");
  auto pos = content.find_first_not_of(" \t\r\n");
  if (pos != std::string_view::npos && content[pos] == '{') return parse_json(content, seats);
  return parse_text(content, seats);
}

Election read_election_file(const std::string& path, std::optional<int> seats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("no such file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_election(ss.str(), seats);
}

std::string to_canonical_text(const Election& election) {
  std::ostringstream out;
  out << "candidates: ";
  for (std::size_t i = 0; i < election.num_candidates(); ++i)
    out << (i ? "," : "") << election.candidate_names()[i];
  out << "\nseats: " << election.seats() << '\n';
  for (const auto& b : election.ballots()) {
    out << b.count << " : ";
    for (std::size_t i = 0; i < b.prefs.size(); ++i) out << (i ? "," : "") << election.name(b.prefs[i]);
    out << '\n';
  }
  return out.str();
}

std::string to_json_text(const Election& election) {
  nlohmann::json doc;
  doc["candidates"] = election.candidate_names();
  doc["seats"] = election.seats();
  auto& arr = doc["ballots"] = nlohmann::json::array();
  for (const auto& b : election.ballots()) {
    nlohmann::json prefs = nlohmann::json::array();
    for (CandidateId c : b.prefs) prefs.push_back(election.name(c));
    arr.push_back({{"count", b.count}, {"prefs", prefs}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace stvrla
