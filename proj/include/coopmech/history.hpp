// Copyright 2026 The coopmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coopmech {

// One realized play of the base game. Participants are listed in seat
// order; in fixed-partner episodes they are the seat indices, in pooled
// reputation episodes they are population indices.
struct HistoryRecord {
  int round = 0;  // 1-based
  std::vector<int> participants;
  std::vector<int> actions;
  std::vector<double> payoffs;

  int seat_of(int agent) const {
    auto it = std::find(participants.begin(), participants.end(), agent);
    return it == participants.end() ? -1 : static_cast<int>(it - participants.begin());
  }
  friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

// Entry of a reputation history: a record seen from `subject`'s side, and
// for each counterparty the counterparty's own history before that match.
struct HistoryNode;
struct HistoryBranch {
  int agent = 0;
  std::vector<HistoryNode> entries;  // newest first
};
struct HistoryNode {
  int subject = 0;
  HistoryRecord record;
  std::vector<HistoryBranch> branches;
};

struct AgentHistory {
  int agent = 0;
  std::vector<HistoryNode> entries;  // newest first
};

// What an agent sees before acting in a multi-round mechanism.
struct HistoryView {
  int rounds_played = 0;
  // Repetition: the last k rounds of the current matchup, newest first.
  std::vector<HistoryRecord> recent;
  // Reputation: the viewer's own history followed by each co-player's.
  int viewer = -1;
  std::vector<int> co_players;
  std::vector<AgentHistory> sections;
};

// Pooled interaction log of a reputation episode.
class ReputationLog {
 public:
  explicit ReputationLog(int population) : by_agent_(population) {}

  int population() const { return static_cast<int>(by_agent_.size()); }
  const std::vector<HistoryRecord>& records() const { return records_; }
  const std::vector<std::vector<std::vector<int>>>& matchings() const { return matchings_; }

  void add_round(std::vector<std::vector<int>> groups) { matchings_.push_back(std::move(groups)); }

  void add(HistoryRecord r) {
    if (!records_.empty() && r.round < records_.back().round)
      throw std::invalid_argument("ReputationLog: rounds must not decrease");
    const std::size_t idx = records_.size();
    for (int a : r.participants) by_agent_.at(a).push_back(idx);
    records_.push_back(std::move(r));
  }

  // Records of `agent` with first_round <= round < before_round, newest first.
  std::vector<const HistoryRecord*> window(int agent, int first_round, int before_round) const {
    std::vector<const HistoryRecord*> out;
    const auto& idx = by_agent_.at(agent);
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      const HistoryRecord& r = records_[*it];
      if (r.round >= before_round) continue;
      if (r.round < first_round) break;
      out.push_back(&r);
    }
    return out;
  }

 private:
  std::vector<HistoryRecord> records_;
  std::vector<std::vector<std::size_t>> by_agent_;
  std::vector<std::vector<std::vector<int>>> matchings_;
};

// Repetition: the last `window` records of the matchup, newest first.
inline HistoryView repetition_view(const std::vector<HistoryRecord>& rounds, int window) {
  HistoryView v;
  v.rounds_played = static_cast<int>(rounds.size());
  const int take = std::min<int>(window, static_cast<int>(rounds.size()));
  for (int i = 0; i < take; ++i) v.recent.push_back(rounds[rounds.size() - 1 - i]);
  return v;
}

namespace detail {

using PathKey = std::pair<int, int>;  // (agent, round) whose history is expanded

inline std::vector<HistoryNode> expand_history(const ReputationLog& log, int subject, int first_round,
                                               int before_round, bool higher_order,
                                               std::set<PathKey>& path) {
  std::vector<HistoryNode> out;
  for (const HistoryRecord* r : log.window(subject, first_round, before_round)) {
    HistoryNode node{subject, *r, {}};
    if (higher_order) {
      for (int other : r->participants) {
        if (other == subject) continue;
        PathKey key{other, r->round};
        if (path.count(key)) continue;
        path.insert(key);
        auto entries = expand_history(log, other, first_round, r->round, true, path);
        path.erase(key);
        if (!entries.empty()) node.branches.push_back({other, std::move(entries)});
      }
    }
    out.push_back(std::move(node));
  }
  return out;
}

}  // namespace detail

// Reputation view for `viewer` before playing `current_round` against
// `co_players`. First-order views list each agent's own last-k records;
// higher-order views also expand every counterparty's history before that
// match, never reaching back further than k rounds before the current one.
inline HistoryView reputation_view(const ReputationLog& log, int viewer, const std::vector<int>& co_players,
                                   int current_round, int window, bool higher_order) {
  if (viewer < 0 || viewer >= log.population())
    throw std::invalid_argument("reputation_view: unknown agent " + std::to_string(viewer));
  HistoryView v;
  v.rounds_played = current_round - 1;
  v.viewer = viewer;
  v.co_players = co_players;
  const int first_round = current_round - window;
  std::vector<int> subjects{viewer};
  subjects.insert(subjects.end(), co_players.begin(), co_players.end());
  for (int s : subjects) {
    if (s < 0 || s >= log.population())
      throw std::invalid_argument("reputation_view: unknown agent " + std::to_string(s));
    std::set<detail::PathKey> path{{s, current_round}};
    v.sections.push_back({s, detail::expand_history(log, s, first_round, current_round, higher_order, path)});
  }
  return v;
}

// Every distinct record reachable in a view, in chronological order.
inline std::vector<HistoryRecord> flatten_view(const HistoryView& view) {
  std::map<std::pair<int, std::vector<int>>, HistoryRecord> seen;
  auto add = [&](const HistoryRecord& r) { seen.emplace(std::make_pair(r.round, r.participants), r); };
  for (const auto& r : view.recent) add(r);
  std::vector<const HistoryNode*> stack;
  for (const auto& s : view.sections)
    for (const auto& e : s.entries) stack.push_back(&e);
  while (!stack.empty()) {
    const HistoryNode* n = stack.back();
    stack.pop_back();
    add(n->record);
    for (const auto& b : n->branches)
      for (const auto& e : b.entries) stack.push_back(&e);
  }
  std::vector<HistoryRecord> out;
  for (auto& [k, r] : seen) out.push_back(std::move(r));
  return out;
}

}  // namespace coopmech
