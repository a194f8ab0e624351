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
#include <memory>
#include <string>
#include <vector>

#include "coopmech/decision.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"
#include "coopmech/history.hpp"
#include "coopmech/mechanism.hpp"
#include "coopmech/rng.hpp"

namespace coopmech {

// Phases a variant asks agents for, in pipeline order.
inline std::vector<Phase> variant_phases(Variant v) {
  switch (v) {
    case Variant::mediation: return {Phase::propose_mediator, Phase::vote, Phase::act};
    case Variant::contracting: return {Phase::propose_contract, Phase::vote, Phase::sign, Phase::act};
    default: return {Phase::act};
  }
}

namespace detail {

inline ContractSpec demo_contract(const Game& g, int first, int second) {
  ContractSpec c;
  c.transfers.assign(g.num_actions(0), 0);
  c.transfers[0] = first;
  if (c.transfers.size() > 1) c.transfers[1] = second;
  return c;
}

inline HistoryRecord demo_record(const Game& g, int round, std::vector<int> participants, ActionProfile actions) {
  auto u = g.payoffs(actions);
  return {round, std::move(participants), std::move(actions), {u.begin(), u.end()}};
}

// Repetition history with four rounds played.
inline HistoryView demo_repetition_view(const Game& g, int window) {
  const int n = g.num_players();
  const int c = g.coop_profile()[0], d = g.defect_profile()[0];
  std::vector<int> seats(n);
  for (int s = 0; s < n; ++s) seats[s] = s;
  std::vector<HistoryRecord> rounds;
  auto profile = [&](std::vector<int> pattern) {
    ActionProfile a(n);
    for (int s = 0; s < n; ++s) a[s] = pattern[s % pattern.size()] ? d : c;
    return a;
  };
  rounds.push_back(demo_record(g, 1, seats, profile({0})));
  rounds.push_back(demo_record(g, 2, seats, profile({1, 0, 0})));
  rounds.push_back(demo_record(g, 3, seats, profile({0, 1, 0})));
  rounds.push_back(demo_record(g, 4, seats, profile({0, 1, 0})));
  return repetition_view(rounds, window);
}

// Pooled log for ten rounds played. For two-player games the last three
// rounds around the viewer (agent 0) and its co-player (agent 9) follow a
// fixed story; other matches are filler.
inline ReputationLog demo_reputation_log(const Game& g) {
  const int n = g.num_players();
  const int c = g.coop_profile()[0], d = g.defect_profile()[0];
  const int pop = 10 * n;
  ReputationLog log(pop);
  if (n == 2) {
    for (int t = 1; t <= 7; ++t) log.add(demo_record(g, t, {10 + t, 11 + t}, {c, c}));
    log.add(demo_record(g, 8, {0, 7}, {c, d}));
    log.add(demo_record(g, 8, {9, 8}, {d, c}));
    log.add(demo_record(g, 8, {5, 6}, {d, d}));
    log.add(demo_record(g, 9, {0, 5}, {d, d}));
    log.add(demo_record(g, 9, {9, 8}, {c, c}));
    log.add(demo_record(g, 10, {0, 9}, {c, c}));
    return log;
  }
  Rng rng(7);
  std::vector<int> order(pop);
  for (int i = 0; i < pop; ++i) order[i] = i;
  for (int t = 1; t <= 10; ++t) {
    rng.shuffle(order);
    for (int gi = 0; gi < pop / n; ++gi) {
      std::vector<int> members(order.begin() + gi * n, order.begin() + (gi + 1) * n);
      ActionProfile a(n);
      for (int s = 0; s < n; ++s) a[s] = (members[s] + t) % 3 == 0 ? d : c;
      log.add(demo_record(g, t, members, a));
    }
  }
  return log;
}

}  // namespace detail

// A representative request for every (variant, phase) pair, used for
// prompt inspection and golden files. For the prisoner's dilemma the
// contents mirror the reference listings; other games get analogous
// placeholder histories and proposals.
inline DecisionRequest demo_request(std::shared_ptr<const Game> game, const MechanismConfig& mechanism, Phase phase,
                                    int seat) {
  const Game& g = *game;
  DecisionRequest r;
  r.game = game;
  r.mechanism = mechanism;
  r.phase = phase;
  r.seat = seat;
  const Variant v = mechanism.variant;
  const auto phases = variant_phases(v);
  if (std::find(phases.begin(), phases.end(), phase) == phases.end())
    throw ConfigError(std::string("phase ") + to_string(phase) + " does not occur under " + to_string(v));
  if (seat < 0 || seat >= g.num_players()) throw ConfigError("seat out of range");
  if ((v == Variant::mediation || v == Variant::contracting) && !g.shares_action_labels())
    throw ConfigError("mediation and contracting need a shared action label set");

  switch (v) {
    case Variant::no_mechanism: break;
    case Variant::repetition: r.history = detail::demo_repetition_view(g, mechanism.window); break;
    case Variant::reputation_minus:
    case Variant::reputation_plus: {
      const ReputationLog log = detail::demo_reputation_log(g);
      const int n = g.num_players();
      const int viewer = 0;
      std::vector<int> co;
      if (n == 2) {
        co.push_back(9);
      } else {
        for (int i = 1; i < n; ++i) co.push_back(i);
      }
      r.history = reputation_view(log, viewer, co, 11, mechanism.window, v == Variant::reputation_plus);
      break;
    }
    case Variant::mediation: {
      const MediatorSpec mu = theorem_mediator(g);
      if (phase == Phase::vote) {
        r.slate = {{0, mu}, {1, mu}};
      } else if (phase == Phase::act) {
        r.selected = Proposal{0, MediatorSpec{std::vector<int>(g.num_players(), g.coop_profile()[0])}};
      }
      break;
    }
    case Variant::contracting: {
      if (phase == Phase::vote) {
        r.slate = {{0, detail::demo_contract(g, -6, 11)}, {1, detail::demo_contract(g, 5, -8)}};
      } else if (phase == Phase::sign) {
        r.selected = Proposal{0, detail::demo_contract(g, -2, 5)};
      } else if (phase == Phase::act) {
        r.selected = Proposal{1, detail::demo_contract(g, 18, -3)};
        r.contract_active = true;
      }
      break;
    }
  }
  r.validate();
  return r;
}

}  // namespace coopmech
