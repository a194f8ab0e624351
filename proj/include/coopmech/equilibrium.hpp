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
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopmech/game.hpp"

namespace coopmech {

enum class DominanceMode { strict, weak };

inline const char* to_string(DominanceMode m) { return m == DominanceMode::strict ? "strict" : "weak"; }

struct Elimination {
  int player;
  int eliminated;
  int dominator;
  DominanceMode mode;
};

struct EliminationTrace {
  std::vector<Elimination> rounds;
  std::vector<std::vector<int>> surviving;  // per player, ascending
};

// Scan order for iterated elimination. Empty vectors mean the canonical
// lexicographic order (lowest player, then lowest action).
struct ScanOrder {
  std::vector<int> players;
  std::vector<std::vector<int>> actions;
};

namespace detail {

// Visits every opponent profile drawn from `allowed` with player's slot
// fixed at `action`.
template <typename F>
bool all_opponent_profiles(const Game& game, int player,
                           const std::vector<std::vector<int>>& allowed, F&& f) {
  const int n = game.num_players();
  std::vector<std::size_t> cursor(n, 0);
  ActionProfile a(n);
  while (true) {
    for (int p = 0; p < n; ++p) a[p] = p == player ? 0 : allowed[p][cursor[p]];
    if (!f(a)) return false;
    int p = n - 1;
    for (; p >= 0; --p) {
      if (p == player) continue;
      if (++cursor[p] < allowed[p].size()) break;
      cursor[p] = 0;
    }
    if (p < 0) return true;
  }
}

inline std::vector<std::vector<int>> all_actions(const Game& game) {
  std::vector<std::vector<int>> out(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    out[p].resize(game.num_actions(p));
    std::iota(out[p].begin(), out[p].end(), 0);
  }
  return out;
}

inline bool dominates_given(const Game& game, int player, int a, int b, DominanceMode mode,
                            const std::vector<std::vector<int>>& allowed) {
  bool somewhere_better = false;
  bool ok = all_opponent_profiles(game, player, allowed, [&](ActionProfile prof) {
    prof[player] = a;
    const double ua = game.payoff(prof, player);
    prof[player] = b;
    const double ub = game.payoff(prof, player);
    if (ua > ub + kPayoffTol) {
      somewhere_better = true;
      return true;
    }
    if (mode == DominanceMode::strict) return false;
    return ua >= ub - kPayoffTol;
  });
  return ok && (mode == DominanceMode::strict || somewhere_better);
}

inline void check_player_action(const Game& game, int player, int action) {
  if (player < 0 || player >= game.num_players())
    throw std::out_of_range("player index out of range");
  if (action < 0 || action >= game.num_actions(player))
    throw std::out_of_range("action index out of range");
}

}  // namespace detail

// Does action a dominate action b for player?
inline bool dominates(const Game& game, int player, int a, int b, DominanceMode mode) {
  detail::check_player_action(game, player, a);
  detail::check_player_action(game, player, b);
  if (a == b) throw std::invalid_argument("dominates: actions must be distinct");
  return detail::dominates_given(game, player, a, b, mode, detail::all_actions(game));
}

// Removes one dominated action per round until no action is dominated
// against the surviving opponent actions. After each removal the scan
// restarts from the first player in the scan order. The reported dominator
// is the first dominating action in that order.
inline EliminationTrace iterated_elimination(const Game& game, DominanceMode mode,
                                             const ScanOrder& order = {}) {
  const int n = game.num_players();
  std::vector<int> players = order.players;
  if (players.empty()) {
    players.resize(n);
    std::iota(players.begin(), players.end(), 0);
  }
  std::vector<std::vector<int>> action_order = order.actions;
  if (action_order.empty()) action_order = detail::all_actions(game);

  EliminationTrace trace;
  trace.surviving = detail::all_actions(game);
  auto alive = [&](int p, int a) {
    const auto& s = trace.surviving[p];
    return std::find(s.begin(), s.end(), a) != s.end();
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int p : players) {
      if (trace.surviving[p].size() < 2) continue;
      for (int b : action_order[p]) {
        if (!alive(p, b)) continue;
        for (int a : action_order[p]) {
          if (a == b || !alive(p, a)) continue;
          if (detail::dominates_given(game, p, a, b, mode, trace.surviving)) {
            trace.rounds.push_back({p, b, a, mode});
            auto& s = trace.surviving[p];
            s.erase(std::find(s.begin(), s.end(), b));
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
      if (changed) break;
    }
  }
  return trace;
}

// Largest gain any player gets from a unilateral pure deviation.
inline double max_deviation_gain(const Game& game, const ActionProfile& profile) {
  if (!game.is_valid_profile(profile)) throw std::invalid_argument("invalid action profile");
  double best = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < game.num_players(); ++p) {
    const double base = game.payoff(profile, p);
    ActionProfile dev = profile;
    for (int a = 0; a < game.num_actions(p); ++a) {
      if (a == profile[p]) continue;
      dev[p] = a;
      best = std::max(best, game.payoff(dev, p) - base);
    }
  }
  return best;
}

inline bool is_pure_nash(const Game& game, const ActionProfile& profile) {
  return !(max_deviation_gain(game, profile) > kPayoffTol);
}

// Nash check for a mixed profile against pure deviations.
inline bool is_nash(const Game& game, const StrategyProfile& profile) {
  const auto base = expected_utility(game, profile);
  for (int p = 0; p < game.num_players(); ++p) {
    StrategyProfile dev = profile;
    for (int a = 0; a < game.num_actions(p); ++a) {
      dev[p] = MixedAction::pure(game.num_actions(p), a);
      if (expected_utility(game, dev)[p] > base[p] + kPayoffTol) return false;
    }
  }
  return true;
}

// Each player's action weakly dominates every alternative of that player.
inline bool is_weakly_dominant_profile(const Game& game, const ActionProfile& profile) {
  if (!game.is_valid_profile(profile)) throw std::invalid_argument("invalid action profile");
  for (int p = 0; p < game.num_players(); ++p)
    for (int b = 0; b < game.num_actions(p); ++b)
      if (b != profile[p] && !dominates(game, p, profile[p], b, DominanceMode::weak)) return false;
  return true;
}

inline constexpr std::size_t kMaxEnumeratedProfiles = 1'000'000;

inline std::vector<ActionProfile> enumerate_pure_nash(const Game& game) {
  if (game.num_profiles() > kMaxEnumeratedProfiles)
    throw std::length_error("enumerate_pure_nash: game exceeds " +
                            std::to_string(kMaxEnumeratedProfiles) + " profiles");
  std::vector<ActionProfile> out;
  for (std::size_t i = 0; i < game.num_profiles(); ++i) {
    ActionProfile a = game.profile_at(i);
    if (is_pure_nash(game, a)) out.push_back(std::move(a));
  }
  return out;
}

// Certificate that grim trigger (play coop until any deviation, then the
// punishment profile forever) is subgame perfect for continuation
// probability delta >= delta_threshold. A deviation gains at most g_i once
// and loses surplus_i in every later round, so player i is deterred iff
// g_i <= delta * surplus_i / (1 - delta).
struct SpeCertificate {
  double delta_threshold = 0.0;
  std::vector<double> deviation_gain;  // g_i, clamped at 0
  std::vector<double> surplus;         // u_i(coop) - u_i(punish)
  // Threshold from the coarse bound M = payoff spread + 1 in place of g_i.
  double loose_threshold = 0.0;

  bool verdict(double delta) const { return delta >= delta_threshold; }
};

inline SpeCertificate grim_trigger_threshold(const Game& game, const ActionProfile& coop,
                                             const StrategyProfile& punish) {
  if (!game.is_valid_profile(coop)) throw std::invalid_argument("grim trigger: invalid coop profile");
  check_strategy_profile(game, punish);
  if (!is_nash(game, punish))
    throw std::invalid_argument("grim trigger: punishment profile is not a Nash equilibrium");
  const auto punish_u = expected_utility(game, punish);
  const double loose_gain = game.payoff_spread() + 1.0;

  SpeCertificate cert;
  for (int p = 0; p < game.num_players(); ++p) {
    const double u_coop = game.payoff(coop, p);
    const double surplus = u_coop - punish_u[p];
    if (!(surplus > kPayoffTol))
      throw std::invalid_argument("grim trigger: coop profile does not Pareto-dominate punishment for player " +
                                  std::to_string(p));
    double gain = 0.0;
    ActionProfile dev = coop;
    for (int a = 0; a < game.num_actions(p); ++a) {
      if (a == coop[p]) continue;
      dev[p] = a;
      gain = std::max(gain, game.payoff(dev, p) - u_coop);
    }
    cert.deviation_gain.push_back(gain);
    cert.surplus.push_back(surplus);
    cert.delta_threshold = std::max(cert.delta_threshold, gain / (gain + surplus));
    cert.loose_threshold = std::max(cert.loose_threshold, loose_gain / (loose_gain + surplus));
  }
  return cert;
}

inline nlohmann::json to_json(const EliminationTrace& t) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& e : t.rounds)
    rounds.push_back({{"player", e.player},
                      {"eliminated", action_label(e.eliminated)},
                      {"dominator", action_label(e.dominator)},
                      {"mode", to_string(e.mode)}});
  nlohmann::json surviving = nlohmann::json::array();
  for (const auto& s : t.surviving) {
    nlohmann::json labels = nlohmann::json::array();
    for (int a : s) labels.push_back(action_label(a));
    surviving.push_back(labels);
  }
  return {{"rounds", rounds}, {"surviving", surviving}};
}

inline nlohmann::json to_json(const SpeCertificate& c, std::optional<double> delta = std::nullopt) {
  nlohmann::json j = {{"delta_threshold", c.delta_threshold},
                      {"deviation_gain", c.deviation_gain},
                      {"surplus", c.surplus},
                      {"loose_threshold", c.loose_threshold}};
  if (delta) {
    j["delta"] = *delta;
    j["verdict"] = c.verdict(*delta);
  }
  return j;
}

}  // namespace coopmech
