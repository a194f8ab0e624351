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
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coopmech/rng.hpp"

namespace coopmech {

// Generic tolerance for payoff comparisons. Benchmark payoffs are halves and
// integers, so every comparison on them is decided far outside this band.
inline constexpr double kPayoffTol = 1e-9;

using ActionProfile = std::vector<int>;

// Determines how a game's payoff description is phrased in prompts.
enum class GameFamily { generic, prisoners, travelers, public_goods, trust, stag_hunt };

inline std::string action_label(int index) { return "A" + std::to_string(index); }

// A randomized action in integer percentage points.
class MixedAction {
 public:
  MixedAction() = default;
  explicit MixedAction(std::vector<int> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("MixedAction: no actions");
    int sum = 0;
    for (int w : weights_) {
      if (w < 0 || w > 100)
        throw std::invalid_argument("MixedAction: weight outside [0, 100]");
      sum += w;
    }
    if (sum != 100) throw std::invalid_argument("MixedAction: weights must sum to 100");
  }

  static MixedAction pure(int num_actions, int action) {
    if (action < 0 || action >= num_actions)
      throw std::invalid_argument("MixedAction::pure: action out of range");
    std::vector<int> w(num_actions, 0);
    w[action] = 100;
    return MixedAction(std::move(w));
  }

  // As close to uniform as integer percentages allow; the first 100 % m
  // actions carry one extra point.
  static MixedAction uniform(int num_actions) {
    if (num_actions <= 0) throw std::invalid_argument("MixedAction::uniform: no actions");
    std::vector<int> w(num_actions, 100 / num_actions);
    for (int i = 0; i < 100 % num_actions; ++i) ++w[i];
    return MixedAction(std::move(w));
  }

  int size() const { return static_cast<int>(weights_.size()); }
  int weight(int action) const { return weights_.at(action); }
  double probability(int action) const { return weights_.at(action) / 100.0; }
  const std::vector<int>& weights() const { return weights_; }

  // Index of the action carrying all mass, if any.
  std::optional<int> pure_action() const {
    for (int i = 0; i < size(); ++i)
      if (weights_[i] == 100) return i;
    return std::nullopt;
  }

  int sample(Rng& rng) const {
    int r = static_cast<int>(rng.uniform_below(100));
    for (int i = 0; i < size(); ++i) {
      r -= weights_[i];
      if (r < 0) return i;
    }
    return size() - 1;  // unreachable with a valid distribution
  }

  friend bool operator==(const MixedAction&, const MixedAction&) = default;

 private:
  std::vector<int> weights_;
};

using StrategyProfile = std::vector<MixedAction>;

struct PublicGoodsParams {
  int num_players = 3;
  double multiplier = 1.5;
};

// Finite normal-form game with a dense payoff tensor. Profiles are indexed
// row-major with player 0 most significant. Immutable after construction.
class Game {
 public:
  Game(std::string name, std::vector<std::vector<std::string>> actions,
       std::vector<std::vector<double>> payoffs, ActionProfile coop_profile,
       ActionProfile defect_profile, GameFamily family = GameFamily::generic)
      : name_(std::move(name)),
        actions_(std::move(actions)),
        coop_(std::move(coop_profile)),
        defect_(std::move(defect_profile)),
        family_(family) {
    if (actions_.empty()) throw std::invalid_argument("Game: no players");
    num_players_ = static_cast<int>(actions_.size());
    num_profiles_ = 1;
    for (const auto& a : actions_) {
      if (a.empty()) throw std::invalid_argument("Game: player without actions");
      num_profiles_ *= a.size();
    }
    if (payoffs.size() != num_profiles_)
      throw std::invalid_argument("Game: payoff tensor is not total");
    payoffs_.reserve(num_profiles_ * num_players_);
    for (const auto& row : payoffs) {
      if (static_cast<int>(row.size()) != num_players_)
        throw std::invalid_argument("Game: payoff vector has wrong length");
      for (double v : row) {
        if (!std::isfinite(v)) throw std::invalid_argument("Game: non-finite payoff");
        payoffs_.push_back(v);
      }
    }
    check_profile(coop_, "coop_profile");
    check_profile(defect_, "defect_profile");
  }

  const std::string& name() const { return name_; }
  GameFamily family() const { return family_; }
  int num_players() const { return num_players_; }
  int num_actions(int player) const { return static_cast<int>(actions_.at(player).size()); }
  const std::vector<std::string>& actions(int player) const { return actions_.at(player); }
  std::size_t num_profiles() const { return num_profiles_; }
  const ActionProfile& coop_profile() const { return coop_; }
  const ActionProfile& defect_profile() const { return defect_; }

  // Optional per-action annotations shown in prompts ("correspond to the
  // number 2"). Empty when the game has none.
  const std::vector<std::string>& action_notes() const { return notes_; }
  double multiplier() const { return multiplier_; }

  bool is_valid_profile(const ActionProfile& a) const {
    if (static_cast<int>(a.size()) != num_players_) return false;
    for (int p = 0; p < num_players_; ++p)
      if (a[p] < 0 || a[p] >= num_actions(p)) return false;
    return true;
  }

  std::size_t index_of(const ActionProfile& a) const {
    if (!is_valid_profile(a)) throw std::invalid_argument("Game: invalid action profile");
    std::size_t idx = 0;
    for (int p = 0; p < num_players_; ++p) idx = idx * num_actions(p) + a[p];
    return idx;
  }

  ActionProfile profile_at(std::size_t index) const {
    ActionProfile a(num_players_);
    for (int p = num_players_ - 1; p >= 0; --p) {
      a[p] = static_cast<int>(index % num_actions(p));
      index /= num_actions(p);
    }
    return a;
  }

  std::span<const double> payoffs(const ActionProfile& a) const {
    return {payoffs_.data() + index_of(a) * num_players_,
            static_cast<std::size_t>(num_players_)};
  }
  double payoff(const ActionProfile& a, int player) const { return payoffs(a)[player]; }

  // True if every player has the same ordered action labels, which is what
  // mediator plans and contracts are keyed on.
  bool shares_action_labels() const {
    return std::all_of(actions_.begin(), actions_.end(),
                       [&](const auto& a) { return a == actions_.front(); });
  }

  // Largest payoff difference any single player can see across profiles.
  double payoff_spread() const {
    double spread = 0.0;
    for (int p = 0; p < num_players_; ++p) {
      double lo = payoffs_[p], hi = payoffs_[p];
      for (std::size_t i = 0; i < num_profiles_; ++i) {
        lo = std::min(lo, payoffs_[i * num_players_ + p]);
        hi = std::max(hi, payoffs_[i * num_players_ + p]);
      }
      spread = std::max(spread, hi - lo);
    }
    return spread;
  }

  std::vector<std::vector<double>> payoff_rows() const {
    std::vector<std::vector<double>> rows(num_profiles_);
    for (std::size_t i = 0; i < num_profiles_; ++i)
      rows[i].assign(payoffs_.begin() + i * num_players_,
                     payoffs_.begin() + (i + 1) * num_players_);
    return rows;
  }

  Game with_notes(std::vector<std::string> notes) const {
    Game g = *this;
    g.notes_ = std::move(notes);
    return g;
  }
  Game with_multiplier(double m) const {
    Game g = *this;
    g.multiplier_ = m;
    return g;
  }
  Game with_family(GameFamily f) const {
    Game g = *this;
    g.family_ = f;
    return g;
  }

 private:
  void check_profile(const ActionProfile& a, const char* what) const {
    if (!is_valid_profile(a))
      throw std::invalid_argument(std::string("Game: invalid ") + what);
  }

  std::string name_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<double> payoffs_;
  ActionProfile coop_;
  ActionProfile defect_;
  GameFamily family_;
  std::vector<std::string> notes_;
  double multiplier_ = 0.0;
  int num_players_ = 0;
  std::size_t num_profiles_ = 0;
};

namespace detail {

inline std::vector<std::vector<std::string>> labels(int players, int actions) {
  std::vector<std::string> row;
  for (int i = 0; i < actions; ++i) row.push_back(action_label(i));
  return std::vector<std::vector<std::string>>(players, row);
}

}  // namespace detail

inline Game make_prisoners() {
  // A0 = cooperate, A1 = defect.
  return Game("prisoners", detail::labels(2, 2), {{2, 2}, {0, 3}, {3, 0}, {1, 1}},
              {0, 0}, {1, 1}, GameFamily::prisoners);
}

// Price levels $2..$5 as A0..A3. The lower bidder gets min + 2, the higher
// bidder min - 2.
inline Game make_travelers() {
  const int levels = 4;
  std::vector<std::vector<double>> payoffs;
  for (int x = 0; x < levels; ++x) {
    for (int y = 0; y < levels; ++y) {
      const double px = 2 + x, py = 2 + y;
      if (x == y) payoffs.push_back({px, py});
      else if (x < y) payoffs.push_back({px + 2.0, px - 2.0});
      else payoffs.push_back({py - 2.0, py + 2.0});
    }
  }
  std::vector<std::string> notes;
  for (int x = 0; x < levels; ++x) notes.push_back("correspond to the number " + std::to_string(2 + x));
  return Game("travelers", detail::labels(2, levels), std::move(payoffs), {levels - 1, levels - 1},
              {0, 0}, GameFamily::travelers)
      .with_notes(std::move(notes));
}

// A0 = contribute. With k contributors a contributor receives alpha*k/n and
// a free rider 1 + alpha*k/n.
inline Game make_public_goods(const PublicGoodsParams& params = {}) {
  const int n = params.num_players;
  const double alpha = params.multiplier;
  if (n < 2) throw std::invalid_argument("public_goods: need at least 2 players");
  if (!(alpha > 1.0 && alpha < n))
    throw std::invalid_argument("public_goods: multiplier must lie in (1, num_players)");
  std::size_t profiles = std::size_t{1} << n;
  std::vector<std::vector<double>> payoffs(profiles);
  for (std::size_t idx = 0; idx < profiles; ++idx) {
    int contributors = 0;
    std::vector<int> act(n);
    for (int p = 0; p < n; ++p) {
      act[p] = static_cast<int>((idx >> (n - 1 - p)) & 1U);
      if (act[p] == 0) ++contributors;
    }
    const double share = alpha * contributors / n;
    for (int p = 0; p < n; ++p) payoffs[idx].push_back(act[p] == 0 ? share : 1.0 + share);
  }
  return Game("public_goods", detail::labels(n, 2), std::move(payoffs), ActionProfile(n, 0),
              ActionProfile(n, 1), GameFamily::public_goods)
      .with_multiplier(alpha);
}

// P1: A0 = invest the extra $4, A1 = hold. P2: A0 = share returns, A1 = keep.
inline Game make_trust() {
  return Game("trust", detail::labels(2, 2), {{10, 10}, {0, 20}, {6, 2}, {4, 4}}, {0, 0},
              {1, 1}, GameFamily::trust);
}

// Rows (Stag,Stag), (Stag,Hare), (Hare,Stag), (Hare,Hare); A0 = Stag.
inline Game make_stag_hunt(std::vector<std::vector<double>> payoffs = {{5, 5}, {0, 4}, {4, 0}, {4, 4}}) {
  return Game("stag_hunt", detail::labels(2, 2), std::move(payoffs), {0, 0}, {1, 1},
              GameFamily::stag_hunt);
}

struct GameParams {
  std::optional<PublicGoodsParams> public_goods;
  std::optional<std::vector<std::vector<double>>> stag_hunt_payoffs;
};

inline const std::vector<std::string>& builtin_game_names() {
  static const std::vector<std::string> names = {"prisoners", "travelers", "public_goods",
                                                 "trust", "stag_hunt"};
  return names;
}

// The four social dilemmas (stag hunt is the coordination baseline).
inline const std::vector<std::string>& dilemma_names() {
  static const std::vector<std::string> names = {"prisoners", "travelers", "public_goods",
                                                 "trust"};
  return names;
}

inline Game build_game(const std::string& name, const GameParams& params = {}) {
  if (params.public_goods && name != "public_goods")
    throw std::invalid_argument("build_game: public goods parameters given for " + name);
  if (params.stag_hunt_payoffs && name != "stag_hunt")
    throw std::invalid_argument("build_game: stag hunt payoffs given for " + name);
  if (name == "prisoners") return make_prisoners();
  if (name == "travelers") return make_travelers();
  if (name == "public_goods") return make_public_goods(params.public_goods.value_or(PublicGoodsParams{}));
  if (name == "trust") return make_trust();
  if (name == "stag_hunt") {
    if (params.stag_hunt_payoffs) return make_stag_hunt(*params.stag_hunt_payoffs);
    return make_stag_hunt();
  }
  throw std::invalid_argument("build_game: unknown game '" + name + "'");
}

inline void check_strategy_profile(const Game& game, const StrategyProfile& profile) {
  if (static_cast<int>(profile.size()) != game.num_players())
    throw std::invalid_argument("strategy profile has wrong number of players");
  for (int p = 0; p < game.num_players(); ++p)
    if (profile[p].size() != game.num_actions(p))
      throw std::invalid_argument("strategy profile dimension mismatch for player " +
                                  std::to_string(p));
}

inline StrategyProfile pure_strategy(const Game& game, const ActionProfile& a) {
  if (!game.is_valid_profile(a)) throw std::invalid_argument("pure_strategy: invalid profile");
  StrategyProfile s;
  for (int p = 0; p < game.num_players(); ++p) s.push_back(MixedAction::pure(game.num_actions(p), a[p]));
  return s;
}

// Enumerates profiles in index order. Profiles with zero probability are
// skipped, so pure profiles read the tensor entry directly.
inline std::vector<double> expected_utility(const Game& game, const StrategyProfile& profile) {
  check_strategy_profile(game, profile);
  const int n = game.num_players();
  std::vector<double> result(n, 0.0);
  for (std::size_t i = 0; i < game.num_profiles(); ++i) {
    ActionProfile a = game.profile_at(i);
    double prob = 1.0;
    for (int p = 0; p < n && prob != 0.0; ++p) prob *= profile[p].probability(a[p]);
    if (prob == 0.0) continue;
    auto u = game.payoffs(a);
    for (int p = 0; p < n; ++p) result[p] += prob * u[p];
  }
  return result;
}

inline ActionProfile sample_profile(const StrategyProfile& profile, Rng& rng) {
  ActionProfile a;
  a.reserve(profile.size());
  for (const auto& m : profile) a.push_back(m.sample(rng));
  return a;
}

// Maps u(defect_profile) to 0 and u(coop_profile) to 1, per player.
inline double normalize_payoff(const Game& game, int player, double raw) {
  const double lo = game.payoff(game.defect_profile(), player);
  const double hi = game.payoff(game.coop_profile(), player);
  if (hi - lo == 0.0)
    throw std::invalid_argument("normalize_payoff: coop and defect payoffs coincide for player " +
                                std::to_string(player));
  return (raw - lo) / (hi - lo);
}

inline std::vector<double> normalize_payoff(const Game& game, std::span<const double> raw) {
  if (static_cast<int>(raw.size()) != game.num_players())
    throw std::invalid_argument("normalize_payoff: payoff vector has wrong length");
  std::vector<double> out;
  for (int p = 0; p < game.num_players(); ++p) out.push_back(normalize_payoff(game, p, raw[p]));
  return out;
}

}  // namespace coopmech
