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

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"
#include "coopmech/rng.hpp"

namespace coopmech {

enum class Variant { no_mechanism, repetition, reputation_minus, reputation_plus, mediation, contracting };

inline const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v = {Variant::no_mechanism,     Variant::repetition,
                                         Variant::reputation_minus, Variant::reputation_plus,
                                         Variant::mediation,        Variant::contracting};
  return v;
}

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::no_mechanism: return "no_mechanism";
    case Variant::repetition: return "repetition";
    case Variant::reputation_minus: return "reputation_minus";
    case Variant::reputation_plus: return "reputation_plus";
    case Variant::mediation: return "mediation";
    case Variant::contracting: return "contracting";
  }
  return "?";
}

inline Variant variant_from_string(const std::string& s) {
  for (Variant v : all_variants())
    if (s == to_string(v)) return v;
  throw ConfigError("unknown mechanism variant '" + s + "'");
}

inline bool is_reputation(Variant v) {
  return v == Variant::reputation_minus || v == Variant::reputation_plus;
}
inline bool is_multi_round(Variant v) { return v == Variant::repetition || is_reputation(v); }

struct MechanismConfig {
  Variant variant = Variant::no_mechanism;
  double delta = 0.8;   // continuation probability
  int window = 3;       // history depth k
  int horizon = 15;     // truncation T
  std::optional<int> population_size;  // reputation variants

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("mechanism: delta must lie in (0, 1)");
    if (window < 1) throw ConfigError("mechanism: window must be >= 1");
    if (horizon < 1) throw ConfigError("mechanism: horizon must be >= 1");
    if (population_size && *population_size < 1)
      throw ConfigError("mechanism: population_size must be >= 1");
  }
};

// Mediator plan: the action played for every delegating player, keyed by
// the number of delegators d = 1..n (plan[d - 1]).
struct MediatorSpec {
  std::vector<int> plan;

  int action_for(int delegators) const { return plan.at(delegators - 1); }
  friend bool operator==(const MediatorSpec&, const MediatorSpec&) = default;
};

// Contract: per action label, the total a player choosing it receives
// (positive) or pays (negative), split equally over the other players.
struct ContractSpec {
  std::vector<int> transfers;

  friend bool operator==(const ContractSpec&, const ContractSpec&) = default;
};

inline void check_mediator(const Game& game, const MediatorSpec& m) {
  if (!game.shares_action_labels())
    throw std::invalid_argument("mediator: players do not share an action label set");
  if (static_cast<int>(m.plan.size()) != game.num_players())
    throw std::invalid_argument("mediator: plan must cover 1.." + std::to_string(game.num_players()) +
                                " delegators");
  for (int a : m.plan)
    if (a < 0 || a >= game.num_actions(0)) throw std::invalid_argument("mediator: plan action out of range");
}

inline void check_contract(const Game& game, const ContractSpec& c) {
  if (!game.shares_action_labels())
    throw std::invalid_argument("contract: players do not share an action label set");
  if (static_cast<int>(c.transfers.size()) != game.num_actions(0))
    throw std::invalid_argument("contract: transfers must cover every action label");
}

// v_i(a) = u_i(a) + t(a_i) - sum_{j != i} t(a_j) / (n - 1). Transfers cancel
// across players, so total welfare is unchanged at every profile.
inline Game apply_contract(const Game& game, const ContractSpec& contract) {
  check_contract(game, contract);
  const int n = game.num_players();
  if (n < 2) throw std::invalid_argument("contract: needs at least two players");
  std::vector<std::vector<double>> rows = game.payoff_rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ActionProfile a = game.profile_at(i);
    for (int p = 0; p < n; ++p) {
      double paid = 0.0;
      for (int q = 0; q < n; ++q)
        if (q != p) paid += static_cast<double>(contract.transfers[a[q]]) / (n - 1);
      rows[i][p] += contract.transfers[a[p]] - paid;
    }
  }
  std::vector<std::vector<std::string>> actions;
  for (int p = 0; p < n; ++p) actions.push_back(game.actions(p));
  return Game(game.name() + "+contract", std::move(actions), std::move(rows), game.coop_profile(),
              game.defect_profile(), game.family())
      .with_notes(game.action_notes())
      .with_multiplier(game.multiplier());
}

// Index of the added Delegate action for player p in the augmented game.
inline int delegate_action(const Game& base, int player) { return base.num_actions(player); }

// Replaces every Delegate choice by the mediator's action for the number
// of delegators; independent choices pass through.
inline ActionProfile resolve_mediated(const Game& base, const MediatorSpec& mediator,
                                      const ActionProfile& augmented) {
  int delegators = 0;
  for (int p = 0; p < base.num_players(); ++p)
    if (augmented.at(p) == delegate_action(base, p)) ++delegators;
  ActionProfile out = augmented;
  for (int p = 0; p < base.num_players(); ++p)
    if (out[p] == delegate_action(base, p)) out[p] = mediator.action_for(delegators);
  return out;
}

inline Game augment_with_mediator(const Game& base, const MediatorSpec& mediator) {
  check_mediator(base, mediator);
  const int n = base.num_players();
  std::vector<std::vector<std::string>> actions;
  for (int p = 0; p < n; ++p) {
    auto labels = base.actions(p);
    labels.push_back(action_label(base.num_actions(p)));
    actions.push_back(std::move(labels));
  }
  std::size_t profiles = 1;
  for (const auto& a : actions) profiles *= a.size();
  std::vector<std::vector<double>> rows(profiles);
  ActionProfile a(n, 0);
  for (std::size_t i = 0; i < profiles; ++i) {
    std::size_t idx = i;
    for (int p = n - 1; p >= 0; --p) {
      a[p] = static_cast<int>(idx % actions[p].size());
      idx /= actions[p].size();
    }
    auto u = base.payoffs(resolve_mediated(base, mediator, a));
    rows[i].assign(u.begin(), u.end());
  }
  return Game(base.name() + "+mediator", std::move(actions), std::move(rows), base.coop_profile(),
              base.defect_profile(), GameFamily::generic);
}

// Mediator from the cooperation construction: with everyone delegating it
// plays the cooperative action, with any fewer the punishing one.
inline MediatorSpec theorem_mediator(const Game& game) {
  if (!game.shares_action_labels())
    throw std::invalid_argument("mediator: players do not share an action label set");
  const int n = game.num_players();
  MediatorSpec m;
  for (int d = 1; d <= n; ++d) m.plan.push_back(d == n ? game.coop_profile()[0] : game.defect_profile()[0]);
  return m;
}

// Integer margin M used by the contract construction: the payoff spread
// rounded up, plus one, so any one-shot gain is outweighed.
inline int contract_margin(const Game& game) {
  return static_cast<int>(std::ceil(game.payoff_spread() - kPayoffTol)) + 1;
}

// Contract from the cooperation construction: the cooperative action
// collects M from every other player, everything else transfers nothing.
inline ContractSpec theorem_contract(const Game& game) {
  if (!game.shares_action_labels())
    throw std::invalid_argument("contract: players do not share an action label set");
  ContractSpec c;
  c.transfers.assign(game.num_actions(0), 0);
  c.transfers[game.coop_profile()[0]] = contract_margin(game) * (game.num_players() - 1);
  return c;
}

// Approval voting: ballots[v][p] is voter v's approval of proposal p. The
// winner is drawn uniformly among the proposals with the most approvals.
inline int run_proposal_vote(std::size_t num_proposals, const std::vector<std::vector<bool>>& ballots,
                             Rng& rng) {
  if (num_proposals == 0) throw std::invalid_argument("vote: no proposals");
  std::vector<int> approvals(num_proposals, 0);
  for (std::size_t v = 0; v < ballots.size(); ++v) {
    if (ballots[v].size() != num_proposals)
      throw std::invalid_argument("vote: ballot " + std::to_string(v) + " does not cover every proposal");
    for (std::size_t p = 0; p < num_proposals; ++p)
      if (ballots[v][p]) ++approvals[p];
  }
  const int best = *std::max_element(approvals.begin(), approvals.end());
  std::vector<int> tied;
  for (std::size_t p = 0; p < num_proposals; ++p)
    if (approvals[p] == best) tied.push_back(static_cast<int>(p));
  return tied[rng.uniform_below(tied.size())];
}

// sum_t delta^(t-1) x_t / sum_t delta^(t-1), evaluated as offsets from the
// first round so a constant stream returns that constant bit-exactly.
inline double repetition_weighted_payoff(const std::vector<double>& round_payoffs, double delta) {
  if (round_payoffs.empty()) throw std::invalid_argument("weighted payoff: no rounds");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("weighted payoff: delta must lie in (0, 1)");
  const double first = round_payoffs.front();
  double weight = 1.0, total_weight = 0.0, acc = 0.0;
  for (double x : round_payoffs) {
    acc += weight * (x - first);
    total_weight += weight;
    weight *= delta;
  }
  return first + acc / total_weight;
}

// Share of the infinite-horizon weight beyond round T: delta^T.
inline double truncation_tail_mass(double delta, int horizon) { return std::pow(delta, horizon); }

}  // namespace coopmech
