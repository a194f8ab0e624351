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
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coopmech/decision.hpp"
#include "coopmech/equilibrium.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/history.hpp"
#include "coopmech/mechanism.hpp"

namespace coopmech {

enum class ScriptedRule {
  always_cooperate,
  always_defect,
  always_action,
  uniform_random,
  tit_for_tat,
  grim_trigger,
  standing_norm,
  theorem_mediator,
  theorem_contract,
  best_response_voter,
};

inline const std::vector<std::pair<ScriptedRule, const char*>>& scripted_rule_names() {
  static const std::vector<std::pair<ScriptedRule, const char*>> names = {
      {ScriptedRule::always_cooperate, "AlwaysCooperate"},
      {ScriptedRule::always_defect, "AlwaysDefect"},
      {ScriptedRule::always_action, "AlwaysAction"},
      {ScriptedRule::uniform_random, "UniformRandom"},
      {ScriptedRule::tit_for_tat, "TitForTat"},
      {ScriptedRule::grim_trigger, "GrimTrigger"},
      {ScriptedRule::standing_norm, "StandingNorm"},
      {ScriptedRule::theorem_mediator, "TheoremMediator"},
      {ScriptedRule::theorem_contract, "TheoremContract"},
      {ScriptedRule::best_response_voter, "BestResponseVoter"},
  };
  return names;
}

inline const char* to_string(ScriptedRule r) {
  for (const auto& [rule, name] : scripted_rule_names())
    if (rule == r) return name;
  return "?";
}

inline std::optional<ScriptedRule> scripted_rule_from_string(const std::string& s) {
  for (const auto& [rule, name] : scripted_rule_names())
    if (s == name) return rule;
  return std::nullopt;
}

// Reference agent. Observations are remembered across rounds of one
// episode, so a fresh instance is needed per episode.
class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(ScriptedRule rule, int fixed_action = 0) : rule_(rule), fixed_action_(fixed_action) {
    if (rule == ScriptedRule::always_action && fixed_action < 0)
      throw ConfigError("AlwaysAction: action index must be >= 0");
  }

  ScriptedRule rule() const { return rule_; }

  DecisionResponse decide(const DecisionRequest& req) override {
    req.validate();
    observe(req);
    switch (req.phase) {
      case Phase::act: return {act(req), {}};
      case Phase::propose_mediator: return {propose_mediator(*req.game), {}};
      case Phase::propose_contract: return {propose_contract(*req.game), {}};
      case Phase::vote: return {vote(req), {}};
      case Phase::sign: return {sign(req), {}};
    }
    throw DecisionError("unknown phase");
  }

 private:
  using RecordKey = std::pair<int, std::vector<int>>;

  void observe(const DecisionRequest& req) {
    for (auto& r : flatten_view(req.history)) {
      RecordKey key{r.round, r.participants};
      if (seen_.count(key)) continue;
      seen_.insert(key);
      memory_.push_back(std::move(r));
      sorted_ = false;
    }
    if (!sorted_) {
      std::stable_sort(memory_.begin(), memory_.end(),
                       [](const HistoryRecord& a, const HistoryRecord& b) { return a.round < b.round; });
      sorted_ = true;
    }
  }

  static int coop(const DecisionRequest& r) { return r.game->coop_profile()[r.seat]; }
  static int punish(const DecisionRequest& r) { return r.game->defect_profile()[r.seat]; }

  // Identifiers of the current co-players; seats in fixed-partner play.
  static std::vector<int> co_players(const DecisionRequest& r) {
    if (r.history.viewer >= 0) return r.history.co_players;
    std::vector<int> out;
    for (int p = 0; p < r.game->num_players(); ++p)
      if (p != r.seat) out.push_back(p);
    return out;
  }

  static bool cooperated(const Game& g, const HistoryRecord& rec, int seat) {
    return rec.actions[seat] == g.coop_profile()[seat];
  }

  // Most recent record of `agent` known to this agent.
  const HistoryRecord* last_record_of(int agent) const {
    for (auto it = memory_.rbegin(); it != memory_.rend(); ++it)
      if (it->seat_of(agent) >= 0) return &*it;
    return nullptr;
  }

  int tit_for_tat(const DecisionRequest& r) const {
    const Game& g = *r.game;
    const auto others = co_players(r);
    if (others.size() == 1) {
      const HistoryRecord* last = last_record_of(others[0]);
      if (!last) return coop(r);
      const int a = last->actions[last->seat_of(others[0])];
      return a < g.num_actions(r.seat) ? a : punish(r);
    }
    for (int o : others) {
      const HistoryRecord* last = last_record_of(o);
      if (last && !cooperated(g, *last, last->seat_of(o))) return punish(r);
    }
    return coop(r);
  }

  int grim_trigger(const DecisionRequest& r) {
    if (!triggered_) {
      for (const auto& rec : memory_)
        for (std::size_t s = 0; s < rec.actions.size(); ++s)
          if (!cooperated(*r.game, rec, static_cast<int>(s))) triggered_ = true;
    }
    return triggered_ ? punish(r) : coop(r);
  }

  int standing_norm(const DecisionRequest& r) const {
    std::set<int> bad;
    std::size_t i = 0;
    while (i < memory_.size()) {
      const int round = memory_[i].round;
      std::set<int> turned;
      for (; i < memory_.size() && memory_[i].round == round; ++i) {
        const HistoryRecord& rec = memory_[i];
        for (std::size_t s = 0; s < rec.participants.size(); ++s) {
          const int j = rec.participants[s];
          bool co_good = true;
          for (int other : rec.participants)
            if (other != j && bad.count(other)) co_good = false;
          if (co_good && !cooperated(*r.game, rec, static_cast<int>(s))) turned.insert(j);
        }
      }
      bad.insert(turned.begin(), turned.end());
    }
    for (int o : co_players(r))
      if (bad.count(o)) return punish(r);
    return coop(r);
  }

  bool selected_is(const DecisionRequest& r, const Proposal::Spec& spec) const {
    return r.selected && r.selected->spec == spec;
  }

  int base_rule(const DecisionRequest& r) {
    switch (rule_) {
      case ScriptedRule::always_cooperate: return coop(r);
      case ScriptedRule::always_defect: return punish(r);
      case ScriptedRule::always_action:
        if (fixed_action_ >= r.num_actions())
          throw DecisionError("AlwaysAction: action " + action_label(fixed_action_) + " is not available");
        return fixed_action_;
      case ScriptedRule::tit_for_tat: return tit_for_tat(r);
      case ScriptedRule::grim_trigger: return grim_trigger(r);
      case ScriptedRule::standing_norm: return standing_norm(r);
      case ScriptedRule::uniform_random:
      case ScriptedRule::theorem_mediator:
      case ScriptedRule::theorem_contract:
      case ScriptedRule::best_response_voter: return punish(r);
    }
    return punish(r);
  }

  MixedAction act(const DecisionRequest& r) {
    const Game& g = *r.game;
    const int n = r.num_actions();
    if (rule_ == ScriptedRule::uniform_random) return MixedAction::uniform(n);
    const Variant v = r.mechanism.variant;
    if (rule_ == ScriptedRule::theorem_mediator && v == Variant::mediation)
      return MixedAction::pure(n, selected_is(r, theorem_mediator(g)) ? delegate_action(g, r.seat) : punish(r));
    if (rule_ == ScriptedRule::theorem_contract && v == Variant::contracting)
      return MixedAction::pure(n, r.contract_active && selected_is(r, theorem_contract(g)) ? coop(r) : punish(r));
    if (rule_ == ScriptedRule::best_response_voter) {
      if (v == Variant::mediation && acceptable(g, *r.selected)) return MixedAction::pure(n, delegate_action(g, r.seat));
      if (v == Variant::contracting && r.contract_active && acceptable(g, *r.selected))
        return MixedAction::pure(n, coop(r));
    }
    return MixedAction::pure(n, base_rule(r));
  }

  MediatorSpec propose_mediator(const Game& g) const {
    if (rule_ == ScriptedRule::theorem_mediator) return theorem_mediator(g);
    return MediatorSpec{std::vector<int>(g.num_players(), g.coop_profile()[0])};
  }

  ContractSpec propose_contract(const Game& g) const {
    if (rule_ == ScriptedRule::theorem_contract) return theorem_contract(g);
    return ContractSpec{std::vector<int>(g.num_actions(0), 0)};
  }

  // Whether the cooperative outcome is an equilibrium under a proposal:
  // everyone delegating for mediators, everyone cooperating for contracts.
  static bool acceptable(const Game& g, const Proposal& p) {
    if (const auto* m = std::get_if<MediatorSpec>(&p.spec)) {
      const Game aug = augment_with_mediator(g, *m);
      ActionProfile all(g.num_players());
      for (int s = 0; s < g.num_players(); ++s) all[s] = delegate_action(g, s);
      return is_pure_nash(aug, all) && resolve_mediated(g, *m, all) == g.coop_profile();
    }
    return is_pure_nash(apply_contract(g, std::get<ContractSpec>(p.spec)), g.coop_profile());
  }

  Ballot vote(const DecisionRequest& r) const {
    const Game& g = *r.game;
    Ballot b;
    for (const auto& p : r.slate) {
      const bool mediator = std::holds_alternative<MediatorSpec>(p.spec);
      if (rule_ == ScriptedRule::theorem_mediator && mediator)
        b.push_back(p.spec == Proposal::Spec{theorem_mediator(g)});
      else if (rule_ == ScriptedRule::theorem_contract && !mediator)
        b.push_back(p.spec == Proposal::Spec{theorem_contract(g)});
      else if (rule_ == ScriptedRule::best_response_voter)
        b.push_back(acceptable(g, p));
      else
        b.push_back(true);
    }
    return b;
  }

  SignDecision sign(const DecisionRequest& r) const {
    const Game& g = *r.game;
    switch (rule_) {
      case ScriptedRule::theorem_contract: return {selected_is(r, theorem_contract(g))};
      case ScriptedRule::best_response_voter: return {acceptable(g, *r.selected)};
      default: return {true};
    }
  }

  ScriptedRule rule_;
  int fixed_action_ = 0;
  bool triggered_ = false;
  bool sorted_ = true;
  std::set<RecordKey> seen_;
  std::vector<HistoryRecord> memory_;
};

}  // namespace coopmech
