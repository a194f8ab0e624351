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

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"
#include "coopmech/history.hpp"
#include "coopmech/mechanism.hpp"

namespace coopmech {

enum class Phase { act, propose_mediator, propose_contract, vote, sign };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::act: return "act";
    case Phase::propose_mediator: return "propose_mediator";
    case Phase::propose_contract: return "propose_contract";
    case Phase::vote: return "vote";
    case Phase::sign: return "sign";
  }
  return "?";
}

inline Phase phase_from_string(const std::string& s) {
  for (Phase p : {Phase::act, Phase::propose_mediator, Phase::propose_contract, Phase::vote, Phase::sign})
    if (s == to_string(p)) return p;
  throw ConfigError("unknown phase '" + s + "'");
}

struct Proposal {
  int proposer = 0;  // seat
  using Spec = std::variant<MediatorSpec, ContractSpec>;
  Spec spec;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

using Ballot = std::vector<bool>;

struct SignDecision {
  bool sign = false;
  friend bool operator==(const SignDecision&, const SignDecision&) = default;
};

using DecisionPayload = std::variant<MixedAction, MediatorSpec, ContractSpec, Ballot, SignDecision>;

struct DecisionResponse {
  DecisionPayload payload;
  std::string raw;  // unparsed agent output, empty for scripted agents
};

// Everything an agent is shown at one decision point.
struct DecisionRequest {
  Phase phase = Phase::act;
  std::shared_ptr<const Game> game;  // the base game
  MechanismConfig mechanism;
  int seat = 0;
  HistoryView history;               // act phase of multi-round variants
  std::vector<Proposal> slate;       // vote phase
  std::optional<Proposal> selected;  // mediation act; contracting sign and act
  bool contract_active = false;      // contracting act phase

  // Size of the action set for the act phase; mediation adds Delegate.
  int num_actions() const {
    const int base = game->num_actions(seat);
    return mechanism.variant == Variant::mediation ? base + 1 : base;
  }

  void validate() const {
    if (!game) throw std::invalid_argument("request: missing game");
    if (seat < 0 || seat >= game->num_players()) throw std::invalid_argument("request: seat out of range");
    const Variant v = mechanism.variant;
    switch (phase) {
      case Phase::act:
        if (v == Variant::mediation && !selected) throw std::invalid_argument("request: mediation act needs the mediator");
        if (v == Variant::contracting && contract_active != selected.has_value())
          throw std::invalid_argument("request: an active contract must be attached");
        if (!slate.empty()) throw std::invalid_argument("request: act phase carries no slate");
        break;
      case Phase::propose_mediator:
      case Phase::propose_contract:
        if ((phase == Phase::propose_mediator && v != Variant::mediation) ||
            (phase == Phase::propose_contract && v != Variant::contracting))
          throw std::invalid_argument("request: proposal phase does not match mechanism");
        if (!slate.empty() || selected) throw std::invalid_argument("request: proposal phase carries no context");
        break;
      case Phase::vote:
        if (slate.empty()) throw std::invalid_argument("request: vote phase needs a slate");
        break;
      case Phase::sign:
        if (v != Variant::contracting || !selected)
          throw std::invalid_argument("request: sign phase needs the selected contract");
        break;
    }
  }
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual DecisionResponse decide(const DecisionRequest& request) = 0;
};

// Shape check of a response against its request. Throws DecisionError
// naming the violated rule.
inline void check_response(const DecisionRequest& req, const DecisionResponse& resp) {
  const Game& g = *req.game;
  const int n = g.num_players();
  switch (req.phase) {
    case Phase::act: {
      const auto* m = std::get_if<MixedAction>(&resp.payload);
      if (!m) throw DecisionError("act phase expects a mixed action");
      if (m->size() != req.num_actions())
        throw DecisionError("mixed action covers " + std::to_string(m->size()) + " actions, expected " +
                            std::to_string(req.num_actions()));
      break;
    }
    case Phase::propose_mediator: {
      const auto* m = std::get_if<MediatorSpec>(&resp.payload);
      if (!m) throw DecisionError("mediator proposal phase expects a mediator");
      if (static_cast<int>(m->plan.size()) != n) throw DecisionError("mediator plan must cover 1.." + std::to_string(n));
      for (int a : m->plan)
        if (a < 0 || a >= g.num_actions(0)) throw DecisionError("mediator plan names an unknown action");
      break;
    }
    case Phase::propose_contract: {
      const auto* c = std::get_if<ContractSpec>(&resp.payload);
      if (!c) throw DecisionError("contract proposal phase expects a contract");
      if (static_cast<int>(c->transfers.size()) != g.num_actions(0))
        throw DecisionError("contract must cover every action");
      break;
    }
    case Phase::vote: {
      const auto* b = std::get_if<Ballot>(&resp.payload);
      if (!b) throw DecisionError("vote phase expects a ballot");
      if (b->size() != req.slate.size()) throw DecisionError("ballot must cover every proposal");
      break;
    }
    case Phase::sign:
      if (!std::holds_alternative<SignDecision>(resp.payload)) throw DecisionError("sign phase expects a sign decision");
      break;
  }
}

}  // namespace coopmech
