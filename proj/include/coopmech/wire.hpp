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

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopmech/decision.hpp"
#include "coopmech/errors.hpp"

namespace coopmech {

// A response that fails its wire schema. rule() is a stable identifier for
// the violated rule, used in episode diagnostics.
class WireError : public DecisionError {
 public:
  WireError(std::string rule, const std::string& what)
      : DecisionError(rule + ": " + what), rule_(std::move(rule)) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

// Dimensions needed to validate a payload of a given phase.
struct WireContext {
  Phase phase = Phase::act;
  int num_actions = 0;       // act-phase action set
  int num_base_actions = 0;  // shared base labels (proposals)
  int num_players = 0;
  int num_proposals = 0;     // vote phase
  char ballot_prefix = 'M';  // "M1".. for mediators, "C1".. for contracts
};

inline WireContext wire_context(const DecisionRequest& req) {
  WireContext ctx;
  ctx.phase = req.phase;
  ctx.num_actions = req.num_actions();
  ctx.num_base_actions = req.game->num_actions(req.seat);
  ctx.num_players = req.game->num_players();
  ctx.num_proposals = static_cast<int>(req.slate.size());
  ctx.ballot_prefix = req.mechanism.variant == Variant::contracting ? 'C' : 'M';
  return ctx;
}

// Finds the last well-formed JSON object in free text. Code fence lines
// are dropped first; nested objects belong to their enclosing object.
inline std::optional<nlohmann::json> extract_last_json_object(std::string_view raw) {
  std::string text;
  {
    std::istringstream in{std::string(raw)};
    std::string line;
    while (std::getline(in, line)) {
      std::string_view trimmed = line;
      while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) trimmed.remove_prefix(1);
      if (trimmed.substr(0, 3) == "```") continue;
      text += line;
      text += '\n';
    }
  }
  std::optional<nlohmann::json> last;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      ++i;
      continue;
    }
    int depth = 0;
    bool in_string = false, escaped = false;
    std::size_t end = std::string::npos;
    for (std::size_t j = i; j < text.size(); ++j) {
      const char c = text[j];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        end = j;
        break;
      }
    }
    if (end == std::string::npos) {
      ++i;
      continue;
    }
    auto parsed = nlohmann::json::parse(text.begin() + i, text.begin() + end + 1, nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) {
      last = std::move(parsed);
      i = end + 1;
    } else {
      ++i;
    }
  }
  return last;
}

namespace detail {

inline int parse_action_label(const std::string& s, int num_actions) {
  if (s.size() < 2 || s[0] != 'A') return -1;
  int v = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return -1;
    v = v * 10 + (s[i] - '0');
    if (v >= num_actions) return -1;
  }
  if (s.size() > 2 && s[1] == '0') return -1;
  return v;
}

inline MixedAction parse_mixed_action(const nlohmann::json& obj, int num_actions) {
  std::vector<std::optional<int>> w(num_actions);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const int a = parse_action_label(it.key(), num_actions);
    if (a < 0) throw WireError("unknown_action", "unknown action key '" + it.key() + "'");
    if (!it.value().is_number_integer())
      throw WireError("non_integer_weight", "weight for " + it.key() + " is not an integer");
    const auto v = it.value().get<long long>();
    if (v < 0 || v > 100) throw WireError("weight_range", "weight for " + it.key() + " outside [0, 100]");
    w[a] = static_cast<int>(v);
  }
  std::vector<int> weights;
  int sum = 0;
  for (int a = 0; a < num_actions; ++a) {
    if (!w[a]) throw WireError("missing_action", "missing action " + action_label(a));
    weights.push_back(*w[a]);
    sum += *w[a];
  }
  if (sum != 100)
    throw WireError("sum_not_100", "sum ≠ 100 (weights sum to " + std::to_string(sum) + ")");
  return MixedAction(std::move(weights));
}

inline MediatorSpec parse_mediator(const nlohmann::json& obj, int num_players, int num_actions) {
  std::vector<std::optional<int>> plan(num_players);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(it.key(), &used);
      if (used != it.key().size()) d = 0;
    } catch (const std::exception&) {
      d = 0;
    }
    if (d < 1 || d > num_players)
      throw WireError("unknown_key", "mediator key '" + it.key() + "' is not a delegator count in 1.." +
                                         std::to_string(num_players));
    if (!it.value().is_string()) throw WireError("schema", "mediator value for " + it.key() + " is not an action string");
    const int a = parse_action_label(it.value().get<std::string>(), num_actions);
    if (a < 0) throw WireError("unknown_action", "mediator names unknown action '" + it.value().get<std::string>() + "'");
    plan[d - 1] = a;
  }
  MediatorSpec m;
  for (int d = 1; d <= num_players; ++d) {
    if (!plan[d - 1]) throw WireError("missing_key", "mediator plan misses delegator count " + std::to_string(d));
    m.plan.push_back(*plan[d - 1]);
  }
  return m;
}

inline ContractSpec parse_contract(const nlohmann::json& obj, int num_actions) {
  std::vector<std::optional<int>> t(num_actions);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const int a = parse_action_label(it.key(), num_actions);
    if (a < 0) throw WireError("unknown_action", "unknown action key '" + it.key() + "'");
    if (!it.value().is_number_integer())
      throw WireError("non_integer_transfer", "transfer for " + it.key() + " is not an integer");
    t[a] = it.value().get<int>();
  }
  ContractSpec c;
  for (int a = 0; a < num_actions; ++a) {
    if (!t[a]) throw WireError("missing_action", "missing action " + action_label(a));
    c.transfers.push_back(*t[a]);
  }
  return c;
}

inline Ballot parse_ballot(const nlohmann::json& obj, int num_proposals, char prefix) {
  std::vector<std::optional<bool>> b(num_proposals);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& k = it.key();
    int id = 0;
    bool ok = k.size() >= 2 && k[0] == prefix;
    for (std::size_t i = 1; ok && i < k.size(); ++i) {
      if (k[i] < '0' || k[i] > '9') ok = false;
      else id = id * 10 + (k[i] - '0');
    }
    if (!ok || id < 1 || id > num_proposals) throw WireError("unknown_key", "unknown proposal key '" + k + "'");
    if (!it.value().is_boolean()) throw WireError("schema", "approval for " + k + " is not a boolean");
    b[id - 1] = it.value().get<bool>();
  }
  Ballot out;
  for (int i = 0; i < num_proposals; ++i) {
    if (!b[i]) throw WireError("missing_key", std::string("ballot misses ") + prefix + std::to_string(i + 1));
    out.push_back(*b[i]);
  }
  return out;
}

}  // namespace detail

inline DecisionPayload parse_payload(const WireContext& ctx, const nlohmann::json& obj) {
  switch (ctx.phase) {
    case Phase::act: return detail::parse_mixed_action(obj, ctx.num_actions);
    case Phase::propose_mediator: return detail::parse_mediator(obj, ctx.num_players, ctx.num_base_actions);
    case Phase::propose_contract: return detail::parse_contract(obj, ctx.num_base_actions);
    case Phase::vote: return detail::parse_ballot(obj, ctx.num_proposals, ctx.ballot_prefix);
    case Phase::sign: {
      if (obj.size() != 1 || !obj.contains("sign")) throw WireError("schema", "expected exactly the key \"sign\"");
      if (!obj["sign"].is_boolean()) throw WireError("schema", "\"sign\" is not a boolean");
      return SignDecision{obj["sign"].get<bool>()};
    }
  }
  throw WireError("schema", "unknown phase");
}

// Extracts the final JSON object from an agent's output and validates it
// against the phase schema. Mixed actions are never renormalized.
inline DecisionResponse parse_response(const WireContext& ctx, const std::string& raw) {
  auto obj = extract_last_json_object(raw);
  if (!obj) throw WireError("no_json_object", "no parsable JSON object in response");
  return DecisionResponse{parse_payload(ctx, *obj), raw};
}

inline DecisionResponse parse_response(const DecisionRequest& req, const std::string& raw) {
  return parse_response(wire_context(req), raw);
}

// Single-line wire form of a payload, keys in label order.
inline std::string to_wire(const WireContext& ctx, const DecisionPayload& payload) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (const auto* m = std::get_if<MixedAction>(&payload)) {
    for (int a = 0; a < m->size(); ++a) j[action_label(a)] = m->weight(a);
  } else if (const auto* med = std::get_if<MediatorSpec>(&payload)) {
    for (std::size_t d = 0; d < med->plan.size(); ++d) j[std::to_string(d + 1)] = action_label(med->plan[d]);
  } else if (const auto* c = std::get_if<ContractSpec>(&payload)) {
    for (std::size_t a = 0; a < c->transfers.size(); ++a) j[action_label(static_cast<int>(a))] = c->transfers[a];
  } else if (const auto* b = std::get_if<Ballot>(&payload)) {
    for (std::size_t i = 0; i < b->size(); ++i) j[std::string(1, ctx.ballot_prefix) + std::to_string(i + 1)] = bool((*b)[i]);
  } else if (const auto* s = std::get_if<SignDecision>(&payload)) {
    j["sign"] = s->sign;
  }
  std::string out = "{";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it != j.begin()) out += ", ";
    out += nlohmann::json(it.key()).dump() + ": " + it.value().dump();
  }
  return out + "}";
}

}  // namespace coopmech
