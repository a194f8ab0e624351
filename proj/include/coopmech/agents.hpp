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
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopmech/errors.hpp"
#include "coopmech/external.hpp"
#include "coopmech/scripted.hpp"
#include "coopmech/transport.hpp"

namespace coopmech {

inline constexpr const char* kExternalKind = "External";

// A named agent type in a roster, e.g. {"kind": "AlwaysAction", "label":
// "AlwaysA2", "params": {"action": "A2"}}.
struct AgentKind {
  std::string label;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();

  bool external() const { return kind == kExternalKind; }
  friend bool operator==(const AgentKind&, const AgentKind&) = default;
};

inline nlohmann::json to_json(const AgentKind& k) {
  return {{"label", k.label}, {"kind", k.kind}, {"params", k.params}};
}

namespace detail {

inline void allow_params(const AgentKind& k, const std::set<std::string>& allowed) {
  for (auto it = k.params.begin(); it != k.params.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("agent '" + k.label + "': unknown parameter '" + it.key() + "'");
}

inline int action_param(const AgentKind& k) {
  if (!k.params.contains("action")) throw ConfigError("agent '" + k.label + "': AlwaysAction needs params.action");
  const auto& a = k.params["action"];
  if (a.is_number_integer()) return a.get<int>();
  if (a.is_string()) {
    const std::string s = a.get<std::string>();
    if (s.size() >= 2 && s[0] == 'A' && s.find_first_not_of("0123456789", 1) == std::string::npos)
      return std::stoi(s.substr(1));
  }
  throw ConfigError("agent '" + k.label + "': params.action must be an action index or label like \"A2\"");
}

inline ExternalAgentConfig external_config(const AgentKind& k) {
  allow_params(k, {"model", "reasoning", "temperature", "top_p", "max_tokens", "reasks"});
  ExternalAgentConfig cfg;
  try {
    if (!k.params.contains("model")) throw ConfigError("agent '" + k.label + "': External needs params.model");
    cfg.model = k.params.at("model").get<std::string>();
    cfg.reasoning = k.params.value("reasoning", true);
    cfg.sampling.temperature = k.params.value("temperature", 1.0);
    if (k.params.contains("top_p")) cfg.sampling.top_p = k.params["top_p"].get<double>();
    if (k.params.contains("max_tokens")) cfg.sampling.max_tokens = k.params["max_tokens"].get<int>();
    cfg.reasks = k.params.value("reasks", 2);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("agent '" + k.label + "': " + e.what());
  }
  if (cfg.reasks < 0) throw ConfigError("agent '" + k.label + "': reasks must be >= 0");
  return cfg;
}

}  // namespace detail

// Accepts a bare kind name or an object with kind, optional label and params.
inline AgentKind agent_kind_from_json(const nlohmann::json& j) {
  AgentKind k;
  if (j.is_string()) {
    k.kind = j.get<std::string>();
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "kind" && it.key() != "label" && it.key() != "params")
        throw ConfigError("roster entry: unknown field '" + it.key() + "'");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("roster entry: missing string field 'kind'");
    k.kind = j["kind"].get<std::string>();
    if (j.contains("label")) {
      if (!j["label"].is_string()) throw ConfigError("roster entry: 'label' must be a string");
      k.label = j["label"].get<std::string>();
    }
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ConfigError("roster entry: 'params' must be an object");
      k.params = j["params"];
    }
  } else {
    throw ConfigError("roster entry must be a kind name or an object");
  }
  if (k.label.empty()) k.label = k.kind;
  if (!k.external() && !scripted_rule_from_string(k.kind))
    throw ConfigError("roster entry: unknown agent kind '" + k.kind + "'");
  return k;
}

inline void check_roster(const std::vector<AgentKind>& roster) {
  if (roster.empty()) throw ConfigError("roster is empty");
  std::set<std::string> labels;
  for (const auto& k : roster)
    if (!labels.insert(k.label).second) throw ConfigError("roster: duplicate label '" + k.label + "'");
}

// Fails early on bad parameters, before any episode runs.
inline void check_agent_kind(const AgentKind& k) {
  if (k.external()) {
    detail::external_config(k);
    return;
  }
  const auto rule = scripted_rule_from_string(k.kind);
  if (!rule) throw ConfigError("unknown agent kind '" + k.kind + "'");
  if (*rule == ScriptedRule::always_action) {
    detail::allow_params(k, {"action"});
    if (detail::action_param(k) < 0) throw ConfigError("agent '" + k.label + "': action must be >= 0");
  } else {
    detail::allow_params(k, {});
  }
}

// Fresh agent for one episode. External kinds need a transport.
inline std::unique_ptr<Agent> make_agent(const AgentKind& k, const std::shared_ptr<ChatTransport>& transport) {
  check_agent_kind(k);
  if (k.external()) {
    if (!transport) throw ConfigError("agent '" + k.label + "': external agents need a transport");
    return std::make_unique<ExternalAgent>(transport, detail::external_config(k));
  }
  const ScriptedRule rule = *scripted_rule_from_string(k.kind);
  return std::make_unique<ScriptedAgent>(rule, rule == ScriptedRule::always_action ? detail::action_param(k) : 0);
}

}  // namespace coopmech
