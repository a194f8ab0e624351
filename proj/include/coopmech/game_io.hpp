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

#include <string>

#include <nlohmann/json.hpp>

#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"

namespace coopmech {

inline constexpr const char* kGameSchema = "coopmech.game/1";

inline const char* to_string(GameFamily f) {
  switch (f) {
    case GameFamily::prisoners: return "prisoners";
    case GameFamily::travelers: return "travelers";
    case GameFamily::public_goods: return "public_goods";
    case GameFamily::trust: return "trust";
    case GameFamily::stag_hunt: return "stag_hunt";
    case GameFamily::generic: break;
  }
  return "generic";
}

inline GameFamily game_family_from_string(const std::string& s) {
  for (GameFamily f : {GameFamily::prisoners, GameFamily::travelers, GameFamily::public_goods,
                       GameFamily::trust, GameFamily::stag_hunt, GameFamily::generic})
    if (s == to_string(f)) return f;
  throw ConfigError("unknown game family '" + s + "'");
}

// One document per game; payoffs are listed per profile in row-major order
// (player 0 most significant).
inline nlohmann::json game_to_json(const Game& g) {
  nlohmann::json j;
  j["schema"] = kGameSchema;
  j["name"] = g.name();
  j["family"] = to_string(g.family());
  j["num_players"] = g.num_players();
  nlohmann::json actions = nlohmann::json::array();
  for (int p = 0; p < g.num_players(); ++p) actions.push_back(g.actions(p));
  j["actions"] = actions;
  j["payoffs"] = g.payoff_rows();
  j["coop_profile"] = g.coop_profile();
  j["defect_profile"] = g.defect_profile();
  if (!g.action_notes().empty()) j["action_notes"] = g.action_notes();
  if (g.family() == GameFamily::public_goods) j["multiplier"] = g.multiplier();
  return j;
}

inline Game game_from_json(const nlohmann::json& j) {
  try {
    if (j.value("schema", std::string{}) != kGameSchema)
      throw ConfigError(std::string("game document: schema must be '") + kGameSchema + "'");
    auto actions = j.at("actions").get<std::vector<std::vector<std::string>>>();
    if (j.at("num_players").get<int>() != static_cast<int>(actions.size()))
      throw ConfigError("game document: num_players does not match actions");
    Game g(j.at("name").get<std::string>(), std::move(actions),
           j.at("payoffs").get<std::vector<std::vector<double>>>(),
           j.at("coop_profile").get<ActionProfile>(), j.at("defect_profile").get<ActionProfile>(),
           game_family_from_string(j.value("family", std::string("generic"))));
    if (j.contains("action_notes")) g = g.with_notes(j["action_notes"].get<std::vector<std::string>>());
    if (j.contains("multiplier")) g = g.with_multiplier(j["multiplier"].get<double>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("game document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("game document: ") + e.what());
  }
}

}  // namespace coopmech
