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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopmech/agents.hpp"
#include "coopmech/digest.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"
#include "coopmech/mechanism.hpp"
#include "coopmech/metrics.hpp"
#include "coopmech/tournament.hpp"
#include "coopmech/transport.hpp"

namespace coopmech {

inline constexpr const char* kConfigSchema = "coopmech.config/1";
inline constexpr const char* kToolVersion = "coopmech 0.1.0";

struct TransportConfig {
  std::string type;                  // "canned", "http" or "record"
  std::filesystem::path dir;         // canned and record
  HttpTransportConfig http;          // http and record
};

// A sweep over games x mechanisms with one roster.
struct RunConfig {
  std::vector<std::string> games;
  GameParams game_params;
  std::vector<MechanismConfig> mechanisms;
  std::vector<AgentKind> roster;
  int repeats = 3;
  std::uint64_t seed = 0;
  int parallelism = 1;
  bool require_complete = false;
  std::optional<TransportConfig> transport;
  ReplicatorConfig replicator;
  int bootstrap = 20;

  nlohmann::json canonical;  // normalized document the digest is taken over
  std::string digest;

  TournamentConfig tournament(const std::string& game, const MechanismConfig& mech) const {
    TournamentConfig t;
    t.game_name = game;
    t.game_params = game_params;
    t.mechanism = mech;
    t.roster = roster;
    t.repeats = repeats;
    t.seed = seed;
    t.parallelism = parallelism;
    t.config_digest = digest;
    return t;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& k : roster) out.push_back(k.label);
    return out;
  }

  bool needs_transport() const {
    for (const auto& k : roster)
      if (k.external()) return true;
    return false;
  }
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

inline void only_fields(const nlohmann::json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) field_error(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

template <typename T>
T get_field(const nlohmann::json& obj, const std::string& key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    field_error(path, "wrong type");
  }
}

inline MechanismConfig parse_mechanism(const nlohmann::json& j, const MechanismConfig& defaults,
                                       const std::string& path) {
  MechanismConfig m = defaults;
  try {
    if (j.is_string()) {
      m.variant = variant_from_string(j.get<std::string>());
    } else if (j.is_object()) {
      only_fields(j, path, {"variant", "delta", "window", "horizon", "population_size"});
      if (!j.contains("variant") || !j["variant"].is_string()) field_error(path + ".variant", "missing or not a string");
      m.variant = variant_from_string(j["variant"].get<std::string>());
      m.delta = get_field(j, "delta", path + ".delta", m.delta);
      m.window = get_field(j, "window", path + ".window", m.window);
      m.horizon = get_field(j, "horizon", path + ".horizon", m.horizon);
      if (j.contains("population_size")) m.population_size = get_field(j, "population_size", path + ".population_size", 0);
    } else {
      field_error(path, "expected a variant name or an object");
    }
    m.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("field '", 0) == 0) throw;
    field_error(path, msg);
  }
  return m;
}

inline HttpTransportConfig parse_http(const nlohmann::json& j, const std::string& path) {
  HttpTransportConfig h;
  h.base_url = get_field(j, "base_url", path + ".base_url", h.base_url);
  h.path = get_field(j, "path", path + ".path", h.path);
  h.api_key_env = get_field(j, "api_key_env", path + ".api_key_env", h.api_key_env);
  h.timeout_s = get_field(j, "timeout_s", path + ".timeout_s", h.timeout_s);
  h.retries = get_field(j, "retries", path + ".retries", h.retries);
  h.backoff_s = get_field(j, "backoff_s", path + ".backoff_s", h.backoff_s);
  h.max_in_flight = get_field(j, "max_in_flight", path + ".max_in_flight", h.max_in_flight);
  if (h.retries < 0) field_error(path + ".retries", "must be >= 0");
  if (!(h.timeout_s > 0)) field_error(path + ".timeout_s", "must be positive");
  if (h.max_in_flight < 1) field_error(path + ".max_in_flight", "must be >= 1");
  return h;
}

inline TransportConfig parse_transport(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) field_error("transport", "expected an object");
  only_fields(j, "transport",
              {"type", "dir", "base_url", "path", "api_key_env", "timeout_s", "retries", "backoff_s", "max_in_flight"});
  TransportConfig t;
  t.type = get_field<std::string>(j, "type", "transport.type", "");
  if (t.type != "canned" && t.type != "http" && t.type != "record")
    field_error("transport.type", "must be one of canned, http, record");
  if (t.type != "http") {
    const std::string dir = get_field<std::string>(j, "dir", "transport.dir", "");
    if (dir.empty()) field_error("transport.dir", "required for " + t.type + " transports");
    t.dir = std::filesystem::path(dir).is_absolute() ? std::filesystem::path(dir) : base_dir / dir;
  }
  if (t.type != "canned") t.http = parse_http(j, "transport");
  return t;
}

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

// Serialized form written next to the logs; the digest is its SHA-256.
inline std::string canonical_config_text(const RunConfig& cfg) { return cfg.canonical.dump(2) + "\n"; }

inline std::shared_ptr<ChatTransport> make_transport(const TransportConfig& t) {
  if (t.type == "canned") return std::make_shared<CannedTransport>(t.dir);
  auto http = std::make_shared<HttpChatTransport>(t.http);
  if (t.type == "record") return std::make_shared<RecordingTransport>(http, t.dir);
  return http;
}

// Parses a run configuration document. Relative paths resolve against
// `base_dir`. Errors name the offending field.
inline RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  using detail::field_error;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  detail::only_fields(j, "",
                      {"schema", "game", "games", "game_params", "mechanism", "mechanisms", "mechanism_defaults",
                       "roster", "repeats", "seed", "parallelism", "require_complete", "transport", "replicator",
                       "bootstrap"});
  if (detail::get_field<std::string>(j, "schema", "schema", "") != kConfigSchema)
    field_error("schema", std::string("must be \"") + kConfigSchema + "\"");

  RunConfig cfg;
  if (j.contains("game") == j.contains("games")) field_error("games", "give exactly one of 'game' or 'games'");
  if (j.contains("game")) {
    cfg.games.push_back(detail::get_field<std::string>(j, "game", "game", ""));
  } else {
    if (!j["games"].is_array() || j["games"].empty()) field_error("games", "expected a non-empty array");
    cfg.games = detail::get_field<std::vector<std::string>>(j, "games", "games", {});
  }
  std::set<std::string> seen_games;
  for (std::size_t i = 0; i < cfg.games.size(); ++i) {
    const auto& names = builtin_game_names();
    if (std::find(names.begin(), names.end(), cfg.games[i]) == names.end())
      field_error("games[" + std::to_string(i) + "]", "unknown game '" + cfg.games[i] + "'");
    if (!seen_games.insert(cfg.games[i]).second) field_error("games[" + std::to_string(i) + "]", "duplicate game");
  }

  if (j.contains("game_params")) {
    const auto& gp = j["game_params"];
    if (!gp.is_object()) field_error("game_params", "expected an object");
    detail::only_fields(gp, "game_params", {"public_goods", "stag_hunt"});
    if (gp.contains("public_goods")) {
      const auto& pg = gp["public_goods"];
      detail::only_fields(pg, "game_params.public_goods", {"num_players", "multiplier"});
      PublicGoodsParams p;
      p.num_players = detail::get_field(pg, "num_players", "game_params.public_goods.num_players", p.num_players);
      p.multiplier = detail::get_field(pg, "multiplier", "game_params.public_goods.multiplier", p.multiplier);
      cfg.game_params.public_goods = p;
    }
    if (gp.contains("stag_hunt")) {
      const auto& sh = gp["stag_hunt"];
      detail::only_fields(sh, "game_params.stag_hunt", {"payoffs"});
      cfg.game_params.stag_hunt_payoffs =
          detail::get_field<std::vector<std::vector<double>>>(sh, "payoffs", "game_params.stag_hunt.payoffs", {});
    }
  }
  for (const auto& gname : cfg.games) {
    try {
      build_game(gname, cfg.game_params);
    } catch (const std::invalid_argument& e) {
      field_error("game_params", e.what());
    }
  }

  MechanismConfig defaults;
  if (j.contains("mechanism_defaults")) {
    const auto& d = j["mechanism_defaults"];
    if (!d.is_object()) field_error("mechanism_defaults", "expected an object");
    detail::only_fields(d, "mechanism_defaults", {"delta", "window", "horizon", "population_size"});
    nlohmann::json with_variant = d;
    with_variant["variant"] = "no_mechanism";
    defaults = detail::parse_mechanism(with_variant, defaults, "mechanism_defaults");
  }
  if (j.contains("mechanism") == j.contains("mechanisms"))
    field_error("mechanisms", "give exactly one of 'mechanism' or 'mechanisms'");
  if (j.contains("mechanism")) {
    cfg.mechanisms.push_back(detail::parse_mechanism(j["mechanism"], defaults, "mechanism"));
  } else {
    if (!j["mechanisms"].is_array() || j["mechanisms"].empty()) field_error("mechanisms", "expected a non-empty array");
    for (std::size_t i = 0; i < j["mechanisms"].size(); ++i)
      cfg.mechanisms.push_back(
          detail::parse_mechanism(j["mechanisms"][i], defaults, "mechanisms[" + std::to_string(i) + "]"));
  }
  std::set<Variant> seen_variants;
  for (std::size_t i = 0; i < cfg.mechanisms.size(); ++i)
    if (!seen_variants.insert(cfg.mechanisms[i].variant).second)
      field_error("mechanisms[" + std::to_string(i) + "]", "duplicate variant");

  if (!j.contains("roster") || !j["roster"].is_array() || j["roster"].empty())
    field_error("roster", "expected a non-empty array");
  for (std::size_t i = 0; i < j["roster"].size(); ++i) {
    const std::string path = "roster[" + std::to_string(i) + "]";
    try {
      AgentKind k = agent_kind_from_json(j["roster"][i]);
      check_agent_kind(k);
      cfg.roster.push_back(std::move(k));
    } catch (const ConfigError& e) {
      field_error(path, e.what());
    }
  }
  try {
    check_roster(cfg.roster);
  } catch (const ConfigError& e) {
    field_error("roster", e.what());
  }

  cfg.repeats = detail::get_field(j, "repeats", "repeats", cfg.repeats);
  if (cfg.repeats < 1) field_error("repeats", "must be >= 1");
  cfg.seed = detail::get_field<std::uint64_t>(j, "seed", "seed", cfg.seed);
  cfg.parallelism = detail::get_field(j, "parallelism", "parallelism", cfg.parallelism);
  if (cfg.parallelism < 1) field_error("parallelism", "must be >= 1");
  cfg.require_complete = detail::get_field(j, "require_complete", "require_complete", cfg.require_complete);
  cfg.bootstrap = detail::get_field(j, "bootstrap", "bootstrap", cfg.bootstrap);
  if (cfg.bootstrap < 0) field_error("bootstrap", "must be >= 0");
  if (j.contains("replicator")) {
    const auto& r = j["replicator"];
    if (!r.is_object()) field_error("replicator", "expected an object");
    detail::only_fields(r, "replicator", {"steps", "learning_rate"});
    cfg.replicator.steps = detail::get_field(r, "steps", "replicator.steps", cfg.replicator.steps);
    cfg.replicator.learning_rate =
        detail::get_field(r, "learning_rate", "replicator.learning_rate", cfg.replicator.learning_rate);
    try {
      cfg.replicator.validate();
    } catch (const ConfigError& e) {
      field_error("replicator", e.what());
    }
  }
  if (j.contains("transport")) cfg.transport = detail::parse_transport(j["transport"], base_dir);
  if (cfg.needs_transport() && !cfg.transport) field_error("transport", "required when the roster has External agents");

  // Reputation populations must split into full groups for every game.
  for (const auto& m : cfg.mechanisms) {
    if (!is_reputation(m.variant)) continue;
    for (const auto& gname : cfg.games) {
      const int n = build_game(gname, cfg.game_params).num_players();
      try {
        pooled_population(cfg.tournament(gname, m), n);
      } catch (const ConfigError& e) {
        field_error("mechanism population_size", std::string(e.what()) + " (game " + gname + ")");
      }
    }
  }

  cfg.canonical = j;
  cfg.digest = sha256_hex(canonical_config_text(cfg));
  return cfg;
}

inline RunConfig parse_run_config_text(const std::string& text, const std::filesystem::path& base_dir = ".") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: invalid JSON at " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
  return parse_run_config(j, base_dir);
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  try {
    return parse_run_config_text(os.str(), path.parent_path().empty() ? "." : path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace coopmech
