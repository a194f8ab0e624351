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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopmech/config.hpp"
#include "coopmech/episode.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/tournament.hpp"

namespace coopmech {

inline constexpr const char* kManifestSchema = "coopmech.manifest/1";

namespace fs = std::filesystem;

inline fs::path episode_log_path(const fs::path& out, const std::string& mechanism, const std::string& game) {
  return out / mechanism / game / "episodes.jsonl";
}

struct LogContents {
  std::vector<EpisodeRecord> records;
  bool truncated = false;  // a partial trailing line was dropped
};

// Reads an episode log. A final line without its newline is the remains of
// an interrupted write and is ignored; with `repair` it is cut off the file.
inline LogContents read_episode_log(const fs::path& path, bool repair = false) {
  LogContents out;
  if (!fs::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  const std::string text = os.str();
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) {
      out.truncated = true;
      break;
    }
    const std::string line = text.substr(pos, nl - pos);
    if (!line.empty()) {
      try {
        out.records.push_back(episode_from_json(nlohmann::json::parse(line)));
      } catch (const std::exception& e) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": malformed episode record: " + e.what());
      }
    }
    pos = nl + 1;
  }
  if (out.truncated && repair) fs::resize_file(path, pos);
  return out;
}

// Latest record per (assignment, repeat); a rerun after a transport failure
// appends a replacement.
inline std::vector<EpisodeRecord> latest_records(const std::vector<EpisodeRecord>& records) {
  std::map<std::pair<long, int>, std::size_t> last;
  for (std::size_t i = 0; i < records.size(); ++i) last[{records[i].assignment, records[i].repeat}] = i;
  std::vector<EpisodeRecord> out;
  for (const auto& [key, i] : last) out.push_back(records[i]);
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct CombinationCount {
  std::string mechanism;
  std::string game;
  long planned = 0;
  long logged = 0;
  long ok = 0;
  long decision_aborts = 0;
  long transport_aborts = 0;
};

struct RunSummary {
  std::vector<CombinationCount> combinations;
  long new_episodes = 0;

  bool complete() const {
    for (const auto& c : combinations)
      if (c.ok != c.planned) return false;
    return true;
  }
  long transport_aborts() const {
    long n = 0;
    for (const auto& c : combinations) n += c.transport_aborts;
    return n;
  }
};

inline nlohmann::json manifest_json(const RunConfig& cfg, const RunSummary& s, const std::string& started,
                                    const std::string& finished) {
  nlohmann::json combos = nlohmann::json::array();
  for (const auto& c : s.combinations)
    combos.push_back({{"mechanism", c.mechanism},
                      {"game", c.game},
                      {"planned", c.planned},
                      {"logged", c.logged},
                      {"ok", c.ok},
                      {"decision_aborts", c.decision_aborts},
                      {"transport_aborts", c.transport_aborts}});
  return {{"schema", kManifestSchema},
          {"config_digest", cfg.digest},
          {"tool_version", kToolVersion},
          {"seed", cfg.seed},
          {"started", started},
          {"finished", finished},
          {"complete", s.complete()},
          {"combinations", combos}};
}

// Runs every (mechanism, game) tournament of the config into `out`. Logged
// episodes are skipped, except transport failures, which are retried. The
// manifest is written last and only by a run that got through the sweep.
inline RunSummary run_sweep(const RunConfig& cfg, const fs::path& out, const std::shared_ptr<ChatTransport>& transport,
                            const std::function<void(const std::string&)>& progress = {}) {
  fs::create_directories(out);
  const fs::path config_path = out / "config.json";
  const std::string text = canonical_config_text(cfg);
  if (fs::exists(config_path)) {
    std::ifstream in(config_path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    if (sha256_hex(os.str()) != cfg.digest)
      throw ConfigError("output directory " + out.string() + " holds a run of a different config (digest mismatch)");
  } else {
    std::ofstream(config_path, std::ios::binary) << text;
  }
  fs::remove(out / "manifest.json");
  const std::string started = utc_timestamp();

  RunSummary summary;
  for (const auto& mech : cfg.mechanisms) {
    for (const auto& gname : cfg.games) {
      const TournamentConfig tc = cfg.tournament(gname, mech);
      const Game game = build_game(gname, cfg.game_params);
      const fs::path log = episode_log_path(out, to_string(mech.variant), gname);
      fs::create_directories(log.parent_path());
      const LogContents existing = read_episode_log(log, true);
      std::set<std::pair<long, int>> done;
      for (const auto& r : existing.records) {
        if (r.config_digest != cfg.digest)
          throw ConfigError(log.string() + ": record with foreign config digest " + r.config_digest);
        if (!r.abort || r.abort->kind != "transport") done.insert({r.assignment, r.repeat});
        else done.erase({r.assignment, r.repeat});
      }
      if (progress)
        progress(std::string(to_string(mech.variant)) + "/" + gname + ": " + std::to_string(done.size()) +
                 " logged, running the rest");

      std::ofstream sink(log, std::ios::binary | std::ios::app);
      if (!sink) throw ConfigError("cannot write " + log.string());
      run_tournament(tc, transport, done, [&](const EpisodeRecord& rec) {
        sink << to_json(rec).dump() << '\n';
        sink.flush();
        ++summary.new_episodes;
      });
      sink.close();

      CombinationCount c;
      c.mechanism = to_string(mech.variant);
      c.game = gname;
      c.planned = static_cast<long>(plan_episodes(tc, game).size());
      for (const auto& r : latest_records(read_episode_log(log).records)) {
        ++c.logged;
        if (r.ok()) ++c.ok;
        else if (r.abort->kind == "transport") ++c.transport_aborts;
        else ++c.decision_aborts;
      }
      summary.combinations.push_back(c);
    }
  }
  std::ofstream(out / "manifest.json", std::ios::binary) << manifest_json(cfg, summary, started, utc_timestamp()).dump(2)
                                                         << '\n';
  return summary;
}

}  // namespace coopmech
