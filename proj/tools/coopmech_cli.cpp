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

#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coopmech/config.hpp"
#include "coopmech/demo.hpp"
#include "coopmech/external.hpp"
#include "coopmech/game_io.hpp"
#include "coopmech/prompt.hpp"
#include "coopmech/report.hpp"
#include "coopmech/run.hpp"
#include "coopmech/theorem.hpp"

namespace {

using namespace coopmech;

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kVerification = 3, kTransport = 4, kIncomplete = 5 };

int cmd_run(const std::string& config_path, const std::string& out, bool quiet) {
  const RunConfig cfg = load_run_config(config_path);
  std::shared_ptr<ChatTransport> transport;
  if (cfg.transport) transport = make_transport(*cfg.transport);
  const auto progress = [&](const std::string& line) {
    if (!quiet) std::cerr << line << "\n";
  };
  const RunSummary s = run_sweep(cfg, out, transport, progress);
  for (const auto& c : s.combinations)
    std::cout << c.mechanism << "/" << c.game << ": " << c.ok << "/" << c.planned << " ok, " << c.decision_aborts
              << " decision aborts, " << c.transport_aborts << " transport aborts\n";
  std::cout << s.new_episodes << " new episode(s); run " << (s.complete() ? "complete" : "incomplete") << "\n";
  if (s.transport_aborts() > 0) {
    std::cerr << "error: " << s.transport_aborts() << " episode(s) hit transport failures; rerun to retry them\n";
    return kTransport;
  }
  if (!s.complete() && cfg.require_complete) {
    std::cerr << "error: run incomplete and require_complete is set\n";
    return kIncomplete;
  }
  return kOk;
}

int cmd_analyze(const std::string& dir, std::string dest, bool check) {
  const AnalysisResult res = analyze_run(dir);
  if (dest.empty()) dest = (fs::path(dir) / "analysis").string();
  if (!res.manifest_complete) std::cerr << "warning: run is incomplete or still in progress\n";
  for (const auto& m : res.missing)
    std::cerr << "missing: " << m.mechanism << "/" << m.game << " cell " << m.cell << " has " << m.have << " of "
              << m.want << " episode(s)\n";
  const std::string table = summary_csv(res.rows);
  if (check) {
    std::ifstream in(fs::path(dest) / "summary.csv", std::ios::binary);
    if (!in) throw ConfigError("no summary.csv to check in " + dest);
    std::ostringstream os;
    os << in.rdbuf();
    if (os.str() != table) {
      std::cerr << "error: " << (fs::path(dest) / "summary.csv").string() << " differs from the recomputed table\n";
      return kVerification;
    }
    std::cout << "summary.csv matches the episode logs\n";
    return kOk;
  }
  write_analysis(res, dest);
  std::cout << table;
  return kOk;
}

int cmd_verify(const std::string& game, const std::string& mechanism, double delta, bool all, bool json) {
  std::vector<std::pair<std::string, Variant>> cases;
  if (all) {
    for (const auto& g : dilemma_names())
      for (Variant v : {Variant::repetition, Variant::reputation_plus, Variant::mediation, Variant::contracting})
        cases.emplace_back(g, v);
  } else {
    if (game.empty() || mechanism.empty()) throw ConfigError("verify-theorem: give --game and --mechanism, or --all");
    cases.emplace_back(game, variant_from_string(mechanism));
  }
  bool ok = true;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& [g, v] : cases) {
    const TheoremReport rep = verify_theorem(g, v, delta);
    if (json) reports.push_back(to_json(rep));
    else std::cout << format_report(rep);
    ok = ok && rep.passed();
  }
  if (json) std::cout << reports.dump(2) << "\n";
  return ok ? kOk : kVerification;
}

int cmd_list_games(bool json) {
  if (json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& name : builtin_game_names()) out.push_back(game_to_json(build_game(name)));
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  for (const auto& name : builtin_game_names()) {
    const Game g = build_game(name);
    std::cout << name << ": " << g.num_players() << " players, " << g.num_actions(0) << " actions each\n";
  }
  return kOk;
}

int cmd_render(const std::string& game, const std::string& mechanism, const std::string& phase, int seat,
               bool messages, bool direct, const MechanismConfig& base) {
  auto g = std::make_shared<const Game>(build_game(game));
  MechanismConfig m = base;
  m.variant = variant_from_string(mechanism);
  m.validate();
  const Phase p = phase_from_string(phase);
  const auto phases = variant_phases(m.variant);
  if (std::find(phases.begin(), phases.end(), p) == phases.end())
    throw ConfigError("render-prompt: " + mechanism + " has no " + phase + " phase");
  if (seat < 0 || seat >= g->num_players()) throw ConfigError("render-prompt: seat out of range");
  const DecisionRequest req = demo_request(g, m, p, seat);
  if (!messages) {
    std::cout << render_prompt(req) << "\n";
    return kOk;
  }
  for (const auto& msg : build_messages(req, !direct)) std::cout << "=== " << msg.role << " ===\n" << msg.content << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mechanism tournaments for cooperative play in social dilemmas"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* run = app.add_subcommand("run", "run the tournaments of a config, resuming an existing log");
  std::string config_path, out_dir;
  bool quiet = false;
  run->add_option("config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "output directory")->required();
  run->add_flag("-q,--quiet", quiet, "no progress on stderr");

  auto* analyze = app.add_subcommand("analyze", "compute the summary table and metric exports of a run");
  std::string log_dir, dest;
  bool check = false;
  analyze->add_option("dir", log_dir, "run output directory")->required();
  analyze->add_option("--dest", dest, "where to write the tables (default <dir>/analysis)");
  analyze->add_flag("--check", check, "recompute and compare against an existing summary.csv");

  auto* verify = app.add_subcommand("verify-theorem", "check the cooperative construction for a game and mechanism");
  std::string v_game, v_mech;
  double v_delta = 0.8;
  bool v_all = false, v_json = false;
  verify->add_option("--game", v_game, "built-in game");
  verify->add_option("--mechanism", v_mech, "repetition, reputation_plus, mediation or contracting");
  verify->add_option("--delta", v_delta, "continuation probability")->capture_default_str();
  verify->add_flag("--all", v_all, "every dilemma under every mechanism");
  verify->add_flag("--json", v_json, "machine-readable reports with the threshold certificate");

  auto* list = app.add_subcommand("list-games", "list the built-in games");
  bool list_json = false;
  list->add_flag("--json", list_json, "full game documents");

  auto* render = app.add_subcommand("render-prompt", "print the prompt an agent sees at one decision point");
  std::string r_game = "prisoners", r_mech = "no_mechanism", r_phase = "act";
  int r_seat = 0;
  bool r_messages = false, r_direct = false;
  MechanismConfig r_base;
  render->add_option("--game", r_game, "built-in game")->capture_default_str();
  render->add_option("--mechanism", r_mech, "mechanism variant")->capture_default_str();
  render->add_option("--phase", r_phase, "act, propose_mediator, propose_contract, vote or sign")->capture_default_str();
  render->add_option("--seat", r_seat, "seat of the viewing player")->capture_default_str();
  render->add_option("--delta", r_base.delta, "continuation probability")->capture_default_str();
  render->add_option("--window", r_base.window, "history rounds shown")->capture_default_str();
  render->add_flag("--messages", r_messages, "print the full chat messages, system prompt included");
  render->add_flag("--direct", r_direct, "with --messages: ask for the answer without reasoning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, quiet);
    if (*analyze) return cmd_analyze(log_dir, dest, check);
    if (*verify) return cmd_verify(v_game, v_mech, v_delta, v_all, v_json);
    if (*list) return cmd_list_games(list_json);
    if (*render) return cmd_render(r_game, r_mech, r_phase, r_seat, r_messages, r_direct, r_base);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return kTransport;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
