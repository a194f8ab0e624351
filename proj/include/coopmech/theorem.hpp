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
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "coopmech/episode.hpp"
#include "coopmech/equilibrium.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"
#include "coopmech/mechanism.hpp"
#include "coopmech/scripted.hpp"

namespace coopmech {

struct TheoremCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TheoremReport {
  std::string game;
  Variant variant = Variant::repetition;
  double delta = 0.8;
  std::vector<TheoremCheck> checks;
  std::optional<SpeCertificate> certificate;  // repetition and reputation_plus

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
};

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

namespace detail {

inline std::string join_values(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
  return out + "]";
}

inline void add_threshold_checks(TheoremReport& rep, const Game& g, double delta) {
  const SpeCertificate cert = grim_trigger_threshold(g, g.coop_profile(), pure_strategy(g, g.defect_profile()));
  rep.certificate = cert;
  rep.checks.push_back({"punishment profile is a Nash equilibrium", is_pure_nash(g, g.defect_profile()), ""});
  rep.checks.push_back({"one-shot deviation deterred at delta",
                        cert.verdict(delta),
                        "delta*=" + format_double(cert.delta_threshold) + " delta=" + format_double(delta) +
                            " gain=" + join_values(cert.deviation_gain) + " surplus=" + join_values(cert.surplus) +
                            " loose delta*=" + format_double(cert.loose_threshold)});
}

// Plays a population of `rule` agents and checks every recorded round is
// the cooperative profile.
inline TheoremCheck cooperative_path(const std::shared_ptr<const Game>& g, Variant v, ScriptedRule rule, int pop) {
  MechanismConfig cfg;
  cfg.variant = v;
  std::vector<std::unique_ptr<ScriptedAgent>> owned;
  std::vector<Agent*> agents;
  std::vector<std::string> labels;
  for (int i = 0; i < pop; ++i) {
    owned.push_back(std::make_unique<ScriptedAgent>(rule));
    agents.push_back(owned.back().get());
    labels.push_back(to_string(rule));
  }
  const EpisodeRecord rec = run_episode(g, cfg, agents, labels, 1);
  bool ok = rec.ok() && !rec.plays.empty();
  for (const auto& p : rec.plays) ok = ok && p.record.actions == g->coop_profile();
  return {"scripted construction stays on the cooperative path", ok,
          std::to_string(rec.plays.size()) + " plays, " + std::to_string(pop) + " agents"};
}

}  // namespace detail

// Builds the cooperation construction for a variant and checks it:
// repetition and reputation_plus via the deviation threshold (grim trigger
// and the Standing norm), mediation via the all-delegate equilibrium of
// the augmented game, contracting via weak dominance and budget balance.
inline TheoremReport verify_theorem(const std::string& game_name, Variant variant, double delta,
                                    const GameParams& params = {}) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("verify-theorem: delta must lie in (0, 1)");
  auto g = std::make_shared<const Game>(build_game(game_name, params));
  TheoremReport rep;
  rep.game = game_name;
  rep.variant = variant;
  rep.delta = delta;
  switch (variant) {
    case Variant::repetition:
      detail::add_threshold_checks(rep, *g, delta);
      rep.checks.push_back(detail::cooperative_path(g, variant, ScriptedRule::grim_trigger, g->num_players()));
      break;
    case Variant::reputation_plus:
      detail::add_threshold_checks(rep, *g, delta);
      rep.checks.push_back(detail::cooperative_path(g, variant, ScriptedRule::standing_norm, 4 * g->num_players()));
      break;
    case Variant::mediation: {
      const MediatorSpec mu = theorem_mediator(*g);
      const Game aug = augment_with_mediator(*g, mu);
      ActionProfile all(g->num_players());
      for (int p = 0; p < g->num_players(); ++p) all[p] = delegate_action(*g, p);
      std::string plan;
      for (std::size_t d = 0; d < mu.plan.size(); ++d)
        plan += (d ? ", " : "") + std::to_string(d + 1) + "->" + action_label(mu.plan[d]);
      rep.checks.push_back({"all-delegate is a pure Nash equilibrium of the augmented game", is_pure_nash(aug, all),
                            "plan {" + plan + "}, max deviation gain " + format_double(max_deviation_gain(aug, all))});
      rep.checks.push_back({"all-delegate resolves to the cooperative profile",
                            resolve_mediated(*g, mu, all) == g->coop_profile(), ""});
      break;
    }
    case Variant::contracting: {
      const ContractSpec chi = theorem_contract(*g);
      const Game v = apply_contract(*g, chi);
      double imbalance = 0.0;
      for (std::size_t i = 0; i < g->num_profiles(); ++i) {
        const ActionProfile a = g->profile_at(i);
        double before = 0.0, after = 0.0;
        for (int p = 0; p < g->num_players(); ++p) {
          before += g->payoff(a, p);
          after += v.payoff(a, p);
        }
        imbalance = std::max(imbalance, std::fabs(after - before));
      }
      std::string transfers;
      for (std::size_t a = 0; a < chi.transfers.size(); ++a)
        transfers += (a ? ", " : "") + action_label(static_cast<int>(a)) + ":" + format_double(chi.transfers[a]);
      rep.checks.push_back({"cooperative profile is weakly dominant under the contract",
                            is_weakly_dominant_profile(v, g->coop_profile()),
                            "transfers {" + transfers + "}, M=" + std::to_string(contract_margin(*g))});
      rep.checks.push_back({"contract is budget balanced", imbalance == 0.0,
                            "max welfare change " + format_double(imbalance)});
      std::vector<double> coop_before, coop_after;
      for (int p = 0; p < g->num_players(); ++p) {
        coop_before.push_back(g->payoff(g->coop_profile(), p));
        coop_after.push_back(v.payoff(g->coop_profile(), p));
      }
      rep.checks.push_back({"cooperative payoffs unchanged by the contract", coop_before == coop_after,
                            detail::join_values(coop_after)});
      break;
    }
    default:
      throw ConfigError(std::string("verify-theorem: no construction for ") + to_string(variant) +
                        " (use repetition, reputation_plus, mediation or contracting)");
  }
  return rep;
}

inline nlohmann::json to_json(const TheoremReport& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) checks.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  nlohmann::json j = {{"game", rep.game},
                      {"variant", to_string(rep.variant)},
                      {"delta", rep.delta},
                      {"passed", rep.passed()},
                      {"checks", checks}};
  if (rep.certificate) j["certificate"] = to_json(*rep.certificate, rep.delta);
  return j;
}

inline std::string format_report(const TheoremReport& rep) {
  std::ostringstream os;
  os << rep.game << " / " << to_string(rep.variant) << " (delta " << format_double(rep.delta)
     << "): " << (rep.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : rep.checks) {
    os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  return os.str();
}

}  // namespace coopmech
