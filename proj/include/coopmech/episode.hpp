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
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopmech/decision.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"
#include "coopmech/game_io.hpp"
#include "coopmech/history.hpp"
#include "coopmech/mechanism.hpp"
#include "coopmech/rng.hpp"
#include "coopmech/wire.hpp"

namespace coopmech {

inline constexpr const char* kEpisodeSchema = "coopmech.episode/1";

// One play of the base game within an episode.
struct Play {
  HistoryRecord record;          // resolved actions and realized payoffs
  std::vector<int> chosen;       // mediation: chosen actions incl. Delegate
  std::vector<double> transfers;  // contracting: contract part of payoffs
};

struct AgentOutcome {
  int id = 0;
  std::string label;
  std::vector<int> seats;           // per round
  std::vector<double> raw_payoffs;  // per round
  double weighted_payoff = 0.0;
};

struct Transcript {
  int agent = 0;
  Phase phase = Phase::act;
  int round = 0;  // 0 outside the act phase
  std::string raw;
};

struct EpisodeAbort {
  int agent = -1;
  std::string label;
  Phase phase = Phase::act;
  int round = 0;
  std::string kind;  // "decision" or "transport"
  std::string message;
};

struct EpisodeRecord {
  std::string config_digest;
  long assignment = -1;  // seat assignment index; -1 for pooled episodes
  int repeat = 0;
  std::uint64_t seed = 0;
  nlohmann::json game;  // game document
  MechanismConfig mechanism;
  std::vector<std::string> roster;  // label per seat or population member
  std::vector<Proposal> proposals;
  std::vector<Ballot> ballots;
  std::optional<int> winner;
  std::vector<bool> signatures;
  bool contract_active = false;
  std::vector<Play> plays;
  std::vector<AgentOutcome> outcomes;
  std::vector<Transcript> transcripts;
  std::optional<EpisodeAbort> abort;

  bool ok() const { return !abort.has_value(); }
};

// --- serialization ---------------------------------------------------------

inline nlohmann::json to_json(const MechanismConfig& m) {
  nlohmann::json j{{"variant", to_string(m.variant)}, {"delta", m.delta}, {"window", m.window}, {"horizon", m.horizon}};
  if (m.population_size) j["population_size"] = *m.population_size;
  return j;
}

inline MechanismConfig mechanism_from_json(const nlohmann::json& j) {
  MechanismConfig m;
  m.variant = variant_from_string(j.at("variant").get<std::string>());
  m.delta = j.value("delta", m.delta);
  m.window = j.value("window", m.window);
  m.horizon = j.value("horizon", m.horizon);
  if (j.contains("population_size")) m.population_size = j["population_size"].get<int>();
  m.validate();
  return m;
}

inline nlohmann::json to_json(const Proposal& p) {
  nlohmann::json j{{"proposer", p.proposer}};
  if (const auto* m = std::get_if<MediatorSpec>(&p.spec)) {
    nlohmann::json plan = nlohmann::json::object();
    for (std::size_t d = 0; d < m->plan.size(); ++d) plan[std::to_string(d + 1)] = action_label(m->plan[d]);
    j["mediator"] = plan;
  } else {
    nlohmann::json t = nlohmann::json::object();
    const auto& c = std::get<ContractSpec>(p.spec);
    for (std::size_t a = 0; a < c.transfers.size(); ++a) t[action_label(static_cast<int>(a))] = c.transfers[a];
    j["contract"] = t;
  }
  return j;
}

inline Proposal proposal_from_json(const nlohmann::json& j) {
  Proposal p;
  p.proposer = j.at("proposer").get<int>();
  if (j.contains("mediator")) {
    const auto& plan = j["mediator"];
    MediatorSpec m;
    for (std::size_t d = 1; d <= plan.size(); ++d)
      m.plan.push_back(std::stoi(plan.at(std::to_string(d)).get<std::string>().substr(1)));
    p.spec = m;
  } else {
    const auto& t = j.at("contract");
    ContractSpec c;
    for (std::size_t a = 0; a < t.size(); ++a) c.transfers.push_back(t.at(action_label(static_cast<int>(a))).get<int>());
    p.spec = c;
  }
  return p;
}

inline nlohmann::json to_json(const EpisodeRecord& e) {
  nlohmann::json j;
  j["schema"] = kEpisodeSchema;
  j["config_digest"] = e.config_digest;
  j["assignment"] = e.assignment;
  j["repeat"] = e.repeat;
  j["seed"] = e.seed;
  j["status"] = e.ok() ? "ok" : "aborted";
  if (e.abort) {
    j["diagnostic"] = {{"agent", e.abort->agent},     {"label", e.abort->label},
                       {"phase", to_string(e.abort->phase)}, {"round", e.abort->round},
                       {"kind", e.abort->kind},       {"message", e.abort->message}};
  }
  j["game"] = e.game;
  j["mechanism"] = to_json(e.mechanism);
  j["roster"] = e.roster;
  if (!e.proposals.empty()) {
    j["proposals"] = nlohmann::json::array();
    for (const auto& p : e.proposals) j["proposals"].push_back(to_json(p));
  }
  if (!e.ballots.empty()) {
    j["ballots"] = nlohmann::json::array();
    for (const auto& b : e.ballots) j["ballots"].push_back(std::vector<bool>(b.begin(), b.end()));
  }
  if (e.winner) j["winner"] = *e.winner;
  if (!e.signatures.empty()) j["signatures"] = e.signatures;
  if (e.mechanism.variant == Variant::contracting) j["contract_active"] = e.contract_active;
  j["plays"] = nlohmann::json::array();
  for (const auto& p : e.plays) {
    nlohmann::json pj{{"round", p.record.round},
                      {"participants", p.record.participants},
                      {"actions", p.record.actions},
                      {"payoffs", p.record.payoffs}};
    if (!p.chosen.empty()) pj["chosen"] = p.chosen;
    if (!p.transfers.empty()) pj["transfers"] = p.transfers;
    j["plays"].push_back(std::move(pj));
  }
  j["agents"] = nlohmann::json::array();
  for (const auto& o : e.outcomes)
    j["agents"].push_back({{"id", o.id},
                           {"label", o.label},
                           {"seats", o.seats},
                           {"raw_payoffs", o.raw_payoffs},
                           {"weighted_payoff", o.weighted_payoff}});
  if (!e.transcripts.empty()) {
    j["transcripts"] = nlohmann::json::array();
    for (const auto& t : e.transcripts)
      j["transcripts"].push_back(
          {{"agent", t.agent}, {"phase", to_string(t.phase)}, {"round", t.round}, {"raw", t.raw}});
  }
  return j;
}

inline EpisodeRecord episode_from_json(const nlohmann::json& j) {
  try {
    if (j.value("schema", std::string{}) != kEpisodeSchema)
      throw ConfigError(std::string("episode record: schema must be '") + kEpisodeSchema + "'");
    EpisodeRecord e;
    e.config_digest = j.at("config_digest").get<std::string>();
    e.assignment = j.at("assignment").get<long>();
    e.repeat = j.at("repeat").get<int>();
    e.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("diagnostic")) {
      const auto& d = j["diagnostic"];
      e.abort = EpisodeAbort{d.at("agent").get<int>(),  d.at("label").get<std::string>(),
                             phase_from_string(d.at("phase").get<std::string>()), d.at("round").get<int>(),
                             d.at("kind").get<std::string>(), d.at("message").get<std::string>()};
    }
    e.game = j.at("game");
    e.mechanism = mechanism_from_json(j.at("mechanism"));
    e.roster = j.at("roster").get<std::vector<std::string>>();
    if (j.contains("proposals"))
      for (const auto& p : j["proposals"]) e.proposals.push_back(proposal_from_json(p));
    if (j.contains("ballots"))
      for (const auto& b : j["ballots"]) {
        auto v = b.get<std::vector<bool>>();
        e.ballots.emplace_back(v.begin(), v.end());
      }
    if (j.contains("winner")) e.winner = j["winner"].get<int>();
    if (j.contains("signatures")) e.signatures = j["signatures"].get<std::vector<bool>>();
    e.contract_active = j.value("contract_active", false);
    for (const auto& pj : j.at("plays")) {
      Play p;
      p.record.round = pj.at("round").get<int>();
      p.record.participants = pj.at("participants").get<std::vector<int>>();
      p.record.actions = pj.at("actions").get<std::vector<int>>();
      p.record.payoffs = pj.at("payoffs").get<std::vector<double>>();
      if (pj.contains("chosen")) p.chosen = pj["chosen"].get<std::vector<int>>();
      if (pj.contains("transfers")) p.transfers = pj["transfers"].get<std::vector<double>>();
      e.plays.push_back(std::move(p));
    }
    for (const auto& oj : j.at("agents")) {
      AgentOutcome o;
      o.id = oj.at("id").get<int>();
      o.label = oj.at("label").get<std::string>();
      o.seats = oj.at("seats").get<std::vector<int>>();
      o.raw_payoffs = oj.at("raw_payoffs").get<std::vector<double>>();
      o.weighted_payoff = oj.at("weighted_payoff").get<double>();
      e.outcomes.push_back(std::move(o));
    }
    if (j.contains("transcripts"))
      for (const auto& t : j["transcripts"])
        e.transcripts.push_back({t.at("agent").get<int>(), phase_from_string(t.at("phase").get<std::string>()),
                                 t.at("round").get<int>(), t.at("raw").get<std::string>()});
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("episode record: ") + ex.what());
  }
}

// --- pipeline ---------------------------------------------------------------

namespace detail {

struct EpisodeAborted {
  EpisodeAbort info;
};

class EpisodeRunner {
 public:
  EpisodeRunner(std::shared_ptr<const Game> game, const MechanismConfig& cfg, const std::vector<Agent*>& agents,
                const std::vector<std::string>& labels, Rng& rng, EpisodeRecord& rec)
      : game_(std::move(game)), cfg_(cfg), agents_(agents), labels_(labels), rng_(rng), rec_(rec) {}

  void run() {
    switch (cfg_.variant) {
      case Variant::no_mechanism: play_fixed(1); break;
      case Variant::repetition: play_fixed(cfg_.horizon); break;
      case Variant::reputation_minus:
      case Variant::reputation_plus: play_pooled(); break;
      case Variant::mediation: run_mediation(); break;
      case Variant::contracting: run_contracting(); break;
    }
  }

 private:
  DecisionRequest request(Phase phase, int seat) const {
    DecisionRequest r;
    r.phase = phase;
    r.game = game_;
    r.mechanism = cfg_;
    r.seat = seat;
    return r;
  }

  DecisionResponse ask(int agent, const DecisionRequest& req, int round) {
    try {
      DecisionResponse resp = agents_[agent]->decide(req);
      check_response(req, resp);
      if (!resp.raw.empty()) rec_.transcripts.push_back({agent, req.phase, round, resp.raw});
      return resp;
    } catch (const TransportError& e) {
      throw EpisodeAborted{{agent, labels_[agent], req.phase, round, "transport", e.what()}};
    } catch (const DecisionError& e) {
      throw EpisodeAborted{{agent, labels_[agent], req.phase, round, "decision", e.what()}};
    }
  }

  // Fixed partners: agent i sits in seat i for every round.
  void play_fixed(int rounds) {
    const int n = game_->num_players();
    std::vector<HistoryRecord> past;
    for (int t = 1; t <= rounds; ++t) {
      std::vector<MixedAction> mixed;
      for (int s = 0; s < n; ++s) {
        DecisionRequest req = request(Phase::act, s);
        if (cfg_.variant == Variant::repetition) req.history = repetition_view(past, cfg_.window);
        mixed.push_back(std::get<MixedAction>(ask(s, req, t).payload));
      }
      ActionProfile a = sample_profile(mixed, rng_);
      std::vector<int> participants(n);
      for (int s = 0; s < n; ++s) participants[s] = s;
      auto u = game_->payoffs(a);
      Play p{{t, participants, a, {u.begin(), u.end()}}, {}, {}};
      past.push_back(p.record);
      rec_.plays.push_back(std::move(p));
    }
  }

  void play_pooled() {
    const int n = game_->num_players();
    const int pop = static_cast<int>(agents_.size());
    ReputationLog log(pop);
    const bool higher = cfg_.variant == Variant::reputation_plus;
    std::vector<int> order(pop);
    for (int i = 0; i < pop; ++i) order[i] = i;
    for (int t = 1; t <= cfg_.horizon; ++t) {
      rng_.shuffle(order);
      std::vector<std::vector<int>> groups;
      for (int g = 0; g < pop / n; ++g) groups.emplace_back(order.begin() + g * n, order.begin() + (g + 1) * n);
      std::vector<std::vector<MixedAction>> mixed(groups.size());
      for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int s = 0; s < n; ++s) {
          const int id = groups[g][s];
          std::vector<int> co;
          for (int o : groups[g])
            if (o != id) co.push_back(o);
          DecisionRequest req = request(Phase::act, s);
          req.history = reputation_view(log, id, co, t, cfg_.window, higher);
          mixed[g].push_back(std::get<MixedAction>(ask(id, req, t).payload));
        }
      }
      log.add_round(groups);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        ActionProfile a = sample_profile(mixed[g], rng_);
        auto u = game_->payoffs(a);
        Play p{{t, groups[g], a, {u.begin(), u.end()}}, {}, {}};
        log.add(p.record);
        rec_.plays.push_back(std::move(p));
      }
    }
  }

  void collect_proposals(Phase phase) {
    for (int s = 0; s < game_->num_players(); ++s) {
      const DecisionPayload payload = ask(s, request(phase, s), 0).payload;
      if (const auto* m = std::get_if<MediatorSpec>(&payload))
        rec_.proposals.push_back({s, *m});
      else
        rec_.proposals.push_back({s, std::get<ContractSpec>(payload)});
    }
    for (int s = 0; s < game_->num_players(); ++s) {
      DecisionRequest req = request(Phase::vote, s);
      req.slate = rec_.proposals;
      rec_.ballots.push_back(std::get<Ballot>(ask(s, req, 0).payload));
    }
    std::vector<std::vector<bool>> ballots(rec_.ballots.begin(), rec_.ballots.end());
    rec_.winner = run_proposal_vote(rec_.proposals.size(), ballots, rng_);
  }

  void run_mediation() {
    const Game& g = *game_;
    const int n = g.num_players();
    collect_proposals(Phase::propose_mediator);
    const Proposal& chosen = rec_.proposals[*rec_.winner];
    const MediatorSpec& mediator = std::get<MediatorSpec>(chosen.spec);
    std::vector<MixedAction> mixed;
    for (int s = 0; s < n; ++s) {
      DecisionRequest req = request(Phase::act, s);
      req.selected = chosen;
      mixed.push_back(std::get<MixedAction>(ask(s, req, 1).payload));
    }
    ActionProfile picked(n);
    for (int s = 0; s < n; ++s) picked[s] = mixed[s].sample(rng_);
    const ActionProfile a = resolve_mediated(g, mediator, picked);
    std::vector<int> participants(n);
    for (int s = 0; s < n; ++s) participants[s] = s;
    auto u = g.payoffs(a);
    rec_.plays.push_back({{1, participants, a, {u.begin(), u.end()}}, picked, {}});
  }

  void run_contracting() {
    const Game& g = *game_;
    const int n = g.num_players();
    collect_proposals(Phase::propose_contract);
    const Proposal& chosen = rec_.proposals[*rec_.winner];
    for (int s = 0; s < n; ++s) {
      DecisionRequest req = request(Phase::sign, s);
      req.selected = chosen;
      rec_.signatures.push_back(std::get<SignDecision>(ask(s, req, 0).payload).sign);
    }
    rec_.contract_active = std::all_of(rec_.signatures.begin(), rec_.signatures.end(), [](bool b) { return b; });
    std::vector<MixedAction> mixed;
    for (int s = 0; s < n; ++s) {
      DecisionRequest req = request(Phase::act, s);
      if (rec_.contract_active) {
        req.selected = chosen;
        req.contract_active = true;
      }
      mixed.push_back(std::get<MixedAction>(ask(s, req, 1).payload));
    }
    const ActionProfile a = sample_profile(mixed, rng_);
    std::vector<int> participants(n);
    for (int s = 0; s < n; ++s) participants[s] = s;
    auto u = g.payoffs(a);
    std::vector<double> payoffs(u.begin(), u.end());
    std::vector<double> transfers;
    if (rec_.contract_active) {
      const Game v = apply_contract(g, std::get<ContractSpec>(chosen.spec));
      auto w = v.payoffs(a);
      for (int s = 0; s < n; ++s) transfers.push_back(w[s] - payoffs[s]);
      payoffs.assign(w.begin(), w.end());
    }
    rec_.plays.push_back({{1, participants, a, payoffs}, {}, transfers});
  }

  std::shared_ptr<const Game> game_;
  const MechanismConfig& cfg_;
  const std::vector<Agent*>& agents_;
  const std::vector<std::string>& labels_;
  Rng& rng_;
  EpisodeRecord& rec_;
};

}  // namespace detail

// Runs one play-through of `game` under the mechanism. Fixed-partner
// variants take one agent per seat; reputation variants take the whole
// pooled population, whose size must be a multiple of the player count.
// Malformed decisions and transport failures abort the episode; the
// returned record then carries the diagnostic and no outcomes.
inline EpisodeRecord run_episode(std::shared_ptr<const Game> game, const MechanismConfig& cfg,
                                 const std::vector<Agent*>& agents, const std::vector<std::string>& labels,
                                 std::uint64_t seed) {
  if (!game) throw std::invalid_argument("run_episode: missing game");
  cfg.validate();
  const int n = game->num_players();
  const int count = static_cast<int>(agents.size());
  if (labels.size() != agents.size()) throw std::invalid_argument("run_episode: one label per agent required");
  if (is_reputation(cfg.variant)) {
    if (count < n || count % n != 0)
      throw ConfigError("run_episode: population of " + std::to_string(count) + " cannot be split into groups of " +
                        std::to_string(n));
  } else if (count != n) {
    throw ConfigError("run_episode: " + std::to_string(n) + " agents required, got " + std::to_string(count));
  }
  if ((cfg.variant == Variant::mediation || cfg.variant == Variant::contracting) && !game->shares_action_labels())
    throw ConfigError("run_episode: mediation and contracting need a shared action label set");

  EpisodeRecord rec;
  rec.seed = seed;
  rec.game = game_to_json(*game);
  rec.mechanism = cfg;
  rec.roster = labels;
  Rng rng(seed);
  try {
    detail::EpisodeRunner(game, cfg, agents, labels, rng, rec).run();
  } catch (const detail::EpisodeAborted& a) {
    rec.abort = a.info;
    return rec;
  }

  for (int id = 0; id < count; ++id) rec.outcomes.push_back({id, labels[id], {}, {}, 0.0});
  for (const auto& p : rec.plays)
    for (std::size_t s = 0; s < p.record.participants.size(); ++s) {
      AgentOutcome& o = rec.outcomes[p.record.participants[s]];
      o.seats.push_back(static_cast<int>(s));
      o.raw_payoffs.push_back(p.record.payoffs[s]);
    }
  for (auto& o : rec.outcomes) o.weighted_payoff = repetition_weighted_payoff(o.raw_payoffs, cfg.delta);
  return rec;
}

// Per-agent payoff rescaled so the all-defect outcome maps to 0 and the
// all-cooperate outcome to 1: each round is normalized for the seat taken
// in that round, then rounds are combined with the episode's weighting.
inline double normalized_outcome(const Game& game, const AgentOutcome& o, double delta) {
  std::vector<double> norm;
  norm.reserve(o.raw_payoffs.size());
  for (std::size_t t = 0; t < o.raw_payoffs.size(); ++t)
    norm.push_back(normalize_payoff(game, o.seats[t], o.raw_payoffs[t]));
  return repetition_weighted_payoff(norm, delta);
}

}  // namespace coopmech
