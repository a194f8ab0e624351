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

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "coopmech/episode.hpp"
#include "coopmech/scripted.hpp"

namespace coopmech {
namespace {

std::shared_ptr<const Game> game(const std::string& name) { return std::make_shared<const Game>(build_game(name)); }

MechanismConfig mech(Variant v) {
  MechanismConfig m;
  m.variant = v;
  return m;
}

struct Seats {
  std::vector<std::unique_ptr<Agent>> owned;
  std::vector<Agent*> ptrs;
  std::vector<std::string> labels;

  Seats& add(std::unique_ptr<Agent> a, std::string label) {
    ptrs.push_back(a.get());
    owned.push_back(std::move(a));
    labels.push_back(std::move(label));
    return *this;
  }
  Seats& add(ScriptedRule r, int count = 1) {
    for (int i = 0; i < count; ++i) add(std::make_unique<ScriptedAgent>(r), to_string(r));
    return *this;
  }
};

EpisodeRecord run(const std::string& g, const MechanismConfig& m, Seats& s, std::uint64_t seed = 1) {
  return run_episode(game(g), m, s.ptrs, s.labels, seed);
}

// Records every request and delegates to a scripted rule.
class Spy : public Agent {
 public:
  explicit Spy(ScriptedRule r) : inner_(r) {}
  DecisionResponse decide(const DecisionRequest& req) override {
    seen.push_back(req);
    return inner_.decide(req);
  }
  std::vector<DecisionRequest> seen;

 private:
  ScriptedAgent inner_;
};

class Failing : public Agent {
 public:
  Failing(bool transport, Phase when) : transport_(transport), when_(when) {}
  DecisionResponse decide(const DecisionRequest& req) override {
    if (req.phase == when_) {
      if (transport_) throw TransportError("connection reset");
      throw DecisionError("sum_not_100: weights sum to 90");
    }
    return ScriptedAgent(ScriptedRule::always_cooperate).decide(req);
  }

 private:
  bool transport_;
  Phase when_;
};

double weighted_oracle(const std::vector<double>& x, double delta) {
  double num = 0, den = 0, w = 1;
  for (double v : x) {
    num += w * v;
    den += w;
    w *= delta;
  }
  return num / den;
}

TEST(Episode, OneShotPayoffs) {
  Seats s;
  s.add(ScriptedRule::always_defect).add(ScriptedRule::always_cooperate);
  const auto rec = run("prisoners", mech(Variant::no_mechanism), s);
  ASSERT_FALSE(rec.abort);
  ASSERT_EQ(rec.plays.size(), 1u);
  EXPECT_EQ(rec.plays[0].record.actions, (ActionProfile{1, 0}));
  EXPECT_EQ(rec.outcomes[0].weighted_payoff, 3.0);
  EXPECT_EQ(rec.outcomes[1].weighted_payoff, 0.0);
  const Game pd = build_game("prisoners");
  EXPECT_DOUBLE_EQ(normalized_outcome(pd, rec.outcomes[0], 0.8), 2.0);
  EXPECT_DOUBLE_EQ(normalized_outcome(pd, rec.outcomes[1], 0.8), -1.0);
}

TEST(Episode, ReplayIsDeterministic) {
  for (Variant v : {Variant::no_mechanism, Variant::repetition, Variant::reputation_plus, Variant::mediation,
                    Variant::contracting}) {
    auto make = [&] {
      auto s = std::make_unique<Seats>();
      s->add(ScriptedRule::uniform_random, 4);
      return s;
    };
    auto a = make(), b = make(), c = make();
    const int pop = is_reputation(v) ? 4 : 2;
    a->ptrs.resize(pop), a->labels.resize(pop), b->ptrs.resize(pop), b->labels.resize(pop), c->ptrs.resize(pop),
        c->labels.resize(pop);
    const auto ra = run("prisoners", mech(v), *a, 42), rb = run("prisoners", mech(v), *b, 42);
    EXPECT_EQ(to_json(ra).dump(), to_json(rb).dump()) << to_string(v);
    if (v == Variant::repetition || is_reputation(v)) {
      EXPECT_NE(to_json(ra).dump(), to_json(run("prisoners", mech(v), *c, 43)).dump()) << to_string(v);
    }
  }
}

TEST(Episode, RepetitionWeightsAndLength) {
  Seats s;
  s.add(ScriptedRule::grim_trigger).add(ScriptedRule::always_defect);
  MechanismConfig m = mech(Variant::repetition);
  const auto rec = run("prisoners", m, s);
  ASSERT_EQ(rec.plays.size(), 15u);
  EXPECT_EQ(rec.plays[0].record.actions, (ActionProfile{0, 1}));
  for (std::size_t t = 1; t < rec.plays.size(); ++t) EXPECT_EQ(rec.plays[t].record.actions, (ActionProfile{1, 1}));
  std::vector<double> u0(15, 1.0);
  u0[0] = 0.0;
  EXPECT_NEAR(rec.outcomes[0].weighted_payoff, weighted_oracle(u0, 0.8), 1e-12);
  EXPECT_EQ(rec.outcomes[0].raw_payoffs, u0);
}

TEST(Episode, HistoryWindowProperty) {
  for (int k : {1, 2, 3, 7}) {
    auto spy = std::make_unique<Spy>(ScriptedRule::tit_for_tat);
    Spy* raw = spy.get();
    Seats s;
    s.add(std::move(spy), "Spy").add(ScriptedRule::uniform_random);
    MechanismConfig m = mech(Variant::repetition);
    m.window = k;
    m.horizon = 6;
    const auto rec = run("prisoners", m, s, 5);
    ASSERT_EQ(raw->seen.size(), 6u);
    for (int t = 1; t <= 6; ++t) {
      const HistoryView& h = raw->seen[t - 1].history;
      EXPECT_EQ(h.rounds_played, t - 1);
      ASSERT_EQ(static_cast<int>(h.recent.size()), std::min(k, t - 1));
      for (std::size_t i = 0; i < h.recent.size(); ++i) {
        EXPECT_EQ(h.recent[i].round, t - 1 - static_cast<int>(i));  // newest first
        EXPECT_EQ(h.recent[i], rec.plays[t - 2 - i].record);
      }
    }
  }
}

TEST(Episode, ContractTransfersCancel) {
  for (const auto& g : {"prisoners", "public_goods", "travelers", "trust", "stag_hunt"}) {
    auto G = game(g);
    Seats s;
    s.add(ScriptedRule::theorem_contract, G->num_players());
    const auto rec = run(g, mech(Variant::contracting), s);
    ASSERT_FALSE(rec.abort) << g;
    EXPECT_TRUE(rec.contract_active) << g;
    ASSERT_EQ(rec.plays.size(), 1u);
    const Play& p = rec.plays[0];
    EXPECT_EQ(p.record.actions, G->coop_profile()) << g;
    double total = 0;
    for (double t : p.transfers) total += t;
    EXPECT_NEAR(total, 0.0, 1e-9) << g;
    const auto base = G->payoffs(p.record.actions);
    for (int i = 0; i < G->num_players(); ++i) EXPECT_NEAR(p.record.payoffs[i], base[i] + p.transfers[i], 1e-12);
  }
}

TEST(Episode, ContractNeedsEverySignature) {
  Seats s;
  // both propose the zero contract, which the best-response voter refuses to sign
  s.add(ScriptedRule::always_cooperate).add(ScriptedRule::best_response_voter);
  const auto rec = run("prisoners", mech(Variant::contracting), s);
  ASSERT_FALSE(rec.abort);
  ASSERT_EQ(rec.proposals.size(), 2u);
  ASSERT_EQ(rec.ballots.size(), 2u);
  ASSERT_TRUE(rec.winner);
  EXPECT_FALSE(rec.contract_active);
  EXPECT_TRUE(rec.plays[0].transfers.empty());
  EXPECT_EQ(rec.signatures, (std::vector<bool>{true, false}));
  EXPECT_EQ(rec.plays[0].record.payoffs, (std::vector<double>{0, 3}));
}

TEST(Episode, MediationDelegationResolves) {
  Seats s;
  s.add(ScriptedRule::theorem_mediator, 3);
  const auto rec = run("public_goods", mech(Variant::mediation), s);
  ASSERT_FALSE(rec.abort);
  const Play& p = rec.plays.at(0);
  EXPECT_EQ(p.chosen, (std::vector<int>{2, 2, 2}));
  EXPECT_EQ(p.record.actions, (ActionProfile{0, 0, 0}));
  Seats t;
  t.add(ScriptedRule::theorem_mediator, 2).add(ScriptedRule::always_defect);
  const auto r2 = run("public_goods", mech(Variant::mediation), t);
  // two delegators get the punishing action
  EXPECT_EQ(r2.plays.at(0).record.actions, (ActionProfile{1, 1, 1}));
}

TEST(Episode, AbortsCarryDiagnostics) {
  for (bool transport : {false, true}) {
    Seats s;
    s.add(ScriptedRule::always_cooperate).add(std::make_unique<Failing>(transport, Phase::sign), "Flaky");
    const auto rec = run("prisoners", mech(Variant::contracting), s);
    ASSERT_TRUE(rec.abort);
    EXPECT_EQ(rec.abort->kind, transport ? "transport" : "decision");
    EXPECT_EQ(rec.abort->agent, 1);
    EXPECT_EQ(rec.abort->label, "Flaky");
    EXPECT_EQ(rec.abort->phase, Phase::sign);
    EXPECT_TRUE(rec.outcomes.empty());
    EXPECT_TRUE(rec.plays.empty());
  }
}

TEST(Episode, MalformedScriptedShapeAborts) {
  Seats s;
  s.add(std::make_unique<ScriptedAgent>(ScriptedRule::always_action, 3), "AlwaysA3").add(ScriptedRule::always_defect);
  const auto rec = run("prisoners", mech(Variant::no_mechanism), s);
  ASSERT_TRUE(rec.abort);
  EXPECT_EQ(rec.abort->kind, "decision");
}

TEST(Episode, JsonRoundTrip) {
  for (Variant v : {Variant::repetition, Variant::reputation_minus, Variant::mediation, Variant::contracting}) {
    Seats s;
    s.add(ScriptedRule::uniform_random, is_reputation(v) ? 4 : 2);
    const auto rec = run("prisoners", mech(v), s, 9);
    const auto j = to_json(rec);
    EXPECT_EQ(to_json(episode_from_json(nlohmann::json::parse(j.dump()))).dump(), j.dump()) << to_string(v);
    EXPECT_EQ(j["schema"], kEpisodeSchema);
  }
  Seats f;
  f.add(ScriptedRule::always_cooperate).add(std::make_unique<Failing>(false, Phase::act), "Bad");
  const auto j = to_json(run("prisoners", mech(Variant::no_mechanism), f));
  EXPECT_EQ(to_json(episode_from_json(j)).dump(), j.dump());
}

TEST(Episode, PopulationMustSplitIntoGroups) {
  Seats s;
  s.add(ScriptedRule::always_cooperate, 3);
  EXPECT_THROW(run("prisoners", mech(Variant::reputation_plus), s), ConfigError);
  EXPECT_THROW(run("prisoners", mech(Variant::no_mechanism), s), ConfigError);
}

// With four agents each of the three pairings is equally likely every round.
TEST(Episode, ReputationMatchingIsUniform) {
  std::map<std::vector<int>, int> counts;
  int rounds = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Seats s;
    s.add(ScriptedRule::always_cooperate, 4);
    const auto rec = run("prisoners", mech(Variant::reputation_minus), s, seed);
    for (const auto& p : rec.plays) {
      auto pr = p.record.participants;
      std::sort(pr.begin(), pr.end());
      ++counts[pr];
    }
    rounds += 15;
  }
  ASSERT_EQ(counts.size(), 6u);
  // every pair: Binomial(rounds, 1/3); allow 5 standard deviations
  const double mean = rounds / 3.0, sd = std::sqrt(rounds * (1.0 / 3) * (2.0 / 3));
  for (const auto& [pair, c] : counts) EXPECT_LT(std::abs(c - mean), 5 * sd);
}

TEST(Episode, ReputationOutcomesFollowSeats) {
  Seats s;
  s.add(ScriptedRule::always_defect, 2).add(ScriptedRule::always_cooperate, 2);
  const auto rec = run("trust", mech(Variant::reputation_plus), s, 3);
  ASSERT_FALSE(rec.abort);
  const Game g = build_game("trust");
  for (const auto& o : rec.outcomes) {
    ASSERT_EQ(o.seats.size(), 15u);
    for (std::size_t t = 0; t < o.seats.size(); ++t) {
      const Play& p = rec.plays[t * 2].record.seat_of(o.id) >= 0 ? rec.plays[t * 2] : rec.plays[t * 2 + 1];
      EXPECT_EQ(p.record.seat_of(o.id), o.seats[t]);
      EXPECT_EQ(p.record.payoffs[o.seats[t]], o.raw_payoffs[t]);
    }
    EXPECT_NEAR(o.weighted_payoff, weighted_oracle(o.raw_payoffs, 0.8), 1e-12);
  }
}

}  // namespace
}  // namespace coopmech
