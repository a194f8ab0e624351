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
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "coopmech/tournament.hpp"

namespace coopmech {
namespace {

std::vector<AgentKind> roster(const std::vector<std::string>& kinds) {
  std::vector<AgentKind> out;
  for (const auto& k : kinds) out.push_back(agent_kind_from_json(k));
  return out;
}

const std::vector<std::string> kSix = {"AlwaysCooperate", "AlwaysDefect", "TitForTat",
                                       "GrimTrigger",     "StandingNorm", "UniformRandom"};

TournamentConfig config(const std::string& game, Variant v, const std::vector<std::string>& kinds, int repeats = 2) {
  TournamentConfig c;
  c.game_name = game;
  c.mechanism.variant = v;
  c.roster = roster(kinds);
  c.repeats = repeats;
  c.seed = 77;
  return c;
}

std::vector<EpisodeRecord> collect(const TournamentConfig& c, const std::set<std::pair<long, int>>& done = {}) {
  std::vector<EpisodeRecord> out;
  run_tournament(c, nullptr, done, [&](const EpisodeRecord& r) { out.push_back(r); });
  return out;
}

TEST(Assignments, CountsAndOrder) {
  EXPECT_EQ(enumerate_assignments(6, 2).size(), 36u);
  EXPECT_EQ(enumerate_assignments(6, 3).size(), 216u);
  EXPECT_EQ(enumerate_assignments(1, 1).size(), 1u);
  const auto a = enumerate_assignments(3, 2);
  EXPECT_EQ(a[0], (std::vector<int>{0, 0}));
  EXPECT_EQ(a[1], (std::vector<int>{0, 1}));
  EXPECT_EQ(a[3], (std::vector<int>{1, 0}));
  EXPECT_EQ(a[8], (std::vector<int>{2, 2}));
  std::set<std::vector<int>> unique(a.begin(), a.end());
  EXPECT_EQ(unique.size(), 9u);
  MetagameTensor t({"a", "b", "c"}, 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(t.index_of(a[i]), i);
    EXPECT_EQ(t.assignment_at(i), a[i]);
  }
  EXPECT_THROW(enumerate_assignments(roster(kSix), build_game("prisoners"), Variant::reputation_plus), ConfigError);
}

TEST(Plan, EpisodeCounts) {
  const Game pd = build_game("prisoners"), pg = build_game("public_goods");
  EXPECT_EQ(plan_episodes(config("prisoners", Variant::repetition, kSix, 3), pd).size(), 108u);
  EXPECT_EQ(plan_episodes(config("public_goods", Variant::no_mechanism, kSix, 1), pg).size(), 216u);
  const auto pooled = plan_episodes(config("prisoners", Variant::reputation_minus, kSix, 3), pd);
  ASSERT_EQ(pooled.size(), 3u);
  EXPECT_EQ(pooled[0].assignment, -1);
  EXPECT_EQ(pooled[0].members.size(), 12u);
  auto c = config("public_goods", Variant::reputation_plus, kSix);
  c.mechanism.population_size = 10;
  EXPECT_THROW(plan_episodes(c, pg), ConfigError);
  c.mechanism.population_size = 9;
  EXPECT_EQ(plan_episodes(c, pg)[0].members.size(), 9u);
}

TEST(Seeds, DistinctPerEpisode) {
  std::set<std::uint64_t> seen;
  for (long a = -1; a < 216; ++a)
    for (int r = 0; r < 5; ++r) EXPECT_TRUE(seen.insert(episode_seed(20260101, a, r)).second);
  EXPECT_NE(episode_seed(1, 0, 0), episode_seed(2, 0, 0));
  EXPECT_EQ(episode_seed(1, 4, 2), episode_seed(1, 4, 2));
}

TEST(Tournament, ParallelismDoesNotChangeRecords) {
  auto c = config("prisoners", Variant::repetition, kSix);
  const auto serial = collect(c);
  c.parallelism = 5;
  const auto parallel = collect(c);
  ASSERT_EQ(serial.size(), 72u);
  ASSERT_EQ(parallel.size(), serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(to_json(serial[i]).dump(), to_json(parallel[i]).dump());
}

TEST(Tournament, SkipsDoneEpisodes) {
  auto c = config("prisoners", Variant::no_mechanism, kSix, 1);
  const auto all = collect(c);
  std::set<std::pair<long, int>> done;
  for (long a = 0; a < 10; ++a) done.insert({a, 0});
  const auto rest = collect(c, done);
  ASSERT_EQ(rest.size(), 26u);
  EXPECT_EQ(rest.front().assignment, 10);
  EXPECT_EQ(to_json(rest.front()).dump(), to_json(all[10]).dump());
}

TEST(Tensor, OneShotPrisonersEntries) {
  const std::vector<std::string> kinds = {"AlwaysCooperate", "AlwaysDefect"};
  const Game pd = build_game("prisoners");
  const auto t = build_tensor(kinds, pd, collect(config("prisoners", Variant::no_mechanism, kinds)));
  ASSERT_TRUE(t.complete());
  EXPECT_EQ(t.payoff({1, 0}, 0), 2.0);
  EXPECT_EQ(t.payoff({1, 0}, 1), -1.0);
  EXPECT_EQ(t.payoff({0, 0}, 0), 1.0);
  EXPECT_EQ(t.payoff({1, 1}, 1), 0.0);
  EXPECT_EQ(t.count(0), 2);
}

// Symmetric games with deterministic kinds: swapping seats swaps payoffs.
TEST(Tensor, SeatSymmetry) {
  const std::vector<std::string> kinds = {"AlwaysCooperate", "AlwaysDefect", "TitForTat", "GrimTrigger"};
  for (const auto& g : {"prisoners", "travelers", "stag_hunt"}) {
    const Game game = build_game(g);
    const auto t = build_tensor(kinds, game, collect(config(g, Variant::repetition, kinds, 1)));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(t.payoff({i, j}, 0), t.payoff({j, i}, 1), 1e-12) << g;
  }
}

TEST(Tensor, IncompleteAndOutOfRange) {
  const std::vector<std::string> kinds = {"AlwaysCooperate", "AlwaysDefect"};
  const Game pd = build_game("prisoners");
  auto recs = collect(config("prisoners", Variant::no_mechanism, kinds, 1));
  recs.pop_back();
  const auto t = build_tensor(kinds, pd, recs);
  EXPECT_FALSE(t.complete());
  EXPECT_THROW(t.payoff(3, 0), std::logic_error);
  recs.front().assignment = 9;
  EXPECT_THROW(build_tensor(kinds, pd, recs), ConfigError);
}

TEST(Estimates, StandardError) {
  const auto e = estimate({1.0, 2.0, 3.0, 6.0});
  EXPECT_DOUBLE_EQ(e.value, 3.0);
  // sample variance 14/3, error sqrt(14/3/4)
  EXPECT_NEAR(e.error, std::sqrt(14.0 / 12.0), 1e-12);
  EXPECT_EQ(e.count, 4);
  EXPECT_EQ(estimate({5.0}).error, 0.0);
}

TEST(Estimates, AggregateAcrossGames) {
  const std::vector<std::string> r = {"a", "b"};
  const auto out = aggregate_across_games({r, r, r}, {{{0.3, 0.1, 3}, {0.9, 0.2, 3}},
                                                     {{0.6, 0.1, 3}, {0.3, 0.2, 3}},
                                                     {{0.0, 0.1, 3}, {0.0, 0.2, 3}}});
  EXPECT_NEAR(out[0].value, 0.3, 1e-12);
  EXPECT_NEAR(out[1].value, 0.4, 1e-12);
  EXPECT_NEAR(out[0].error, 0.1 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(out[1].count, 9);
  EXPECT_THROW(aggregate_across_games({r, {"b", "a"}}, {{{}, {}}, {{}, {}}}), ConfigError);
}

TEST(Pooled, KindMeans) {
  const std::vector<std::string> kinds = {"AlwaysCooperate", "AlwaysDefect"};
  const Game pd = build_game("prisoners");
  const auto recs = collect(config("prisoners", Variant::reputation_minus, kinds, 4));
  ASSERT_EQ(recs.size(), 4u);
  const auto m = pooled_kind_means(kinds, pd, recs);
  // four members: the two cooperators and the two defectors meet in every mix
  for (const auto& r : recs) EXPECT_EQ(r.outcomes.size(), 4u);
  EXPECT_EQ(m[0].count, 4);
  EXPECT_GT(m[1].value, m[0].value);
  double oracle = 0;
  for (const auto& r : recs) {
    double s = 0;
    for (const auto& o : r.outcomes)
      if (o.label == "AlwaysDefect") s += normalized_outcome(pd, o, 0.8);
    oracle += s / 2;
  }
  EXPECT_NEAR(m[1].value, oracle / 4, 1e-12);
}

}  // namespace
}  // namespace coopmech
