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
#include <random>

#include <gtest/gtest.h>

#include "coopmech/game.hpp"
#include "coopmech/game_io.hpp"
#include "support.hpp"

namespace coopmech {
namespace {

using testing::random_game;
using testing::random_mixed;

// Independent expected-utility oracle: sums over profiles in an odometer
// without touching Game::index_of.
std::vector<double> eu_oracle(const Game& g, const StrategyProfile& s) {
  const int n = g.num_players();
  std::vector<double> out(n, 0.0);
  ActionProfile a(n, 0);
  while (true) {
    double prob = 1.0;
    for (int p = 0; p < n; ++p) prob *= s[p].weight(a[p]) / 100.0;
    for (int p = 0; p < n; ++p) out[p] += prob * g.payoff(a, p);
    int p = n - 1;
    while (p >= 0 && ++a[p] == g.num_actions(p)) a[p--] = 0;
    if (p < 0) return out;
  }
}

TEST(Games, PrisonersTable) {
  const Game g = build_game("prisoners");
  EXPECT_EQ(g.payoff({0, 0}, 0), 2);
  EXPECT_EQ(g.payoff({0, 0}, 1), 2);
  EXPECT_EQ(g.payoff({0, 1}, 0), 0);
  EXPECT_EQ(g.payoff({0, 1}, 1), 3);
  EXPECT_EQ(g.payoff({1, 1}, 0), 1);
  EXPECT_EQ(g.coop_profile(), (ActionProfile{0, 0}));
  EXPECT_EQ(g.defect_profile(), (ActionProfile{1, 1}));
}

TEST(Games, PublicGoodsAllContribute) {
  const Game g = build_game("public_goods");
  ASSERT_EQ(g.num_players(), 3);
  for (int p = 0; p < 3; ++p) {
    EXPECT_EQ(g.payoff({0, 0, 0}, p), 1.5);
    EXPECT_EQ(g.payoff({1, 1, 1}, p), 1.0);
  }
}

TEST(Games, TrustInvestKeep) {
  const Game g = build_game("trust");
  EXPECT_EQ(g.payoff({0, 1}, 0), 0);
  EXPECT_EQ(g.payoff({0, 1}, 1), 20);
  EXPECT_EQ(g.payoff({0, 0}, 0), 10);
  EXPECT_EQ(g.payoff({1, 1}, 1), 4);
}

TEST(Games, TravelersFormula) {
  const Game g = build_game("travelers");
  // X=3 (A1) vs Y=4 (A2): lower claimant gets X+2, the other X-2.
  EXPECT_EQ(g.payoff({1, 2}, 0), 5);
  EXPECT_EQ(g.payoff({1, 2}, 1), 1);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      const double X = 2 + x, Y = 2 + y;
      const double lo = std::min(X, Y);
      const double mine = X == Y ? X : (X < Y ? lo + 2 : lo - 2);
      EXPECT_EQ(g.payoff({x, y}, 0), mine);
    }
  EXPECT_EQ(g.coop_profile(), (ActionProfile{3, 3}));
  EXPECT_EQ(g.defect_profile(), (ActionProfile{0, 0}));
  EXPECT_EQ(g.action_notes().at(0), "correspond to the number 2");
}

TEST(Games, StagHuntDefaultAndOverride) {
  const Game g = build_game("stag_hunt");
  EXPECT_EQ(g.payoff({0, 0}, 0), 5);
  EXPECT_EQ(g.payoff({0, 1}, 1), 4);
  GameParams p;
  p.stag_hunt_payoffs = std::vector<std::vector<double>>{{4, 4}, {0, 3}, {3, 0}, {2, 2}};
  EXPECT_EQ(build_game("stag_hunt", p).payoff({1, 1}, 0), 2);
}

TEST(Games, RejectsBadNamesAndParams) {
  EXPECT_THROW(build_game("chicken"), std::invalid_argument);
  GameParams p;
  p.public_goods = PublicGoodsParams{3, 3.0};
  EXPECT_THROW(build_game("public_goods", p), std::invalid_argument);
  p.public_goods = PublicGoodsParams{3, 1.0};
  EXPECT_THROW(build_game("public_goods", p), std::invalid_argument);
  p.public_goods = PublicGoodsParams{3, 1.5};
  EXPECT_THROW(build_game("prisoners", p), std::invalid_argument);
}

TEST(Games, ConstructorInvariants) {
  EXPECT_THROW(Game("g", {{"A0"}, {"A0"}}, {{1, 1}, {1, 1}}, {0, 0}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(Game("g", {{"A0"}}, {{NAN}}, {0}, {0}), std::invalid_argument);
  EXPECT_THROW(Game("g", {{"A0"}}, {{1, 2}}, {0}, {0}), std::invalid_argument);
  EXPECT_THROW(Game("g", {{"A0"}}, {{1}}, {1}, {0}), std::invalid_argument);
}

TEST(MixedActions, Invariants) {
  EXPECT_NO_THROW(MixedAction({30, 70}));
  EXPECT_THROW(MixedAction({50, 49}), std::invalid_argument);
  EXPECT_THROW(MixedAction({101, -1}), std::invalid_argument);
  EXPECT_THROW(MixedAction(std::vector<int>{}), std::invalid_argument);
  EXPECT_EQ(MixedAction::uniform(3).weights(), (std::vector<int>{34, 33, 33}));
  EXPECT_EQ(MixedAction::pure(2, 1).pure_action(), 1);
}

TEST(ExpectedUtility, PrisonersExamples) {
  const Game g = build_game("prisoners");
  EXPECT_EQ(expected_utility(g, pure_strategy(g, {1, 1})), (std::vector<double>{1, 1}));
  const StrategyProfile half{MixedAction({50, 50}), MixedAction({50, 50})};
  EXPECT_DOUBLE_EQ(expected_utility(g, half)[0], 1.5);
  EXPECT_DOUBLE_EQ(expected_utility(g, half)[1], 1.5);
  const Game pg = build_game("public_goods");
  EXPECT_EQ(expected_utility(pg, pure_strategy(pg, {1, 1, 1})), (std::vector<double>{1, 1, 1}));
  EXPECT_THROW(expected_utility(g, StrategyProfile{MixedAction({50, 50})}), std::invalid_argument);
}

TEST(ExpectedUtility, PureProfilesRoundTripExactly) {
  for (const auto& name : builtin_game_names()) {
    const Game g = build_game(name);
    for (std::size_t i = 0; i < g.num_profiles(); ++i) {
      const ActionProfile a = g.profile_at(i);
      const auto u = expected_utility(g, pure_strategy(g, a));
      for (int p = 0; p < g.num_players(); ++p) EXPECT_EQ(u[p], g.payoff(a, p)) << name;
    }
  }
}

TEST(ExpectedUtility, MatchesOracleOnRandomGames) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<int> shape = trial % 2 ? std::vector<int>{3, 2, 2} : std::vector<int>{4, 3};
    const Game g = random_game(gen, shape);
    StrategyProfile s;
    for (int m : shape) s.push_back(random_mixed(gen, m));
    const auto u = expected_utility(g, s);
    const auto o = eu_oracle(g, s);
    for (std::size_t p = 0; p < u.size(); ++p) EXPECT_NEAR(u[p], o[p], 1e-9);
  }
}

TEST(ExpectedUtility, MultilinearInEachPlayer) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> shape{3, 3, 2};
    const Game g = random_game(gen, shape);
    StrategyProfile s;
    for (int m : shape) s.push_back(random_mixed(gen, m));
    const int player = trial % 3;
    // Interpolating between two integer strategies at t = k/100 keeps the
    // weights integral when both endpoints are pure.
    const MixedAction x = MixedAction::pure(shape[player], 0);
    const MixedAction y = MixedAction::pure(shape[player], shape[player] - 1);
    auto at = [&](int k) {
      std::vector<int> w(shape[player], 0);
      w[0] += 100 - k;
      w[shape[player] - 1] += k;
      StrategyProfile t = s;
      t[player] = MixedAction(w);
      return expected_utility(g, t);
    };
    StrategyProfile sx = s, sy = s;
    sx[player] = x;
    sy[player] = y;
    const auto ux = expected_utility(g, sx), uy = expected_utility(g, sy);
    for (int k : {0, 17, 50, 83, 100}) {
      const auto u = at(k);
      for (int p = 0; p < 3; ++p) EXPECT_NEAR(u[p], (1 - k / 100.0) * ux[p] + k / 100.0 * uy[p], 1e-9);
    }
  }
}

TEST(Sampling, PointMassAndDeterminism) {
  const Game g = build_game("prisoners");
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    Rng rng(seed);
    EXPECT_EQ(sample_profile(pure_strategy(g, {1, 0}), rng), (ActionProfile{1, 0}));
  }
  const StrategyProfile half{MixedAction({50, 50}), MixedAction({50, 50})};
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_profile(half, a), sample_profile(half, b));
}

TEST(Sampling, FrequencyWithinThreeSigma) {
  const MixedAction half({50, 50});
  Rng rng(2024);
  const int draws = 10000;
  int ones = 0;
  for (int i = 0; i < draws; ++i) ones += half.sample(rng);
  const double sigma = std::sqrt(draws * 0.25);
  EXPECT_LT(std::fabs(ones - draws * 0.5), 3 * sigma);
}

TEST(Normalization, ReferencePoints) {
  const Game g = build_game("prisoners");
  EXPECT_EQ(normalize_payoff(g, 0, 1.0), 0.0);
  EXPECT_EQ(normalize_payoff(g, 0, 2.0), 1.0);
  EXPECT_EQ(normalize_payoff(g, 0, 3.0), 2.0);
  for (const auto& name : builtin_game_names()) {
    const Game b = build_game(name);
    for (int p = 0; p < b.num_players(); ++p) {
      EXPECT_EQ(normalize_payoff(b, p, b.payoff(b.coop_profile(), p)), 1.0) << name;
      EXPECT_EQ(normalize_payoff(b, p, b.payoff(b.defect_profile(), p)), 0.0) << name;
    }
  }
  const Game flat("flat", {{"A0", "A1"}}, {{1}, {1}}, {0}, {1});
  EXPECT_THROW(normalize_payoff(flat, 0, 1.0), std::invalid_argument);
}

TEST(PublicGoods, FreeRiderPremiumAtEveryCount) {
  for (double alpha : {1.5, 2.0, 2.5}) {
    GameParams params;
    params.public_goods = PublicGoodsParams{3, alpha};
    const Game g = build_game("public_goods", params);
    // k other contributors; player 0 contributes (A0) or not (A1).
    for (int k = 0; k <= 2; ++k) {
      ActionProfile contrib{0, 1, 1}, defect{1, 1, 1};
      for (int j = 0; j < k; ++j) contrib[1 + j] = defect[1 + j] = 0;
      const double premium = g.payoff(defect, 0) - g.payoff(contrib, 0);
      if (alpha == 1.5) {
        EXPECT_EQ(premium, 0.5);
      } else {
        EXPECT_NEAR(premium, 1.0 - alpha / 3.0, 1e-12);
      }
    }
  }
}

TEST(GameDocument, RoundTrip) {
  for (const auto& name : builtin_game_names()) {
    const Game g = build_game(name);
    const Game back = game_from_json(nlohmann::json::parse(game_to_json(g).dump()));
    EXPECT_EQ(back.payoff_rows(), g.payoff_rows());
    EXPECT_EQ(back.coop_profile(), g.coop_profile());
    EXPECT_EQ(back.defect_profile(), g.defect_profile());
    EXPECT_EQ(back.action_notes(), g.action_notes());
    EXPECT_EQ(back.family(), g.family());
  }
  auto doc = game_to_json(build_game("prisoners"));
  doc["schema"] = "other/1";
  EXPECT_THROW(game_from_json(doc), ConfigError);
}

}  // namespace
}  // namespace coopmech
