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

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "coopmech/wire.hpp"

namespace coopmech {
namespace {

WireContext act_ctx(int m) {
  WireContext c;
  c.phase = Phase::act;
  c.num_actions = m;
  c.num_base_actions = m;
  c.num_players = 2;
  return c;
}

std::string rule_of(const WireContext& ctx, const std::string& raw) {
  try {
    parse_response(ctx, raw);
  } catch (const WireError& e) {
    return e.rule();
  }
  return "";
}

TEST(Parse, PlainObject) {
  const auto r = parse_response(act_ctx(2), R"({"A0": 0, "A1": 100})");
  EXPECT_EQ(std::get<MixedAction>(r.payload), MixedAction({0, 100}));
  EXPECT_EQ(r.raw, R"({"A0": 0, "A1": 100})");
}

TEST(Parse, ReasoningThenFencedObject) {
  const std::string raw =
      "The other player has an incentive to defect, so {\"A0\": 50} would be naive.\n"
      "```json\n{\"A0\": 30, \"A1\": 70}\n```\n";
  EXPECT_EQ(std::get<MixedAction>(parse_response(act_ctx(2), raw).payload), MixedAction({30, 70}));
}

TEST(Parse, LastObjectWins) {
  const std::string raw = R"({"A0": 100, "A1": 0} then I changed my mind {"A0": 0, "A1": 100})";
  EXPECT_EQ(std::get<MixedAction>(parse_response(act_ctx(2), raw).payload), MixedAction({0, 100}));
}

TEST(Parse, BracesInsideStrings) {
  auto obj = extract_last_json_object(R"(x {"note": "a } b", "k": {"n": 1}} y)");
  ASSERT_TRUE(obj);
  EXPECT_EQ((*obj)["k"]["n"], 1);
}

TEST(Parse, ErrorRules) {
  EXPECT_EQ(rule_of(act_ctx(2), R"({"A0": 30, "A1": 60})"), "sum_not_100");
  EXPECT_EQ(rule_of(act_ctx(2), R"({"A0": 30.5, "A1": 69.5})"), "non_integer_weight");
  EXPECT_EQ(rule_of(act_ctx(3), R"({"A0": 30, "A1": 70})"), "missing_action");
  EXPECT_EQ(rule_of(act_ctx(2), R"({"A0": 30, "A2": 70})"), "unknown_action");
  EXPECT_EQ(rule_of(act_ctx(2), R"({"A0": -10, "A1": 110})"), "weight_range");
  EXPECT_EQ(rule_of(act_ctx(2), "I cooperate."), "no_json_object");
  EXPECT_EQ(rule_of(act_ctx(2), R"({"A0": 30, "A1": 60)"), "no_json_object");
}

TEST(Parse, SumErrorMessageNamesTheSum) {
  try {
    parse_response(act_ctx(2), R"({"A0": 30, "A1": 60})");
    FAIL();
  } catch (const WireError& e) {
    EXPECT_NE(std::string(e.what()).find("90"), std::string::npos);
  }
}

TEST(Parse, NeverRenormalizes) {
  for (const char* raw : {R"({"A0": 0.3, "A1": 0.7})", R"({"A0": 3, "A1": 7})", R"({"A0": 99, "A1": 0})"})
    EXPECT_THROW(parse_response(act_ctx(2), raw), WireError) << raw;
}

TEST(Parse, MediatorProposal) {
  WireContext c = act_ctx(2);
  c.phase = Phase::propose_mediator;
  c.num_players = 3;
  const auto r = parse_response(c, R"({"1": "A1", "2": "A1", "3": "A0"})");
  EXPECT_EQ(std::get<MediatorSpec>(r.payload).plan, (std::vector<int>{1, 1, 0}));
  EXPECT_EQ(rule_of(c, R"({"1": "A1", "2": "A1"})"), "missing_key");
  EXPECT_EQ(rule_of(c, R"({"0": "A1", "1": "A1", "2": "A1", "3": "A0"})"), "unknown_key");
  EXPECT_EQ(rule_of(c, R"({"1": "A1", "2": "A2", "3": "A0"})"), "unknown_action");
}

TEST(Parse, ContractProposal) {
  WireContext c = act_ctx(2);
  c.phase = Phase::propose_contract;
  EXPECT_EQ(std::get<ContractSpec>(parse_response(c, R"({"A0": 4, "A1": -3})").payload).transfers,
            (std::vector<int>{4, -3}));
  EXPECT_EQ(rule_of(c, R"({"A0": 4.5, "A1": 0})"), "non_integer_transfer");
  EXPECT_EQ(rule_of(c, R"({"A0": 4})"), "missing_action");
}

TEST(Parse, Ballots) {
  WireContext c = act_ctx(2);
  c.phase = Phase::vote;
  c.num_proposals = 2;
  c.ballot_prefix = 'C';
  EXPECT_EQ(std::get<Ballot>(parse_response(c, R"({"C1": true, "C2": false})").payload), (Ballot{true, false}));
  EXPECT_EQ(rule_of(c, R"({"M1": true, "M2": false})"), "unknown_key");
  EXPECT_EQ(rule_of(c, R"({"C1": true})"), "missing_key");
  EXPECT_EQ(rule_of(c, R"({"C1": 1, "C2": 0})"), "schema");
}

TEST(Parse, SignDecision) {
  WireContext c = act_ctx(2);
  c.phase = Phase::sign;
  EXPECT_TRUE(std::get<SignDecision>(parse_response(c, R"({"sign": true})").payload).sign);
  EXPECT_FALSE(std::get<SignDecision>(parse_response(c, R"({"sign": false})").payload).sign);
  EXPECT_EQ(rule_of(c, R"({"sign": "yes"})"), "schema");
  EXPECT_EQ(rule_of(c, R"({"sign": true, "extra": 1})"), "schema");
}

TEST(Parse, WireRoundTripProperty) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 4);
    std::vector<int> w(m, 0);
    for (int k = 0; k < 100; ++k) ++w[gen() % m];
    const WireContext ctx = act_ctx(m);
    const DecisionPayload p = MixedAction(w);
    const std::string text = to_wire(ctx, p);
    EXPECT_EQ(std::get<MixedAction>(parse_response(ctx, text).payload), MixedAction(w)) << text;
  }
  WireContext v = act_ctx(2);
  v.phase = Phase::vote;
  v.num_proposals = 3;
  EXPECT_EQ(to_wire(v, Ballot{true, false, true}), R"({"M1": true, "M2": false, "M3": true})");
  EXPECT_EQ(std::get<Ballot>(parse_response(v, to_wire(v, Ballot{true, false, true})).payload),
            (Ballot{true, false, true}));
  WireContext med = act_ctx(2);
  med.phase = Phase::propose_mediator;
  EXPECT_EQ(to_wire(med, MediatorSpec{{1, 0}}), R"({"1": "A1", "2": "A0"})");
}

}  // namespace
}  // namespace coopmech
