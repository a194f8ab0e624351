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

// Reference prompt listings, verbatim.

#pragma once

namespace coopmech::testing {

inline constexpr const char* kRefActionSchema = R"ref(Instruction:
- Choose a probability distribution over the provided actions each round.
- Output must contain a valid JSON object at the end.
- Keys must be the action names exactly as given.
- Values must be percentage points given in integers.
- The values must sum to exactly 100.

Format requirement:
Return exactly one JSON object, for example:
{"A0": <INT>, "A1": <INT>, ...})ref";

inline constexpr const char* kRefChainOfThought = R"ref(Think about the question step by step.
Break it down into small steps.
Explain your reasoning, and then provide the final answer.)ref";

inline constexpr const char* kRefDirectOutput = R"ref(Please ONLY provide the output to the above question.
DO NOT provide any additional text or explanation.)ref";

inline constexpr const char* kRefPrisonersGame = R"ref(Setup:
You are playing a decision-making game with another player.
Your objective is to maximize your total points received in the game described in length below.

Actions available to each player:
- A0
- A1

Basic game rules:
1. You and the other player each choose a probability for each action, simultaneously.
2. After both decisions are locked in, the final action will be drawn from the probability distributions.
3. Both players receive the points specified in the payoff description below.

Payoff description:
	- If you choose A0 and the other player chooses A0: you get 2 points, the other player gets 2 points.
	- If you choose A0 and the other player chooses A1: you get 0 points, the other player gets 3 points.
	- If you choose A1 and the other player chooses A0: you get 3 points, the other player gets 0 points.
	- If you choose A1 and the other player chooses A1: you get 1 points, the other player gets 1 points.

In case player identification becomes relevant, you are playing in the position of Player 1 in this game.)ref";

inline constexpr const char* kRefPublicGoodsGame = R"ref(Setup:
You are playing a decision-making game with 2 other players.
Your objective is to maximize your total points received in the game described in length below.

Actions available to each player:
- A0
- A1

Basic game rules:
1. You and the other players each choose a probability for each action, simultaneously.
2. After all decisions are locked in, the final action will be drawn from the probability distributions.
3. All players receive the points specified in the payoff description below.

Payoff description:
Suppose k out of 3 players play A0.
    If a player plays A0, their payoff is: 1.5 * k / 3.
    If a player plays A1, their payoff is: 1 + (1.5 * k / 3).

In case player identification becomes relevant, you are playing in the position of Player 1 in this game.)ref";

inline constexpr const char* kRefTravelersGame = R"ref(Setup:
You are playing a decision-making game with another player.
Your objective is to maximize your total points received in the game described in length below.

Actions available to each player:
- A0: correspond to the number 2
- A1: correspond to the number 3
- A2: correspond to the number 4
- A3: correspond to the number 5

Basic game rules:
1. You and the other player each choose a probability for each action, simultaneously.
2. After both decisions are locked in, the final action will be drawn from the probability distributions.
3. Both players receive the points specified in the payoff description below.

Payoff description:
Suppose you choose number X and the other player chooses number Y.
    - If X = Y: you get X points, the other player gets Y (=X) points.
    - If X < Y: you get X + 2.0, the other player gets X - 2.0.
    - If X > Y: you get Y - 2.0, the other player gets Y + 2.0.

In case player identification becomes relevant, you are playing in the position of Player 2 in this game.)ref";

inline constexpr const char* kRefTrustGame = R"ref(Setup:
You are playing a decision-making game with another player.
Your objective is to maximize your total points received in the game described in length below.

Actions available to each player:
- A0
- A1

Basic game rules:
1. You and the other player each choose a probability for each action, simultaneously.
2. After both decisions are locked in, the final action will be drawn from the probability distributions.
3. Both players receive the points specified in the payoff description below.

Payoff description:
    - If you choose A0 and the other player chooses A0: You get 10 points, the other player gets 10 points.
    - If you choose A1 and the other player chooses A0: You get 20 points, the other player gets 0 points.
    - If you choose A0 and the other player chooses A1: You get 2 points, the other player gets 6 points.
    - If you choose A1 and the other player chooses A1: You get 4 points, the other player gets 4 points.

In case player identification becomes relevant, you are playing in the position of Player 2 in this game.)ref";

inline constexpr const char* kRefRepetitionTwist = R"ref(Here is the twist:
You are playing this game *repeatedly* with the same player(s). The action sampled from your action probability distribution will be visible to those player(s) in future rounds and may influence their decisions.
After each round, there is a 80% chance probability that an additional round will take place. You have already played this game for 4 round(s) in the past.

Next, you find the info available to you about the history of play that is related to you and the other player(s) you are playing with in this upcoming round.

[Round 4] 
	You: A0
	Player 2: A1
	Player 3: A0
[Round 3] 
	You: A0
	Player 2: A1
	Player 3: A0
[Round 2] 
	You: A1
	Player 2: A0
	Player 3: A0)ref";

inline constexpr const char* kRefReputationTwist = R"ref(Here is the twist:
You are playing this game *repeatedly* but with varying players who you encounter at random.
The action sampled from your action probability distribution in the current round will be visible to the players you encounter in future rounds and may influence their decisions.
After each round, there is a 80% chance probability that an additional round will take place. You have already played this game for 10 round(s) in the past.

Next, you find the info available to you about the history of play that is related to you and the other player(s) you are playing with in this upcoming round.

You are playing with 1 other agent(s): Agent #10.

Your history of play:
├─ [Round 10] You (played A0, received 2pts) vs Agent #10 (played A0, received 2pts)
│  └─ History of Agent #10 before this match:
│     ├─ [Round 9] Agent #10 (played A0, received 2pts) vs Agent #9 (played A0, received 2pts)
│     │  └─ History of Agent #9 before this match:
│     │     └─ [Round 8] Agent #9 (played A0, received 0pts) vs Agent #10 (played A1, received 3pts)
│     └─ [Round 8] Agent #10 (played A1, received 3pts) vs Agent #9 (played A0, received 0pts)
├─ [Round 9] You (played A1, received 1pts) vs Agent #6 (played A1, received 1pts)
│  └─ History of Agent #6 before this match:
│     └─ [Round 8] Agent #6 (played A1, received 1pts) vs Agent #7 (played A1, received 1pts)
└─ [Round 8] You (played A0, received 0pts) vs Agent #8 (played A1, received 3pts)

History of play of Agent #10:
├─ [Round 10] Agent #10 (played A0, received 2pts) vs You (played A0, received 2pts)
│  └─ History of You before this match:
│     ├─ [Round 9] You (played A1, received 1pts) vs Agent #6 (played A1, received 1pts)
│     │  └─ History of Agent #6 before this match:
│     │     └─ [Round 8] Agent #6 (played A1, received 1pts) vs Agent #7 (played A1, received 1pts)
│     └─ [Round 8] You (played A0, received 0pts) vs Agent #8 (played A1, received 3pts)
├─ [Round 9] Agent #10 (played A0, received 2pts) vs Agent #9 (played A0, received 2pts)
│  └─ History of Agent #9 before this match:
│     └─ [Round 8] Agent #9 (played A0, received 0pts) vs Agent #10 (played A1, received 3pts)
└─ [Round 8] Agent #10 (played A1, received 3pts) vs Agent #9 (played A0, received 0pts))ref";

inline constexpr const char* kRefMediatorProposalTwist = R"ref(Here is the twist:
There will be a mediator for this game, and your task now is to design and propose one.

- A mediator is an entity that plays actions on behalf of delegating players.
- Each player may choose to delegate their move to the mediator or act independently.
- The mediator observes the number of players delegating to the mediator and then plays the same action for all delegating players.

The other player(s) will also design and propose a mediator. Only one will be present in the game though. Which one will be decided in a separate step later via an approval voting process by you and the other player(s). The winning mediator will be selected uniform at random from those with the maximum number of approvals.

Output Format:
Return a valid JSON object in a single line:
{"1": <Action>, ..., "2": <Action>} where <Action> is a string like "A0", "A1" ...

- Keys: the number of players delegating (from 1 to 2).
- Values: the action the mediator will play on behalf of delegating players (e.g., "A0" or "A1" etc.).)ref";

inline constexpr const char* kRefMediatorVoteTwist = R"ref(Here is the twist:
On top of the original game rules, you will have the option to delegate your move to a mediator.
If you choose to delegate, the mediator will play an action for you based on how many players have delegated to it.
You can also choose to act independently.

But first, you and the other player have to decide via an approval voting process which mediator will be present in the game. Your task now is to review each mediator and decide which ones you approve of. The winning mediator will be selected uniform at random from those with the maximum number of approvals.

Here are the mediator designs that have been proposed:
Mediator proposed by Player 1:
	• If 1 player(s) delegate to the mediator, it will play action A1.
	• If 2 player(s) delegate to the mediator, it will play action A0.

Mediator proposed by Player 2:
	• If 1 player(s) delegate to the mediator, it will play action A1.
	• If 2 player(s) delegate to the mediator, it will play action A0.

Output Format:
Return a valid JSON object with your approvals:
{"M1": <true/false>, "M2": <true/false>, ...}

- Keys: mediator identifiers (e.g., "M1", "M2", ...)
- Values: `true` if you approve, `false` if you don't
- Ensure all mediators have an entry)ref";

inline constexpr const char* kRefMediationActTwist = R"ref(Here is the twist:
On top of the original game rules, you have the option to delegate your move to a mediator.
If you choose to delegate, the mediator will play an action for you based on how many players have delegated to it.
You can also choose to act independently.

The available mediator was proposed by Player 1 and selected via approval voting among the players. Here is what the mediator would do for the players that delegate to it:
	• If 1 player(s) delegate to the mediator, it will play action A0.
	• If 2 player(s) delegate to the mediator, it will play action A0.

Consider A2 as an additional action "Delegate to Mediator". Your final mixed strategy should include probability for all actions A0, A1, ..., A2.)ref";

inline constexpr const char* kRefContractProposalTwist = R"ref(Here is the twist:
There will be the option for a payment contract in this game, and your task now is to design and propose one.

- A contract is an additional payoff agreement on top of the original game payoffs. It specifies a number for each action that a player can play, indicating one of three cases:
    * Positive number (+): the player receives an additional payment of X points in total, drawn equally from the other player(s).
    * Negative number (-): the player pays an additional payment of X points in total, distributed equally among the other player(s).
    * Zero (0): no additional payments in either direction.
- Each player may choose to accept the contract as a whole or not.
- The contract becomes active only if all players accept.

The other player(s) will also design and propose a contract. Only one will be present in the game though. Which one will be decided in a separate step later via an approval voting process by you and the other player(s). The winning contract will be selected uniform at random from those with the maximum number of approvals.

Output Format:
Return a valid JSON object in a single line:
{"A0": <INT>, "A1": <INT>, ...}

- Keys: all available game actions.
- Values: integers representing the extra payoff for that action.)ref";

inline constexpr const char* kRefContractVoteTwist = R"ref(Here is the twist:
On top of the original game rules, a payment contract can be put in place if the players agree to it via an approval voting process. A contract specifies a payment value for each action that a player can play.

Your task now is to review each proposed contract and decide which ones you approve of. The winning contract will be selected uniform at random from those with the maximum number of approvals.

Here are the contract designs that have been proposed:
Contract proposed by Player 1:
- If a player chooses A0, they pay an additional payment of 6 point(s), distributed equally among the other players.
- If a player chooses A1, they receive an additional payment of 11 point(s), drawn equally from the other players.

Contract proposed by Player 2:
- If a player chooses A0, they receive an additional payment of 5 point(s), drawn equally from the other players.
- If a player chooses A1, they pay an additional payment of 8 point(s), distributed equally among the other players.


Output Format:
Return a valid JSON object with your approvals:
{"C1": <true/false>, "C2": <true/false>, ...}

- Keys: contract identifiers (e.g., "C1", "C2", ...)
- Values: `true` if you approve, `false` if you don't
- Ensure all contracts have an entry)ref";

inline constexpr const char* kRefContractSignTwist = R"ref(Here is the twist:
On top of the original game rules, you have the option to sign a payment contract. A contract specifies a payment value for each action that a player can play. Here is the contract that was selected via approval voting (proposed by Player 1):
- If a player chooses A0, they pay an additional payment of 2 point(s), distributed equally among the other players.
- If a player chooses A1, they receive an additional payment of 5 point(s), drawn equally from the other players.

At this stage, you are asked to decide whether to sign the contract. The contract becomes active only if all players sign it.

Output Requirement:
- Respond with a valid JSON object.
- Format: {"sign": <BOOL>} where <BOOL> is true or false.)ref";

inline constexpr const char* kRefContractActTwist = R"ref(Here is the twist:
On top of the original game rules, there is a payment contract in place because every player signed it in beforehand. Here is the contract that was selected via approval voting (proposed by Player 2):
- If a player chooses A0, they receive an additional payment of 18 point(s), drawn equally from the other players.
- If a player chooses A1, they pay an additional payment of 3 point(s), distributed equally among the other players.

Since this contract directly affects your final payoff, consider the contract when making your strategy decisions!)ref";

inline constexpr const char* kRefJudgeHead = R"ref(Analyze the following text and categorize the decision-making strategy used.
You may choose one, multiple or none of the classes. If none apply, classify as other.

Taxonomy:
1. Individual utility maximization: Response includes considerations of pursuing the highest possible personal payoff, optimizing for self-interest with few regard for the payoffs of other players.
2. Strategic equilibrium focus: Response includes considerations of appealing to game-theoretic stability, such as attempting to play a Nash equilibrium strategy. The agent bases its choice on formulating an optimal response to the anticipated, mathematically rational behavior of others.
3. Social welfare maximization: Response includes considerations of a utilitarian desire to maximize the combined total payoff or collective utility of all players in the game, even if it requires sacrificing some of the agent's own individual payoff.
4. Inequity aversion: Response includes considerations of a desire to minimize the difference in payoffs between players. The agent prioritizes symmetric outcomes, aiming to ensure no player gets significantly more or less than others.
5. Reciprocity: Response includes considerations of an intention to respond to the other player's actions in kind, such as rewarding perceived cooperative behavior or punishing uncooperative behavior.
6. Strategic influence: Response includes considerations of an attempt to shape the downstream behavior of other players or to maintain better control over the future dynamics of the game.
7. Trust evaluation: Response includes considerations of an assessment of whether the other player can be trusted to cooperate or act in a mutually beneficial manner.
8. Competitiveness: Response includes considerations of a desire to achieve a higher payoff than the other player, for example, by prioritizing relative performance and beating the other player.
9. Uncertainty evaluation: Response includes considerations of the need to navigate, measure, or mitigate uncertainty regarding the other player's underlying intentions or strategy.
10. Social norm conformity: Response includes considerations of evaluating other players' expectations or attempting to conform to a perceived norm, collective practice, or cultural appropriateness.
11. Rule misunderstanding: Response includes considerations of an expressed misunderstanding, uncertainty, or confusion regarding the underlying rules and mechanics of the game.
12. Exploration-exploitation trade-off: Response includes considerations of the need to balance exploiting known, high-performing strategies against experimenting with less-explored ones.
13. Risk aversion: Response includes considerations of a desire to minimize exposure to risk and unpredictable outcomes.
14. Strategy legibility: Response includes considerations of the intent to adopt a simple, clear strategy that is easily understood or anticipated by the other player.
15. Multidimensional reasoning: The agent exhibits complex reasoning that integrates various facets of the decision-making problem. The analysis goes beyond a one-dimensional approach / mathematical treatment.
)ref";

inline constexpr const char* kRefJudgeTail = R"ref(IMPORTANT: Your response MUST be in valid JSON format EXACTLY as shown below. Do not include any explanatory text outside of the JSON structure.

Example of the required JSON format:
{
  "Reasoning_behind_classification": "Explanation of your classification reasoning",
  "Confidence": 0.85,
  "justification_type": "Category1, Category2"
}

Ensure that:
1. Your JSON is properly formatted with no trailing commas
2. "Confidence" is a decimal number between 0 and 1, not a string
3. For multiple justification types, list them as a comma-separated string
4. Don't include any text outside the JSON object)ref";

}  // namespace coopmech::testing
