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
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "coopmech/decision.hpp"
#include "coopmech/game.hpp"
#include "coopmech/history.hpp"
#include "coopmech/mechanism.hpp"

namespace coopmech {

inline constexpr const char* kActionSchemaInstruction =
    "Instruction:\n"
    "- Choose a probability distribution over the provided actions each round.\n"
    "- Output must contain a valid JSON object at the end.\n"
    "- Keys must be the action names exactly as given.\n"
    "- Values must be percentage points given in integers.\n"
    "- The values must sum to exactly 100.\n"
    "\n"
    "Format requirement:\n"
    "Return exactly one JSON object, for example:\n"
    "{\"A0\": <INT>, \"A1\": <INT>, ...}";

inline constexpr const char* kChainOfThoughtInstruction =
    "Think about the question step by step.\n"
    "Break it down into small steps.\n"
    "Explain your reasoning, and then provide the final answer.";

inline constexpr const char* kDirectOutputInstruction =
    "Please ONLY provide the output to the above question.\n"
    "DO NOT provide any additional text or explanation.";

// Shortest decimal form: integers without a fractional part.
inline std::string format_number(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return std::to_string(v);
}

namespace detail {

inline std::string player_name(int seat) { return "Player " + std::to_string(seat + 1); }
inline std::string agent_name(int id) { return "Agent #" + std::to_string(id + 1); }

inline std::string payoff_description(const Game& g, int seat) {
  std::ostringstream os;
  const int n = g.num_players();
  switch (g.family()) {
    case GameFamily::public_goods:
      os << "Suppose k out of " << n << " players play A0.\n"
         << "    If a player plays A0, their payoff is: " << format_number(g.multiplier()) << " * k / " << n << ".\n"
         << "    If a player plays A1, their payoff is: 1 + (" << format_number(g.multiplier()) << " * k / " << n
         << ").";
      return os.str();
    case GameFamily::travelers:
      os << "Suppose you choose number X and the other player chooses number Y.\n"
         << "    - If X = Y: you get X points, the other player gets Y (=X) points.\n"
         << "    - If X < Y: you get X + 2.0, the other player gets X - 2.0.\n"
         << "    - If X > Y: you get Y - 2.0, the other player gets Y + 2.0.";
      return os.str();
    default:
      break;
  }
  if (n == 2) {
    const int other = 1 - seat;
    const bool trust = g.family() == GameFamily::trust;
    std::vector<std::string> lines;
    auto line = [&](int mine, int theirs) {
      ActionProfile a(2);
      a[seat] = mine;
      a[other] = theirs;
      std::ostringstream l;
      l << (trust ? "    " : "\t") << "- If you choose " << g.actions(seat)[mine] << " and the other player chooses "
        << g.actions(other)[theirs] << ": " << (trust ? "You" : "you") << " get "
        << format_number(g.payoff(a, seat)) << " points, the other player gets " << format_number(g.payoff(a, other))
        << " points.";
      lines.push_back(l.str());
    };
    if (trust) {
      for (int y = 0; y < g.num_actions(other); ++y)
        for (int x = 0; x < g.num_actions(seat); ++x) line(x, y);
    } else {
      for (int x = 0; x < g.num_actions(seat); ++x)
        for (int y = 0; y < g.num_actions(other); ++y) line(x, y);
    }
    for (std::size_t i = 0; i < lines.size(); ++i) os << (i ? "\n" : "") << lines[i];
    return os.str();
  }
  // Generic n-player listing, one line per profile.
  for (std::size_t i = 0; i < g.num_profiles(); ++i) {
    const ActionProfile a = g.profile_at(i);
    os << (i ? "\n" : "") << "\t- If you choose " << g.actions(seat)[a[seat]];
    for (int p = 0; p < n; ++p)
      if (p != seat) os << ", " << player_name(p) << " chooses " << g.actions(p)[a[p]];
    os << ": you get " << format_number(g.payoff(a, seat)) << " points";
    for (int p = 0; p < n; ++p)
      if (p != seat) os << ", " << player_name(p) << " gets " << format_number(g.payoff(a, p)) << " points";
    os << ".";
  }
  return os.str();
}

inline std::string percent(double delta) { return format_number(delta * 100.0) + "%"; }

inline std::string others(int n) { return n == 2 ? "the other player" : "the other players"; }

inline std::string mediator_lines(const MediatorSpec& m) {
  std::ostringstream os;
  for (std::size_t d = 0; d < m.plan.size(); ++d)
    os << (d ? "\n" : "") << "\t• If " << d + 1 << " player(s) delegate to the mediator, it will play action "
       << action_label(m.plan[d]) << ".";
  return os.str();
}

inline std::string contract_lines(const ContractSpec& c) {
  std::ostringstream os;
  for (std::size_t a = 0; a < c.transfers.size(); ++a) {
    const int t = c.transfers[a];
    os << (a ? "\n" : "") << "- If a player chooses " << action_label(static_cast<int>(a)) << ", ";
    if (t > 0)
      os << "they receive an additional payment of " << t << " point(s), drawn equally from the other players.";
    else if (t < 0)
      os << "they pay an additional payment of " << -t << " point(s), distributed equally among the other players.";
    else
      os << "there is no additional payment in either direction.";
  }
  return os.str();
}

inline std::string record_party(const HistoryRecord& r, int agent, int viewer) {
  const int s = r.seat_of(agent);
  return (agent == viewer ? std::string("You") : agent_name(agent)) + " (played " + action_label(r.actions[s]) +
         ", received " + format_number(r.payoffs[s]) + "pts)";
}

inline std::string record_line(const HistoryRecord& r, int subject, int viewer) {
  std::string out = "[Round " + std::to_string(r.round) + "] " + record_party(r, subject, viewer);
  for (int a : r.participants)
    if (a != subject) out += " vs " + record_party(r, a, viewer);
  return out;
}

inline void render_entries(std::ostringstream& os, const std::vector<HistoryNode>& entries, const std::string& prefix,
                           int viewer) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const bool last = i + 1 == entries.size();
    const HistoryNode& e = entries[i];
    os << "\n" << prefix << (last ? "└─ " : "├─ ") << record_line(e.record, e.subject, viewer);
    const std::string child = prefix + (last ? "   " : "│  ");
    for (std::size_t b = 0; b < e.branches.size(); ++b) {
      const bool blast = b + 1 == e.branches.size();
      const int who = e.branches[b].agent;
      os << "\n" << child << (blast ? "└─ " : "├─ ") << "History of "
         << (who == viewer ? std::string("You") : agent_name(who)) << " before this match:";
      render_entries(os, e.branches[b].entries, child + (blast ? "   " : "│  "), viewer);
    }
  }
}

inline std::string repetition_twist(const DecisionRequest& r) {
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "You are playing this game *repeatedly* with the same player(s). The action sampled from your action "
        "probability distribution will be visible to those player(s) in future rounds and may influence their "
        "decisions.\n"
     << "After each round, there is a " << percent(r.mechanism.delta)
     << " chance probability that an additional round will take place. You have already played this game for "
     << r.history.rounds_played << " round(s) in the past.";
  if (!r.history.recent.empty()) {
    os << "\n\nNext, you find the info available to you about the history of play that is related to you and the "
          "other player(s) you are playing with in this upcoming round.\n";
    for (const auto& rec : r.history.recent) {
      os << "\n[Round " << rec.round << "] ";
      os << "\n\tYou: " << action_label(rec.actions[r.seat]);
      for (std::size_t p = 0; p < rec.actions.size(); ++p)
        if (static_cast<int>(p) != r.seat) os << "\n\t" << player_name(static_cast<int>(p)) << ": " << action_label(rec.actions[p]);
    }
  }
  return os.str();
}

inline std::string reputation_twist(const DecisionRequest& r) {
  const HistoryView& h = r.history;
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "You are playing this game *repeatedly* but with varying players who you encounter at random.\n"
     << "The action sampled from your action probability distribution in the current round will be visible to the "
        "players you encounter in future rounds and may influence their decisions.\n"
     << "After each round, there is a " << percent(r.mechanism.delta)
     << " chance probability that an additional round will take place. You have already played this game for "
     << h.rounds_played << " round(s) in the past.\n\n"
     << "Next, you find the info available to you about the history of play that is related to you and the other "
        "player(s) you are playing with in this upcoming round.\n\n"
     << "You are playing with " << h.co_players.size() << " other agent(s): ";
  for (std::size_t i = 0; i < h.co_players.size(); ++i) os << (i ? ", " : "") << agent_name(h.co_players[i]);
  os << ".";
  for (const auto& section : h.sections) {
    os << "\n\n"
       << (section.agent == h.viewer ? std::string("Your history of play:")
                                     : "History of play of " + agent_name(section.agent) + ":");
    if (section.entries.empty()) os << "\n(no rounds played yet)";
    render_entries(os, section.entries, "", h.viewer);
  }
  return os.str();
}

inline std::string mediator_proposal_twist(const DecisionRequest& r) {
  const int n = r.game->num_players();
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "There will be a mediator for this game, and your task now is to design and propose one.\n\n"
     << "- A mediator is an entity that plays actions on behalf of delegating players.\n"
     << "- Each player may choose to delegate their move to the mediator or act independently.\n"
     << "- The mediator observes the number of players delegating to the mediator and then plays the same action "
        "for all delegating players.\n\n"
     << "The other player(s) will also design and propose a mediator. Only one will be present in the game though. "
        "Which one will be decided in a separate step later via an approval voting process by you and the other "
        "player(s). The winning mediator will be selected uniform at random from those with the maximum number of "
        "approvals.\n\n"
     << "Output Format:\n"
     << "Return a valid JSON object in a single line:\n"
     << "{\"1\": <Action>, ..., \"" << n << "\": <Action>} where <Action> is a string like \"A0\", \"A1\" ...\n\n"
     << "- Keys: the number of players delegating (from 1 to " << n << ").\n"
     << "- Values: the action the mediator will play on behalf of delegating players (e.g., \"A0\" or \"A1\" etc.).";
  return os.str();
}

inline std::string mediator_vote_twist(const DecisionRequest& r) {
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "On top of the original game rules, you will have the option to delegate your move to a mediator.\n"
     << "If you choose to delegate, the mediator will play an action for you based on how many players have "
        "delegated to it.\n"
     << "You can also choose to act independently.\n\n"
     << "But first, you and " << others(r.game->num_players())
     << " have to decide via an approval voting process which mediator will be present in the game. Your task now "
        "is to review each mediator and decide which ones you approve of. The winning mediator will be selected "
        "uniform at random from those with the maximum number of approvals.\n\n"
     << "Here are the mediator designs that have been proposed:";
  for (std::size_t i = 0; i < r.slate.size(); ++i) {
    os << (i ? "\n\n" : "\n") << "Mediator proposed by " << player_name(r.slate[i].proposer) << ":\n"
       << mediator_lines(std::get<MediatorSpec>(r.slate[i].spec));
  }
  os << "\n\nOutput Format:\n"
     << "Return a valid JSON object with your approvals:\n"
     << "{\"M1\": <true/false>, \"M2\": <true/false>, ...}\n\n"
     << "- Keys: mediator identifiers (e.g., \"M1\", \"M2\", ...)\n"
     << "- Values: `true` if you approve, `false` if you don't\n"
     << "- Ensure all mediators have an entry";
  return os.str();
}

inline std::string mediation_act_twist(const DecisionRequest& r) {
  const int delegate = r.game->num_actions(r.seat);
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "On top of the original game rules, you have the option to delegate your move to a mediator.\n"
     << "If you choose to delegate, the mediator will play an action for you based on how many players have "
        "delegated to it.\n"
     << "You can also choose to act independently.\n\n"
     << "The available mediator was proposed by " << player_name(r.selected->proposer)
     << " and selected via approval voting among the players. Here is what the mediator would do for the players "
        "that delegate to it:\n"
     << mediator_lines(std::get<MediatorSpec>(r.selected->spec)) << "\n\n"
     << "Consider " << action_label(delegate)
     << " as an additional action \"Delegate to Mediator\". Your final mixed strategy should include probability "
        "for all actions A0, A1, ..., "
     << action_label(delegate) << ".";
  return os.str();
}

inline std::string contract_proposal_twist() {
  return "Here is the twist:\n"
         "There will be the option for a payment contract in this game, and your task now is to design and propose "
         "one.\n\n"
         "- A contract is an additional payoff agreement on top of the original game payoffs. It specifies a number "
         "for each action that a player can play, indicating one of three cases:\n"
         "    * Positive number (+): the player receives an additional payment of X points in total, drawn equally "
         "from the other player(s).\n"
         "    * Negative number (-): the player pays an additional payment of X points in total, distributed equally "
         "among the other player(s).\n"
         "    * Zero (0): no additional payments in either direction.\n"
         "- Each player may choose to accept the contract as a whole or not.\n"
         "- The contract becomes active only if all players accept.\n\n"
         "The other player(s) will also design and propose a contract. Only one will be present in the game though. "
         "Which one will be decided in a separate step later via an approval voting process by you and the other "
         "player(s). The winning contract will be selected uniform at random from those with the maximum number of "
         "approvals.\n\n"
         "Output Format:\n"
         "Return a valid JSON object in a single line:\n"
         "{\"A0\": <INT>, \"A1\": <INT>, ...}\n\n"
         "- Keys: all available game actions.\n"
         "- Values: integers representing the extra payoff for that action.";
}

inline std::string contract_vote_twist(const DecisionRequest& r) {
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "On top of the original game rules, a payment contract can be put in place if the players agree to it via "
        "an approval voting process. A contract specifies a payment value for each action that a player can play.\n\n"
     << "Your task now is to review each proposed contract and decide which ones you approve of. The winning "
        "contract will be selected uniform at random from those with the maximum number of approvals.\n\n"
     << "Here are the contract designs that have been proposed:\n";
  for (const auto& p : r.slate)
    os << "Contract proposed by " << player_name(p.proposer) << ":\n"
       << contract_lines(std::get<ContractSpec>(p.spec)) << "\n\n";
  os << "\nOutput Format:\n"
     << "Return a valid JSON object with your approvals:\n"
     << "{\"C1\": <true/false>, \"C2\": <true/false>, ...}\n\n"
     << "- Keys: contract identifiers (e.g., \"C1\", \"C2\", ...)\n"
     << "- Values: `true` if you approve, `false` if you don't\n"
     << "- Ensure all contracts have an entry";
  return os.str();
}

inline std::string contract_sign_twist(const DecisionRequest& r) {
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "On top of the original game rules, you have the option to sign a payment contract. A contract specifies a "
        "payment value for each action that a player can play. Here is the contract that was selected via approval "
        "voting (proposed by "
     << player_name(r.selected->proposer) << "):\n"
     << contract_lines(std::get<ContractSpec>(r.selected->spec)) << "\n\n"
     << "At this stage, you are asked to decide whether to sign the contract. The contract becomes active only if "
        "all players sign it.\n\n"
     << "Output Requirement:\n"
     << "- Respond with a valid JSON object.\n"
     << "- Format: {\"sign\": <BOOL>} where <BOOL> is true or false.";
  return os.str();
}

inline std::string contract_act_twist(const DecisionRequest& r) {
  std::ostringstream os;
  os << "Here is the twist:\n"
     << "On top of the original game rules, there is a payment contract in place because every player signed it in "
        "beforehand. Here is the contract that was selected via approval voting (proposed by "
     << player_name(r.selected->proposer) << "):\n"
     << contract_lines(std::get<ContractSpec>(r.selected->spec)) << "\n\n"
     << "Since this contract directly affects your final payoff, consider the contract when making your strategy "
        "decisions!";
  return os.str();
}

}  // namespace detail

// Setup block of a game as seen from `seat`.
inline std::string render_game(const Game& g, int seat) {
  const int n = g.num_players();
  const bool two = n == 2;
  std::ostringstream os;
  os << "Setup:\n"
     << "You are playing a decision-making game with "
     << (two ? std::string("another player") : std::to_string(n - 1) + " other players") << ".\n"
     << "Your objective is to maximize your total points received in the game described in length below.\n\n"
     << "Actions available to each player:\n";
  for (int a = 0; a < g.num_actions(seat); ++a) {
    os << "- " << g.actions(seat)[a];
    if (static_cast<std::size_t>(a) < g.action_notes().size()) os << ": " << g.action_notes()[a];
    os << "\n";
  }
  os << "\nBasic game rules:\n"
     << "1. You and " << (two ? "the other player" : "the other players")
     << " each choose a probability for each action, simultaneously.\n"
     << "2. After " << (two ? "both" : "all") << " decisions are locked in, the final action will be drawn from the "
     << "probability distributions.\n"
     << "3. " << (two ? "Both" : "All") << " players receive the points specified in the payoff description below.\n\n"
     << "Payoff description:\n"
     << detail::payoff_description(g, seat) << "\n\n"
     << "In case player identification becomes relevant, you are playing in the position of "
     << detail::player_name(seat) << " in this game.";
  return os.str();
}

// Mechanism block ("Here is the twist: ..."); empty when the request runs
// on the unmodified game.
inline std::string render_twist(const DecisionRequest& r) {
  const Variant v = r.mechanism.variant;
  switch (r.phase) {
    case Phase::propose_mediator: return detail::mediator_proposal_twist(r);
    case Phase::propose_contract: return detail::contract_proposal_twist();
    case Phase::vote:
      return v == Variant::contracting ? detail::contract_vote_twist(r) : detail::mediator_vote_twist(r);
    case Phase::sign: return detail::contract_sign_twist(r);
    case Phase::act: break;
  }
  switch (v) {
    case Variant::no_mechanism: return {};
    case Variant::repetition: return detail::repetition_twist(r);
    case Variant::reputation_minus:
    case Variant::reputation_plus: return detail::reputation_twist(r);
    case Variant::mediation: return detail::mediation_act_twist(r);
    case Variant::contracting: return r.contract_active ? detail::contract_act_twist(r) : std::string{};
  }
  return {};
}

inline std::string render_prompt(const DecisionRequest& r) {
  r.validate();
  std::string out = render_game(*r.game, r.seat);
  const std::string twist = render_twist(r);
  if (!twist.empty()) out += "\n\n" + twist;
  return out;
}

// Classification prompt for chain-of-thought justifications. Shipped as a
// static template; {TEXT} is replaced by the transcript under analysis.
inline constexpr const char* kJudgePromptTemplate =
    "Analyze the following text and categorize the decision-making strategy used.\n"
    "You may choose one, multiple or none of the classes. If none apply, classify as other.\n"
    "\n"
    "Taxonomy:\n"
    "1. Individual utility maximization: Response includes considerations of pursuing the highest possible personal "
    "payoff, optimizing for self-interest with few regard for the payoffs of other players.\n"
    "2. Strategic equilibrium focus: Response includes considerations of appealing to game-theoretic stability, such "
    "as attempting to play a Nash equilibrium strategy. The agent bases its choice on formulating an optimal response "
    "to the anticipated, mathematically rational behavior of others.\n"
    "3. Social welfare maximization: Response includes considerations of a utilitarian desire to maximize the "
    "combined total payoff or collective utility of all players in the game, even if it requires sacrificing some of "
    "the agent's own individual payoff.\n"
    "4. Inequity aversion: Response includes considerations of a desire to minimize the difference in payoffs between "
    "players. The agent prioritizes symmetric outcomes, aiming to ensure no player gets significantly more or less "
    "than others.\n"
    "5. Reciprocity: Response includes considerations of an intention to respond to the other player's actions in "
    "kind, such as rewarding perceived cooperative behavior or punishing uncooperative behavior.\n"
    "6. Strategic influence: Response includes considerations of an attempt to shape the downstream behavior of other "
    "players or to maintain better control over the future dynamics of the game.\n"
    "7. Trust evaluation: Response includes considerations of an assessment of whether the other player can be "
    "trusted to cooperate or act in a mutually beneficial manner.\n"
    "8. Competitiveness: Response includes considerations of a desire to achieve a higher payoff than the other "
    "player, for example, by prioritizing relative performance and beating the other player.\n"
    "9. Uncertainty evaluation: Response includes considerations of the need to navigate, measure, or mitigate "
    "uncertainty regarding the other player's underlying intentions or strategy.\n"
    "10. Social norm conformity: Response includes considerations of evaluating other players' expectations or "
    "attempting to conform to a perceived norm, collective practice, or cultural appropriateness.\n"
    "11. Rule misunderstanding: Response includes considerations of an expressed misunderstanding, uncertainty, or "
    "confusion regarding the underlying rules and mechanics of the game.\n"
    "12. Exploration-exploitation trade-off: Response includes considerations of the need to balance exploiting "
    "known, high-performing strategies against experimenting with less-explored ones.\n"
    "13. Risk aversion: Response includes considerations of a desire to minimize exposure to risk and unpredictable "
    "outcomes.\n"
    "14. Strategy legibility: Response includes considerations of the intent to adopt a simple, clear strategy that "
    "is easily understood or anticipated by the other player.\n"
    "15. Multidimensional reasoning: The agent exhibits complex reasoning that integrates various facets of the "
    "decision-making problem. The analysis goes beyond a one-dimensional approach / mathematical treatment.\n"
    "\n"
    "Text to analyze:\n"
    "\"\"\"\n"
    "{TEXT}\n"
    "\"\"\"\n"
    "\n"
    "IMPORTANT: Your response MUST be in valid JSON format EXACTLY as shown below. Do not include any explanatory "
    "text outside of the JSON structure.\n"
    "\n"
    "Example of the required JSON format:\n"
    "{\n"
    "  \"Reasoning_behind_classification\": \"Explanation of your classification reasoning\",\n"
    "  \"Confidence\": 0.85,\n"
    "  \"justification_type\": \"Category1, Category2\"\n"
    "}\n"
    "\n"
    "Ensure that:\n"
    "1. Your JSON is properly formatted with no trailing commas\n"
    "2. \"Confidence\" is a decimal number between 0 and 1, not a string\n"
    "3. For multiple justification types, list them as a comma-separated string\n"
    "4. Don't include any text outside the JSON object";

}  // namespace coopmech
