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

#include <memory>
#include <string>
#include <vector>

#include "coopmech/decision.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/prompt.hpp"
#include "coopmech/transport.hpp"
#include "coopmech/wire.hpp"

namespace coopmech {

struct ExternalAgentConfig {
  std::string model;
  bool reasoning = true;  // chain-of-thought block; otherwise the direct-output block
  SamplingParams sampling;
  int reasks = 2;         // fresh requests after a parse failure
};

// Messages sent for one decision. The action-selection schema is a system
// message for the act phase only; the other phases carry their own output
// format inside the twist block.
inline std::vector<ChatMessage> build_messages(const DecisionRequest& req, bool reasoning) {
  std::vector<ChatMessage> out;
  if (req.phase == Phase::act) out.push_back({"system", kActionSchemaInstruction});
  out.push_back({"user", render_prompt(req) + "\n\n" +
                             (reasoning ? kChainOfThoughtInstruction : kDirectOutputInstruction)});
  return out;
}

// One decision through a chat transport. Every phase is a fresh,
// stateless conversation.
inline DecisionResponse external_decide(ChatTransport& transport, const ExternalAgentConfig& cfg,
                                        const DecisionRequest& req) {
  ChatRequest chat{cfg.model, build_messages(req, cfg.reasoning), cfg.sampling};
  const WireContext ctx = wire_context(req);
  std::string last_rule;
  for (int attempt = 0; attempt <= cfg.reasks; ++attempt) {
    std::string text;
    try {
      text = transport.complete(chat);
    } catch (const TransportError& e) {
      throw TransportError(std::string("phase ") + to_string(req.phase) + ": " + e.what());
    }
    try {
      return parse_response(ctx, text);
    } catch (const WireError& e) {
      last_rule = e.what();
    }
  }
  throw DecisionError(std::string("phase ") + to_string(req.phase) + ": unparsable response after " +
                      std::to_string(cfg.reasks + 1) + " attempt(s): " + last_rule);
}

class ExternalAgent : public Agent {
 public:
  ExternalAgent(std::shared_ptr<ChatTransport> transport, ExternalAgentConfig cfg)
      : transport_(std::move(transport)), cfg_(std::move(cfg)) {
    if (!transport_) throw ConfigError("external agent: no transport");
    if (cfg_.reasks < 0) throw ConfigError("external agent: reasks must be >= 0");
  }

  DecisionResponse decide(const DecisionRequest& request) override {
    return external_decide(*transport_, cfg_, request);
  }

 private:
  std::shared_ptr<ChatTransport> transport_;
  ExternalAgentConfig cfg_;
};

}  // namespace coopmech
