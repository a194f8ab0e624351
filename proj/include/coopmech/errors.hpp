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

#include <stdexcept>
#include <string>

namespace coopmech {

// Malformed or inconsistent run configuration (config files, CLI flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The chat transport could not deliver a response within its retry budget.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An agent output that violates the wire schema of its phase. The message
// names the violated rule.
class DecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An equilibrium construction failed its check.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coopmech
