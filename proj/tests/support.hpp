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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coopmech/game.hpp"

namespace coopmech::testing {

inline std::filesystem::path source_dir() { return COOPMECH_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("coopmech_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Game with integer payoffs in [lo, hi], shared labels A0..
inline Game random_game(std::mt19937_64& gen, std::vector<int> actions, int lo = -5, int hi = 5) {
  std::uniform_int_distribution<int> pay(lo, hi);
  std::vector<std::vector<std::string>> labels;
  std::size_t profiles = 1;
  for (int m : actions) {
    std::vector<std::string> row;
    for (int a = 0; a < m; ++a) row.push_back(action_label(a));
    labels.push_back(row);
    profiles *= static_cast<std::size_t>(m);
  }
  std::vector<std::vector<double>> payoffs(profiles);
  for (auto& row : payoffs)
    for (std::size_t p = 0; p < actions.size(); ++p) row.push_back(pay(gen));
  ActionProfile zero(actions.size(), 0);
  return Game("random", labels, payoffs, zero, zero);
}

inline MixedAction random_mixed(std::mt19937_64& gen, int actions) {
  std::vector<int> w(actions, 0);
  std::uniform_int_distribution<int> pick(0, actions - 1);
  for (int i = 0; i < 100; ++i) ++w[pick(gen)];
  return MixedAction(w);
}

}  // namespace coopmech::testing
