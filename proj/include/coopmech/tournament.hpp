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
#include <cstdint>
#include <functional>
#include <future>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coopmech/agents.hpp"
#include "coopmech/episode.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/game.hpp"
#include "coopmech/mechanism.hpp"
#include "coopmech/rng.hpp"

namespace coopmech {

struct TournamentConfig {
  std::string game_name;
  GameParams game_params;
  MechanismConfig mechanism;
  std::vector<AgentKind> roster;
  int repeats = 3;
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::string config_digest;

  void validate() const {
    mechanism.validate();
    check_roster(roster);
    for (const auto& k : roster) check_agent_kind(k);
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  }
};

// Cross product roster^seats, row-major (seat 0 most significant).
inline std::vector<std::vector<int>> enumerate_assignments(int num_kinds, int num_seats) {
  if (num_kinds < 1 || num_seats < 1) throw std::invalid_argument("enumerate_assignments: empty roster or no seats");
  std::size_t total = 1;
  for (int s = 0; s < num_seats; ++s) total *= static_cast<std::size_t>(num_kinds);
  std::vector<std::vector<int>> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<int> a(num_seats);
    std::size_t idx = i;
    for (int s = num_seats - 1; s >= 0; --s) {
      a[s] = static_cast<int>(idx % num_kinds);
      idx /= num_kinds;
    }
    out.push_back(std::move(a));
  }
  return out;
}

inline std::vector<std::vector<int>> enumerate_assignments(const std::vector<AgentKind>& roster, const Game& game,
                                                           Variant variant) {
  if (is_reputation(variant))
    throw ConfigError(std::string("enumerate_assignments: ") + to_string(variant) +
                      " uses one pooled population per episode, not seat assignments");
  return enumerate_assignments(static_cast<int>(roster.size()), game.num_players());
}

// Members of a pooled population, as roster indices. The default is one
// member per (kind, seat) slot.
inline std::vector<int> pooled_population(const TournamentConfig& cfg, int num_players) {
  const int k = static_cast<int>(cfg.roster.size());
  const int size = cfg.mechanism.population_size.value_or(k * num_players);
  if (size < num_players || size % num_players != 0)
    throw ConfigError("population_size " + std::to_string(size) + " is not a positive multiple of " +
                      std::to_string(num_players));
  std::vector<int> members(size);
  for (int i = 0; i < size; ++i) members[i] = i % k;
  return members;
}

// Pooled episodes carry assignment index -1.
inline std::uint64_t episode_seed(std::uint64_t base, long assignment, int repeat) {
  return mix_seed(base, {static_cast<std::uint64_t>(assignment), static_cast<std::uint64_t>(repeat)});
}

struct EpisodeTask {
  long assignment = -1;
  int repeat = 0;
  std::vector<int> members;  // roster index per seat or population member
};

inline std::vector<EpisodeTask> plan_episodes(const TournamentConfig& cfg, const Game& game) {
  std::vector<EpisodeTask> tasks;
  if (is_reputation(cfg.mechanism.variant)) {
    const auto members = pooled_population(cfg, game.num_players());
    for (int r = 0; r < cfg.repeats; ++r) tasks.push_back({-1, r, members});
    return tasks;
  }
  const auto assignments = enumerate_assignments(cfg.roster, game, cfg.mechanism.variant);
  for (std::size_t a = 0; a < assignments.size(); ++a)
    for (int r = 0; r < cfg.repeats; ++r) tasks.push_back({static_cast<long>(a), r, assignments[a]});
  return tasks;
}

inline EpisodeRecord run_task(const TournamentConfig& cfg, const std::shared_ptr<const Game>& game,
                              const EpisodeTask& task, const std::shared_ptr<ChatTransport>& transport) {
  std::vector<std::unique_ptr<Agent>> owned;
  std::vector<Agent*> agents;
  std::vector<std::string> labels;
  for (int m : task.members) {
    owned.push_back(make_agent(cfg.roster.at(m), transport));
    agents.push_back(owned.back().get());
    labels.push_back(cfg.roster[m].label);
  }
  EpisodeRecord rec = run_episode(game, cfg.mechanism, agents, labels, episode_seed(cfg.seed, task.assignment, task.repeat));
  rec.config_digest = cfg.config_digest;
  rec.assignment = task.assignment;
  rec.repeat = task.repeat;
  return rec;
}

// Runs every planned episode not in `done` (keyed by assignment and
// repeat). Up to `parallelism` episodes run at once; records reach `sink`
// in plan order regardless of completion order.
inline void run_tournament(const TournamentConfig& cfg, const std::shared_ptr<ChatTransport>& transport,
                           const std::set<std::pair<long, int>>& done,
                           const std::function<void(const EpisodeRecord&)>& sink) {
  cfg.validate();
  auto game = std::make_shared<const Game>(build_game(cfg.game_name, cfg.game_params));
  std::vector<EpisodeTask> todo;
  for (auto& t : plan_episodes(cfg, *game))
    if (!done.count({t.assignment, t.repeat})) todo.push_back(std::move(t));
  const std::size_t batch = static_cast<std::size_t>(cfg.parallelism);
  for (std::size_t start = 0; start < todo.size(); start += batch) {
    const std::size_t end = std::min(todo.size(), start + batch);
    if (batch == 1) {
      sink(run_task(cfg, game, todo[start], transport));
      continue;
    }
    std::vector<std::future<EpisodeRecord>> running;
    for (std::size_t i = start; i < end; ++i)
      running.push_back(std::async(std::launch::async, [&, i] { return run_task(cfg, game, todo[i], transport); }));
    for (auto& f : running) sink(f.get());
  }
}

// --- metagame tensor -------------------------------------------------------

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  long count = 0;
};

inline Estimate estimate(const std::vector<double>& xs) {
  Estimate e;
  e.count = static_cast<long>(xs.size());
  if (xs.empty()) return e;
  e.value = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - e.value) * (x - e.value);
    e.error = std::sqrt(ss / (xs.size() - 1) / xs.size());
  }
  return e;
}

// Normalized payoffs per seat assignment. Seats stay distinct; entry i
// follows the order of enumerate_assignments.
class MetagameTensor {
 public:
  MetagameTensor(std::vector<std::string> kinds, int seats)
      : kinds_(std::move(kinds)), seats_(seats) {
    if (kinds_.empty() || seats < 1) throw std::invalid_argument("MetagameTensor: empty shape");
    std::size_t total = 1;
    for (int s = 0; s < seats_; ++s) total *= kinds_.size();
    samples_.assign(total, std::vector<std::vector<double>>(seats_));
  }

  int num_kinds() const { return static_cast<int>(kinds_.size()); }
  int num_seats() const { return seats_; }
  const std::vector<std::string>& kinds() const { return kinds_; }
  std::size_t num_entries() const { return samples_.size(); }

  std::size_t index_of(const std::vector<int>& assignment) const {
    if (static_cast<int>(assignment.size()) != seats_) throw std::invalid_argument("MetagameTensor: wrong arity");
    std::size_t idx = 0;
    for (int k : assignment) {
      if (k < 0 || k >= num_kinds()) throw std::invalid_argument("MetagameTensor: kind out of range");
      idx = idx * kinds_.size() + static_cast<std::size_t>(k);
    }
    return idx;
  }

  std::vector<int> assignment_at(std::size_t index) const {
    std::vector<int> a(seats_);
    for (int s = seats_ - 1; s >= 0; --s) {
      a[s] = static_cast<int>(index % kinds_.size());
      index /= kinds_.size();
    }
    return a;
  }

  void add_sample(std::size_t entry, const std::vector<double>& seat_values) {
    if (static_cast<int>(seat_values.size()) != seats_) throw std::invalid_argument("MetagameTensor: wrong arity");
    for (int s = 0; s < seats_; ++s) samples_.at(entry)[s].push_back(seat_values[s]);
    means_valid_ = false;
  }

  // Replaces every entry by fixed values (no sampling information).
  static MetagameTensor from_values(std::vector<std::string> kinds, int seats,
                                    const std::vector<std::vector<double>>& values) {
    MetagameTensor t(std::move(kinds), seats);
    if (values.size() != t.num_entries()) throw std::invalid_argument("MetagameTensor: wrong number of entries");
    for (std::size_t i = 0; i < values.size(); ++i) t.add_sample(i, values[i]);
    return t;
  }

  const std::vector<double>& samples(std::size_t entry, int seat) const { return samples_.at(entry).at(seat); }
  long count(std::size_t entry) const { return static_cast<long>(samples_.at(entry).front().size()); }

  bool complete() const {
    for (std::size_t i = 0; i < samples_.size(); ++i)
      if (count(i) == 0) return false;
    return true;
  }

  // Mean payoff of `seat` at entry; requires at least one sample.
  double payoff(std::size_t entry, int seat) const {
    refresh();
    return means_.at(entry * seats_ + seat);
  }
  double payoff(const std::vector<int>& assignment, int seat) const { return payoff(index_of(assignment), seat); }

  Estimate entry_estimate(std::size_t entry, int seat) const { return estimate(samples(entry, seat)); }

  // Copy with per-entry samples replaced (bootstrap resampling).
  MetagameTensor with_samples(std::vector<std::vector<std::vector<double>>> samples) const {
    MetagameTensor t(*this);
    t.samples_ = std::move(samples);
    t.means_valid_ = false;
    return t;
  }
  const std::vector<std::vector<std::vector<double>>>& all_samples() const { return samples_; }

 private:
  void refresh() const {
    if (means_valid_) return;
    means_.assign(samples_.size() * seats_, 0.0);
    for (std::size_t i = 0; i < samples_.size(); ++i)
      for (int s = 0; s < seats_; ++s) {
        const auto& xs = samples_[i][s];
        if (xs.empty()) throw std::logic_error("MetagameTensor: entry has no samples");
        means_[i * seats_ + s] = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
      }
    means_valid_ = true;
  }

  std::vector<std::string> kinds_;
  int seats_;
  std::vector<std::vector<std::vector<double>>> samples_;  // [entry][seat][sample]
  mutable std::vector<double> means_;
  mutable bool means_valid_ = false;
};

// Tensor of normalized weighted payoffs from fixed-partner episodes;
// aborted episodes are skipped.
inline MetagameTensor build_tensor(const std::vector<std::string>& kinds, const Game& game,
                                   const std::vector<EpisodeRecord>& records) {
  MetagameTensor t(kinds, game.num_players());
  for (const auto& r : records) {
    if (!r.ok()) continue;
    if (r.assignment < 0 || static_cast<std::size_t>(r.assignment) >= t.num_entries())
      throw ConfigError("episode record: assignment index " + std::to_string(r.assignment) + " out of range");
    std::vector<double> values;
    for (const auto& o : r.outcomes) values.push_back(normalized_outcome(game, o, r.mechanism.delta));
    t.add_sample(static_cast<std::size_t>(r.assignment), values);
  }
  return t;
}

// Per-kind mean normalized payoff of pooled episodes: each episode
// contributes the average over that kind's members, the error is taken
// across episodes.
inline std::vector<Estimate> pooled_kind_means(const std::vector<std::string>& kinds, const Game& game,
                                               const std::vector<EpisodeRecord>& records) {
  std::vector<std::vector<double>> per_kind(kinds.size());
  for (const auto& r : records) {
    if (!r.ok()) continue;
    std::vector<double> sum(kinds.size(), 0.0);
    std::vector<int> cnt(kinds.size(), 0);
    for (const auto& o : r.outcomes) {
      auto it = std::find(kinds.begin(), kinds.end(), o.label);
      if (it == kinds.end()) throw ConfigError("episode record: unknown agent label '" + o.label + "'");
      const std::size_t k = static_cast<std::size_t>(it - kinds.begin());
      sum[k] += normalized_outcome(game, o, r.mechanism.delta);
      ++cnt[k];
    }
    for (std::size_t k = 0; k < kinds.size(); ++k)
      if (cnt[k] > 0) per_kind[k].push_back(sum[k] / cnt[k]);
  }
  std::vector<Estimate> out;
  for (const auto& xs : per_kind) out.push_back(estimate(xs));
  return out;
}

// Unweighted mean over games of per-kind values; errors combine as
// sqrt(sum s_g^2) / G, i.e. s / sqrt(G) for equal per-game errors.
inline std::vector<Estimate> aggregate_across_games(const std::vector<std::vector<std::string>>& rosters,
                                                    const std::vector<std::vector<Estimate>>& per_game) {
  if (per_game.empty()) throw std::invalid_argument("aggregate_across_games: no games");
  if (rosters.size() != per_game.size()) throw std::invalid_argument("aggregate_across_games: one roster per game");
  for (std::size_t g = 0; g < rosters.size(); ++g) {
    if (rosters[g] != rosters.front()) throw ConfigError("aggregate_across_games: rosters differ between games");
    if (per_game[g].size() != rosters[g].size()) throw std::invalid_argument("aggregate_across_games: size mismatch");
  }
  const double G = static_cast<double>(per_game.size());
  std::vector<Estimate> out(rosters.front().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double sum = 0.0, var = 0.0;
    long count = 0;
    for (const auto& game : per_game) {
      sum += game[k].value;
      var += game[k].error * game[k].error;
      count += game[k].count;
    }
    out[k] = {sum / G, std::sqrt(var) / G, count};
  }
  return out;
}

}  // namespace coopmech
