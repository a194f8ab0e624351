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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopmech/errors.hpp"
#include "coopmech/lp.hpp"
#include "coopmech/rng.hpp"
#include "coopmech/tournament.hpp"

namespace coopmech {

using PopulationState = std::vector<double>;

struct ReplicatorConfig {
  int steps = 1000;
  double learning_rate = 0.1;

  void validate() const {
    if (steps < 1) throw ConfigError("replicator: steps must be >= 1");
    if (!(learning_rate > 0)) throw ConfigError("replicator: learning_rate must be positive");
  }
};

inline void check_population(const MetagameTensor& t, const PopulationState& pop) {
  if (static_cast<int>(pop.size()) != t.num_kinds()) throw std::invalid_argument("population: wrong number of kinds");
  double sum = 0.0;
  for (double p : pop) {
    if (!(p >= 0.0)) throw std::invalid_argument("population: negative or NaN mass");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("population: masses do not sum to 1");
}

inline PopulationState uniform_population(int kinds) { return PopulationState(kinds, 1.0 / kinds); }

// Expected payoff of every kind placed in a uniformly random seat, all
// other seats filled independently from `pop`.
inline std::vector<double> population_fitness(const MetagameTensor& t, const PopulationState& pop) {
  check_population(t, pop);
  const int n = t.num_seats();
  std::vector<double> f(t.num_kinds(), 0.0);
  for (std::size_t e = 0; e < t.num_entries(); ++e) {
    const auto a = t.assignment_at(e);
    for (int p = 0; p < n; ++p) {
      double w = 1.0;
      for (int q = 0; q < n; ++q)
        if (q != p) w *= pop[a[q]];
      if (w != 0.0) f[a[p]] += w * t.payoff(e, p);
    }
  }
  for (double& x : f) x /= n;
  return f;
}

inline double population_fitness(const MetagameTensor& t, const PopulationState& pop, int kind) {
  if (kind < 0 || kind >= t.num_kinds()) throw std::invalid_argument("population_fitness: unknown kind");
  return population_fitness(t, pop)[kind];
}

// Mean metric: fitness against the uniform population.
inline std::vector<double> mean_metric(const MetagameTensor& t) {
  return population_fitness(t, uniform_population(t.num_kinds()));
}

// p'(i) proportional to p(i) exp(eta f_i(p)). The largest fitness is
// subtracted before exponentiating; this cancels in the normalization.
inline PopulationState replicator_step(const MetagameTensor& t, const PopulationState& pop,
                                       const ReplicatorConfig& cfg) {
  cfg.validate();
  const auto f = population_fitness(t, pop);
  const double top = *std::max_element(f.begin(), f.end());
  PopulationState next(pop.size());
  double z = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    next[i] = pop[i] * std::exp(cfg.learning_rate * (f[i] - top));
    z += next[i];
  }
  for (double& p : next) p /= z;
  return next;
}

struct FitnessResult {
  std::vector<double> fitness;  // against the final population
  PopulationState final_population;
  std::vector<PopulationState> trajectory;  // steps + 1 states, starting uniform
};

inline FitnessResult fitness_metric(const MetagameTensor& t, const ReplicatorConfig& cfg = {}) {
  cfg.validate();
  if (!t.complete()) throw ConfigError("fitness: metagame tensor has empty entries");
  FitnessResult r;
  PopulationState pop = uniform_population(t.num_kinds());
  r.trajectory.push_back(pop);
  for (int s = 0; s < cfg.steps; ++s) {
    pop = replicator_step(t, pop, cfg);
    r.trajectory.push_back(pop);
  }
  r.final_population = pop;
  r.fitness = population_fitness(t, pop);
  return r;
}

// --- deviation ratings ------------------------------------------------------

inline constexpr int kMaxRatedKinds = 12;

struct DeviationRatingResult {
  std::vector<double> ratings;           // per kind; higher is better
  std::vector<double> ranks;             // 1 = best, ties share the mean rank
  std::vector<double> equilibrium;       // joint distribution over tensor entries
  std::vector<double> strictness;        // optimal max gain per tier
  std::vector<std::vector<int>> tiers;   // kinds frozen at each tier
};

// Rank 1 for the largest value; values within `tol` of their neighbour in
// sorted order share the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& values, double tol = 1e-6) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j - 1]] - values[order[j]] <= tol) ++j;
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean;
    i = j;
  }
  return ranks;
}

// Seat-averaged gain of switching to kind k at each entry:
// g_k(a) = (1/n) sum_p [u_p(k, a_-p) - u_p(a)].
inline std::vector<std::vector<double>> deviation_gains(const MetagameTensor& t) {
  const int n = t.num_seats();
  std::vector<std::vector<double>> g(t.num_kinds(), std::vector<double>(t.num_entries(), 0.0));
  for (std::size_t e = 0; e < t.num_entries(); ++e) {
    const auto a = t.assignment_at(e);
    for (int k = 0; k < t.num_kinds(); ++k) {
      double sum = 0.0;
      for (int p = 0; p < n; ++p) {
        auto dev = a;
        dev[p] = k;
        sum += t.payoff(dev, p) - t.payoff(e, p);
      }
      g[k][e] = sum / n;
    }
  }
  return g;
}

namespace detail {

// min over joint distributions sigma of `objective_kind`'s gain, or of the
// largest active gain when objective_kind < 0, subject to active gains
// <= active_cap (when capped) and frozen gains <= their values.
inline LpSolution dr_program(const std::vector<std::vector<double>>& g, const std::vector<int>& active,
                             const std::vector<std::pair<int, double>>& frozen, int objective_kind,
                             double active_cap) {
  const std::size_t E = g.front().size();
  constexpr double slack = 1e-9;
  LinearProgram lp;
  if (objective_kind < 0) {
    // Variables: sigma (E), t+ and t-.
    lp.num_vars = static_cast<int>(E + 2);
    lp.objective.assign(E + 2, 0.0);
    lp.objective[E] = 1.0;
    lp.objective[E + 1] = -1.0;
    for (int k : active) {
      std::vector<double> row(g[k]);
      row.push_back(-1.0);
      row.push_back(1.0);
      lp.add(std::move(row), Sense::le, 0.0);
    }
  } else {
    lp.num_vars = static_cast<int>(E);
    lp.objective = g[objective_kind];
    for (int k : active) lp.add(g[k], Sense::le, active_cap + slack);
  }
  for (const auto& [k, v] : frozen) {
    std::vector<double> row(g[k]);
    row.resize(lp.num_vars, 0.0);
    lp.add(std::move(row), Sense::le, v + slack);
  }
  std::vector<double> ones(E, 1.0);
  ones.resize(lp.num_vars, 0.0);
  lp.add(std::move(ones), Sense::eq, 1.0);
  return solve_lp(lp);
}

}  // namespace detail

// Iterated most-strict coarse correlated equilibrium of the metagame.
// Each tier minimizes the largest seat-averaged deviation gain over the
// kinds not yet rated; kinds whose gain cannot be pushed below that
// optimum on the optimal face are rated with it and frozen, and the
// program is re-solved on the rest.
inline DeviationRatingResult deviation_ratings(const MetagameTensor& t, double tol = 1e-7) {
  const int K = t.num_kinds();
  if (K > kMaxRatedKinds)
    throw ConfigError("deviation ratings: at most " + std::to_string(kMaxRatedKinds) + " kinds supported");
  if (!t.complete()) throw ConfigError("deviation ratings: metagame tensor has empty entries");
  const auto g = deviation_gains(t);
  const std::size_t E = t.num_entries();

  DeviationRatingResult r;
  r.ratings.assign(K, 0.0);
  std::vector<int> active(K);
  std::iota(active.begin(), active.end(), 0);
  std::vector<std::pair<int, double>> frozen;
  while (!active.empty()) {
    const LpSolution top = detail::dr_program(g, active, frozen, -1, 0.0);
    if (top.status != LpStatus::optimal)
      throw std::logic_error("deviation ratings: equilibrium program not solved (internal error)");
    const double tstar = top.value;
    if (r.equilibrium.empty()) r.equilibrium.assign(top.x.begin(), top.x.begin() + E);
    std::vector<int> tier;
    std::vector<double> lowest(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      const LpSolution probe = detail::dr_program(g, active, frozen, active[i], tstar);
      lowest[i] = probe.status == LpStatus::optimal ? probe.value : tstar;
      if (lowest[i] >= tstar - tol) tier.push_back(active[i]);
    }
    if (tier.empty()) {
      const auto it = std::max_element(lowest.begin(), lowest.end());
      tier.push_back(active[it - lowest.begin()]);
    }
    for (int k : tier) {
      r.ratings[k] = tstar;
      frozen.emplace_back(k, tstar);
      active.erase(std::find(active.begin(), active.end(), k));
    }
    r.strictness.push_back(tstar);
    r.tiers.push_back(tier);
  }
  r.ranks = average_ranks(r.ratings);
  return r;
}

// --- error bars -------------------------------------------------------------

// Standard deviation of `metric` over bootstrap resamples of each entry's
// repeats (seats resampled jointly). Entries with a single sample stay
// fixed, so a fully deterministic tensor yields zero error.
inline std::vector<double> bootstrap_errors(const MetagameTensor& t,
                                            const std::function<std::vector<double>(const MetagameTensor&)>& metric,
                                            int resamples = 20, std::uint64_t seed = 0x5eed) {
  const auto& base = t.all_samples();
  Rng rng(seed);
  std::vector<std::vector<double>> draws;
  for (int b = 0; b < resamples; ++b) {
    auto samples = base;
    for (std::size_t e = 0; e < base.size(); ++e) {
      const std::size_t count = base[e].front().size();
      if (count < 2) continue;
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t pick = rng.uniform_below(count);
        for (std::size_t s = 0; s < base[e].size(); ++s) samples[e][s][i] = base[e][s][pick];
      }
    }
    draws.push_back(metric(t.with_samples(std::move(samples))));
  }
  std::vector<double> err(t.num_kinds(), 0.0);
  if (resamples < 2) return err;
  for (int k = 0; k < t.num_kinds(); ++k) {
    double mean = 0.0;
    for (const auto& d : draws) mean += d[k];
    mean /= resamples;
    double ss = 0.0;
    for (const auto& d : draws) ss += (d[k] - mean) * (d[k] - mean);
    err[k] = std::sqrt(ss / (resamples - 1));
  }
  return err;
}

// Error of the Mean metric from the per-entry standard errors.
inline std::vector<double> mean_metric_errors(const MetagameTensor& t) {
  const int n = t.num_seats();
  const double w = std::pow(1.0 / t.num_kinds(), n - 1) / n;
  std::vector<double> var(t.num_kinds(), 0.0);
  for (std::size_t e = 0; e < t.num_entries(); ++e) {
    const auto a = t.assignment_at(e);
    for (int p = 0; p < n; ++p) {
      const double s = t.entry_estimate(e, p).error;
      var[a[p]] += w * w * s * s;
    }
  }
  for (double& v : var) v = std::sqrt(v);
  return var;
}

}  // namespace coopmech
