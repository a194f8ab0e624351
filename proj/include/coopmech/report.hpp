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
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coopmech/config.hpp"
#include "coopmech/errors.hpp"
#include "coopmech/metrics.hpp"
#include "coopmech/run.hpp"
#include "coopmech/tournament.hpp"

namespace coopmech {

inline constexpr const char* kSummarySchema = "coopmech.summary/1";
inline constexpr const char* kAllGames = "ALL";
inline constexpr const char* kAverageKind = "__average__";

struct SummaryRow {
  std::string mechanism;
  std::string game;
  std::string metric;  // mean, fitness, dr_rating, dr_rank
  std::string kind;
  double value = 0.0;
  double error = 0.0;
};

struct MissingCell {
  std::string mechanism;
  std::string game;
  std::string cell;  // seat assignment labels, or "pooled"
  long have = 0;
  long want = 0;
};

struct AnalysisResult {
  std::vector<SummaryRow> rows;
  std::vector<MissingCell> missing;
  std::map<std::string, std::string> exports;  // file name -> contents
  bool manifest_complete = false;
};

inline std::string format_fixed(double v) {
  if (std::fabs(v) < 5e-7) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = std::string("# schema=") + kSummarySchema + "\nmechanism,game,metric,kind,value,stderr\n";
  for (const auto& r : rows)
    out += r.mechanism + "," + r.game + "," + r.metric + "," + r.kind + "," + format_fixed(r.value) + "," +
           format_fixed(r.error) + "\n";
  return out;
}

namespace detail {

inline std::string join_labels(const std::vector<std::string>& kinds, const std::vector<int>& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "|" : "") + kinds[a[i]];
  return s;
}

inline std::vector<Estimate> with_errors(const std::vector<double>& values, const std::vector<double>& errors) {
  std::vector<Estimate> out;
  for (std::size_t k = 0; k < values.size(); ++k) out.push_back({values[k], errors[k], 1});
  return out;
}

inline void push_metric(std::vector<SummaryRow>& rows, const std::string& mech, const std::string& game,
                        const std::string& metric, const std::vector<std::string>& kinds,
                        const std::vector<Estimate>& xs) {
  double sum = 0.0, var = 0.0;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    rows.push_back({mech, game, metric, kinds[k], xs[k].value, xs[k].error});
    sum += xs[k].value;
    var += xs[k].error * xs[k].error;
  }
  const double K = static_cast<double>(kinds.size());
  rows.push_back({mech, game, metric, kAverageKind, sum / K, std::sqrt(var) / K});
}

inline std::string tensor_csv(const MetagameTensor& t) {
  std::string out = "# schema=coopmech.tensor/1\nassignment,seat,kind,value,stderr,count\n";
  for (std::size_t e = 0; e < t.num_entries(); ++e) {
    const auto a = t.assignment_at(e);
    for (int s = 0; s < t.num_seats(); ++s) {
      const Estimate est = t.entry_estimate(e, s);
      out += join_labels(t.kinds(), a) + "," + std::to_string(s) + "," + t.kinds()[a[s]] + "," +
             (est.count ? format_fixed(est.value) : std::string("")) + "," + format_fixed(est.error) + "," +
             std::to_string(est.count) + "\n";
    }
  }
  return out;
}

inline std::string trajectory_csv(const std::vector<std::string>& kinds, const FitnessResult& f) {
  std::string out = "# schema=coopmech.replicator/1\nstep";
  for (const auto& k : kinds) out += "," + k;
  out += "\n";
  for (std::size_t s = 0; s < f.trajectory.size(); ++s) {
    out += std::to_string(s);
    for (double x : f.trajectory[s]) out += "," + format_fixed(x);
    out += "\n";
  }
  return out;
}

inline std::string tiers_csv(const std::vector<std::string>& kinds, const DeviationRatingResult& dr) {
  std::string out = "# schema=coopmech.dr/1\ntier,kind,rating,rank\n";
  for (std::size_t i = 0; i < dr.tiers.size(); ++i)
    for (int k : dr.tiers[i])
      out += std::to_string(i + 1) + "," + kinds[k] + "," + format_fixed(dr.ratings[k]) + "," +
             format_fixed(dr.ranks[k]) + "\n";
  return out;
}

}  // namespace detail

// Recomputes every metric from the logs in `dir`. Cells without a usable
// episode are reported, and the metrics of a combination with such cells
// are left out rather than guessed.
inline AnalysisResult analyze_run(const fs::path& dir) {
  const fs::path config_path = dir / "config.json";
  if (!fs::exists(config_path)) throw ConfigError("no runs found in " + dir.string());
  const RunConfig cfg = load_run_config(config_path);
  {
    std::ifstream in(config_path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    if (sha256_hex(os.str()) != cfg.digest) throw ConfigError(config_path.string() + ": not in canonical form");
  }

  AnalysisResult res;
  if (fs::exists(dir / "manifest.json")) {
    std::ifstream in(dir / "manifest.json");
    const auto m = nlohmann::json::parse(in);
    if (m.value("config_digest", "") != cfg.digest) throw ConfigError("manifest digest does not match config.json");
    res.manifest_complete = m.value("complete", false);
  }

  const auto kinds = cfg.labels();
  bool any_log = false;
  std::vector<SummaryRow> aggregate_rows;
  for (const auto& mech : cfg.mechanisms) {
    const std::string mname = to_string(mech.variant);
    const bool pooled = is_reputation(mech.variant);
    std::map<std::string, std::vector<std::vector<Estimate>>> per_metric;  // metric -> per game
    for (const auto& gname : cfg.games) {
      const fs::path log = episode_log_path(dir, mname, gname);
      if (fs::exists(log)) any_log = true;
      std::vector<EpisodeRecord> records = latest_records(read_episode_log(log).records);
      for (const auto& r : records)
        if (r.config_digest != cfg.digest)
          throw ConfigError(log.string() + ": record with foreign config digest " + r.config_digest);
      const Game game = build_game(gname, cfg.game_params);
      const std::string stem = mname + "__" + gname;

      if (pooled) {
        long ok = 0;
        for (const auto& r : records) ok += r.ok();
        if (ok < cfg.repeats) res.missing.push_back({mname, gname, "pooled", ok, cfg.repeats});
        if (ok == 0) continue;
        const auto means = pooled_kind_means(kinds, game, records);
        detail::push_metric(res.rows, mname, gname, "mean", kinds, means);
        per_metric["mean"].push_back(means);
        continue;
      }

      const MetagameTensor t = build_tensor(kinds, game, records);
      res.exports["tensor__" + stem + ".csv"] = detail::tensor_csv(t);
      bool complete = true;
      for (std::size_t e = 0; e < t.num_entries(); ++e)
        if (t.count(e) < cfg.repeats) {
          res.missing.push_back({mname, gname, detail::join_labels(kinds, t.assignment_at(e)), t.count(e), cfg.repeats});
          if (t.count(e) == 0) complete = false;
        }
      if (!complete) continue;

      const auto mean = detail::with_errors(mean_metric(t), mean_metric_errors(t));
      detail::push_metric(res.rows, mname, gname, "mean", kinds, mean);
      per_metric["mean"].push_back(mean);

      const FitnessResult fit = fitness_metric(t, cfg.replicator);
      const auto fit_err = bootstrap_errors(
          t, [&](const MetagameTensor& s) { return fitness_metric(s, cfg.replicator).fitness; }, cfg.bootstrap);
      const auto fitness = detail::with_errors(fit.fitness, fit_err);
      detail::push_metric(res.rows, mname, gname, "fitness", kinds, fitness);
      per_metric["fitness"].push_back(fitness);
      res.exports["replicator__" + stem + ".csv"] = detail::trajectory_csv(kinds, fit);

      if (static_cast<int>(kinds.size()) <= kMaxRatedKinds) {
        const DeviationRatingResult dr = deviation_ratings(t);
        const auto rating_err = bootstrap_errors(
            t, [](const MetagameTensor& s) { return deviation_ratings(s).ratings; }, cfg.bootstrap);
        const auto rank_err = bootstrap_errors(
            t, [](const MetagameTensor& s) { return deviation_ratings(s).ranks; }, cfg.bootstrap);
        const auto ratings = detail::with_errors(dr.ratings, rating_err);
        const auto ranks = detail::with_errors(dr.ranks, rank_err);
        detail::push_metric(res.rows, mname, gname, "dr_rating", kinds, ratings);
        detail::push_metric(res.rows, mname, gname, "dr_rank", kinds, ranks);
        per_metric["dr_rating"].push_back(ratings);
        per_metric["dr_rank"].push_back(ranks);
        res.exports["dr__" + stem + ".csv"] = detail::tiers_csv(kinds, dr);
      }
    }
    if (cfg.games.size() > 1)
      for (const char* metric : {"mean", "fitness", "dr_rating", "dr_rank"}) {
        const auto it = per_metric.find(metric);
        if (it == per_metric.end() || it->second.size() != cfg.games.size()) continue;
        const std::vector<std::vector<std::string>> rosters(it->second.size(), kinds);
        detail::push_metric(aggregate_rows, mname, kAllGames, metric, kinds, aggregate_across_games(rosters, it->second));
      }
  }
  if (!any_log) throw ConfigError("no runs found in " + dir.string());
  res.rows.insert(res.rows.end(), aggregate_rows.begin(), aggregate_rows.end());

  std::string missing = "# schema=coopmech.missing/1\nmechanism,game,cell,episodes,expected\n";
  for (const auto& m : res.missing)
    missing += m.mechanism + "," + m.game + "," + m.cell + "," + std::to_string(m.have) + "," + std::to_string(m.want) +
               "\n";
  res.exports["missing.csv"] = missing;
  return res;
}

// Writes summary.csv and the per-metric exports into `dest`.
inline void write_analysis(const AnalysisResult& res, const fs::path& dest) {
  fs::create_directories(dest);
  std::ofstream(dest / "summary.csv", std::ios::binary) << summary_csv(res.rows);
  for (const auto& [name, text] : res.exports) std::ofstream(dest / name, std::ios::binary) << text;
}

}  // namespace coopmech
