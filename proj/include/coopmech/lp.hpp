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
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace coopmech {

enum class Sense { le, eq, ge };

struct LpRow {
  std::vector<double> coef;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

// minimize objective . x  subject to rows, x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  void add(std::vector<double> coef, Sense sense, double rhs) { rows.push_back({std::move(coef), sense, rhs}); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double value = 0.0;
};

namespace detail {

// Dense tableau simplex with Bland's rule (no cycling).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& cost(std::size_t c) { return at(m_, c); }  // reduced costs; at(m_, n_) is -objective

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Installs a cost row for `c` (over all columns) expressed in the
  // current basis.
  void set_costs(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= n_; ++j) at(m_, j) = j < n_ ? c[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double f = c[basis_[i]];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(m_, j) -= f * at(i, j);
    }
  }

  // Returns false when unbounded. Columns with allowed[c] == false never enter.
  bool optimize(const std::vector<bool>& allowed, double eps) {
    while (true) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (allowed[j] && cost(j) < -eps) {
          enter = j;
          break;
        }
      if (enter == n_) return true;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i)
        if (at(i, enter) > eps) best = std::min(best, rhs(i) / at(i, enter));
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i)
        if (at(i, enter) > eps && rhs(i) / at(i, enter) <= best + eps && (leave == m_ || basis_[i] < basis_[leave]))
          leave = i;
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Two-phase simplex. Intended for the small dense programs of the metrics
// module (a few hundred variables at most).
inline LpSolution solve_lp(const LinearProgram& lp, double eps = 1e-10) {
  const std::size_t nv = static_cast<std::size_t>(lp.num_vars);
  if (lp.objective.size() != nv) throw std::invalid_argument("solve_lp: objective size mismatch");
  std::vector<LpRow> rows = lp.rows;
  std::size_t slacks = 0, artificials = 0;
  for (auto& r : rows) {
    if (r.coef.size() != nv) throw std::invalid_argument("solve_lp: row size mismatch");
    if (r.rhs < 0) {
      for (double& a : r.coef) a = -a;
      r.rhs = -r.rhs;
      if (r.sense == Sense::le) r.sense = Sense::ge;
      else if (r.sense == Sense::ge) r.sense = Sense::le;
    }
    if (r.sense != Sense::eq) ++slacks;
    if (r.sense != Sense::le) ++artificials;
  }
  const std::size_t m = rows.size();
  const std::size_t ncols = nv + slacks + artificials;
  detail::Tableau tab(m, ncols);
  std::size_t s = nv, a = nv + slacks;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nv; ++j) tab.at(i, j) = rows[i].coef[j];
    tab.rhs(i) = rows[i].rhs;
    switch (rows[i].sense) {
      case Sense::le:
        tab.at(i, s) = 1.0;
        tab.basis()[i] = s++;
        break;
      case Sense::ge:
        tab.at(i, s++) = -1.0;
        tab.at(i, a) = 1.0;
        tab.basis()[i] = a++;
        break;
      case Sense::eq:
        tab.at(i, a) = 1.0;
        tab.basis()[i] = a++;
        break;
    }
  }
  const std::size_t first_art = nv + slacks;
  std::vector<bool> all(ncols, true);

  LpSolution sol;
  if (artificials > 0) {
    std::vector<double> phase1(ncols, 0.0);
    for (std::size_t j = first_art; j < ncols; ++j) phase1[j] = 1.0;
    tab.set_costs(phase1);
    tab.optimize(all, eps);
    if (-tab.at(m, ncols) > 1e-8) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j)
        if (std::fabs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
    }
  }
  std::vector<bool> allowed(ncols, false);
  for (std::size_t j = 0; j < first_art; ++j) allowed[j] = true;
  std::vector<double> cost(ncols, 0.0);
  for (std::size_t j = 0; j < nv; ++j) cost[j] = lp.objective[j];
  tab.set_costs(cost);
  if (!tab.optimize(allowed, eps)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  sol.status = LpStatus::optimal;
  sol.x.assign(nv, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis()[i] < nv) sol.x[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  sol.value = 0.0;
  for (std::size_t j = 0; j < nv; ++j) sol.value += lp.objective[j] * sol.x[j];
  return sol;
}

}  // namespace coopmech
