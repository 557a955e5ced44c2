// Copyright 2026 The drbm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "drbm/linprog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace drbm {

namespace {

constexpr double kEps = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  // objective row is stored as the last row: reduced costs, -value in rhs slot
  double& cost(std::size_t c) { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Runs Bland's-rule simplex on the current objective row restricted to
  // columns < active_cols.  Returns status.
  LpStatus run(std::size_t active_cols, std::size_t& budget) {
    while (true) {
      std::size_t enter = active_cols;
      for (std::size_t c = 0; c < active_cols; ++c)
        if (cost(c) < -kEps) {
          enter = c;
          break;
        }
      if (enter == active_cols) return LpStatus::kOptimal;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kEps) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == rows_) return LpStatus::kUnbounded;
      if (budget-- == 0) return LpStatus::kIterationLimit;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

void LinearProgram::add(std::vector<double> coeffs, Sense sense, double b) {
  if (coeffs.size() != num_vars) throw std::invalid_argument("constraint has the wrong length");
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(b);
}

LpResult solve_lp(const LinearProgram& lp, std::size_t max_pivots) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.num_vars;

  // column layout: [x+ (n) | x- (free vars only) | slack/surplus | artificials]
  std::vector<std::size_t> neg_col(n, 0);
  std::size_t cols = n;
  for (std::size_t j = 0; j < n; ++j)
    if (!lp.nonnegative[j]) neg_col[j] = cols++;
  std::vector<std::size_t> slack_col(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (lp.senses[i] != Sense::kEqual) slack_col[i] = cols++;
  const std::size_t first_artificial = cols;
  cols += m;

  Tableau tab(m, cols);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = lp.rhs[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      tab.at(i, j) = sign * lp.rows[i][j];
      if (!lp.nonnegative[j]) tab.at(i, neg_col[j]) = -sign * lp.rows[i][j];
    }
    if (lp.senses[i] == Sense::kLessEqual) tab.at(i, slack_col[i]) = sign;
    if (lp.senses[i] == Sense::kGreaterEqual) tab.at(i, slack_col[i]) = -sign;
    tab.at(i, first_artificial + i) = 1.0;
    tab.rhs(i) = sign * lp.rhs[i];
    tab.basis()[i] = first_artificial + i;
  }

  // phase 1: minimise the sum of artificials
  for (std::size_t c = 0; c <= cols; ++c) {
    double s = 0.0;
    if (c < first_artificial || c == cols)
      for (std::size_t i = 0; i < m; ++i) s += tab.at(i, c);
    tab.cost(c) = c < first_artificial ? -s : (c == cols ? -s : 0.0);
  }
  std::size_t budget = max_pivots;
  LpResult result;
  LpStatus st = tab.run(cols, budget);
  if (st == LpStatus::kIterationLimit) {
    result.status = st;
    return result;
  }
  if (-tab.cost(cols) > 1e-7) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  // drive artificials out of the basis where possible
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < first_artificial) continue;
    for (std::size_t c = 0; c < first_artificial; ++c)
      if (std::abs(tab.at(i, c)) > kEps) {
        tab.pivot(i, c);
        break;
      }
  }

  // phase 2 on the original objective
  for (std::size_t c = 0; c <= cols; ++c) tab.cost(c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    tab.cost(j) = lp.objective[j];
    if (!lp.nonnegative[j]) tab.cost(neg_col[j]) = -lp.objective[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = tab.basis()[i];
    const double f = tab.cost(b);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) tab.cost(c) -= f * tab.at(i, c);
  }
  st = tab.run(first_artificial, budget);
  result.status = st;

  std::vector<double> values(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) values[tab.basis()[i]] = tab.rhs(i);
  result.x.assign(n, 0.0);
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    result.x[j] = values[j] - (lp.nonnegative[j] ? 0.0 : values[neg_col[j]]);
    obj += lp.objective[j] * result.x[j];
  }
  result.objective = obj;
  return result;
}

}  // namespace drbm
