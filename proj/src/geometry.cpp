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

#include "drbm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "drbm/linprog.hpp"

namespace drbm {

namespace {

// Coefficient of value s of variable i in ⟨v, A_x⟩; zero for s = 0.
double coord(const StateSpace& space, const Eigen::VectorXd& v, std::size_t i, int s) {
  return s == 0 ? 0.0 : v(static_cast<Eigen::Index>(indicator_row(space, static_cast<int>(i), s)));
}

void check_length(const StateSpace& space, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != space.stat_dim())
    throw std::invalid_argument("vector length does not match the sufficient statistics");
}

Eigen::VectorXd statistics_column(const StateSpace& space, std::size_t x) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.stat_dim()));
  a(0) = 1.0;
  const State s = space.state(x);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0) a(static_cast<Eigen::Index>(indicator_row(space, static_cast<int>(i), s[i]))) = 1.0;
  return a;
}

std::vector<std::size_t> strides_of(const StateSpace& space) {
  std::vector<std::size_t> st(space.num_vars(), 1);
  for (std::size_t i = space.num_vars(); i-- > 1;) st[i - 1] = st[i] * static_cast<std::size_t>(space.card(i));
  return st;
}

}  // namespace

bool normal_cone_contains(const StateSpace& space, std::size_t x, const Eigen::VectorXd& v,
                          bool strict) {
  check_length(space, v);
  const double m = cone_margin(space, x, v);
  return strict ? m > 0.0 : m >= 0.0;
}

double cone_margin(const StateSpace& space, std::size_t x, const Eigen::VectorXd& v) {
  check_length(space, v);
  const State s = space.state(x);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double own = coord(space, v, i, s[i]);
    for (int t = 0; t < space.card(i); ++t)
      if (t != s[i]) margin = std::min(margin, own - coord(space, v, i, t));
  }
  return margin;
}

std::vector<std::size_t> maximizing_states(const StateSpace& space, const Eigen::VectorXd& v) {
  check_length(space, v);
  const std::size_t n = space.num_vars();
  std::vector<std::vector<int>> best(n);
  for (std::size_t i = 0; i < n; ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < space.card(i); ++t) top = std::max(top, coord(space, v, i, t));
    const double tol = kExactTol * std::max(1.0, std::abs(top));
    for (int t = 0; t < space.card(i); ++t)
      if (coord(space, v, i, t) >= top - tol) best[i].push_back(t);
  }
  std::vector<std::size_t> out;
  State s(n, 0);
  std::vector<std::size_t> pos(n, 0);
  for (std::size_t i = 0; i < n; ++i) s[i] = best[i][0];
  while (true) {
    out.push_back(space.index(s));
    std::size_t i = n;
    while (i-- > 0) {
      if (++pos[i] < best[i].size()) {
        s[i] = best[i][pos[i]];
        break;
      }
      pos[i] = 0;
      s[i] = best[i][0];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::vector<std::vector<std::size_t>> Slicing::cells() const {
  std::vector<std::vector<std::size_t>> out(num_cells());
  for (std::size_t x = 0; x < cell.size(); ++x) out[cell[x]].push_back(x);
  return out;
}

Eigen::MatrixXd single_unit_theta(const Eigen::MatrixXd& scores) {
  const Eigen::Index k = scores.rows();
  Eigen::MatrixXd theta(k, scores.cols());
  if (k == 0) return theta;
  theta.row(0) = scores.row(0);
  for (Eigen::Index y = 1; y < k; ++y) theta.row(k - y) = scores.row(y) - scores.row(0);
  return theta;
}

std::optional<Slicing> slicing_from_map(const StateSpace& visible, const StateSpace& hidden,
                                        const Eigen::MatrixXd& theta) {
  if (static_cast<std::size_t>(theta.rows()) != hidden.stat_dim() ||
      static_cast<std::size_t>(theta.cols()) != visible.stat_dim())
    throw std::invalid_argument("slicing map has the wrong shape");
  Slicing s{visible, hidden, theta, std::vector<std::size_t>(visible.size())};
  for (std::size_t x = 0; x < visible.size(); ++x) {
    const Eigen::VectorXd v = theta * statistics_column(visible, x);
    const auto top = maximizing_states(hidden, v);
    if (top.size() != 1) return std::nullopt;
    const double margin = cone_margin(hidden, top[0], v);
    if (!(margin > 0.0) || margin < kGenericityMargin * v.norm()) return std::nullopt;
    s.cell[x] = top[0];
  }
  return s;
}

std::vector<std::size_t> inference_function(const DiscreteRBM& rbm, std::size_t x) {
  return maximizing_states(rbm.hidden(), rbm.project_visible(x));
}

std::size_t inference_state(const DiscreteRBM& rbm, std::size_t x) {
  return inference_function(rbm, x).front();
}

ParallelSlicing parallel_slicing(const StateSpace& space, std::size_t k,
                                 const Eigen::VectorXd& direction,
                                 const std::vector<double>& thresholds) {
  check_length(space, direction);
  if (k < 1 || thresholds.size() + 1 != k)
    throw std::invalid_argument("parallel_slicing needs k - 1 thresholds");
  if (direction.isZero(0.0)) throw std::invalid_argument("direction must be nonzero");
  for (std::size_t l = 1; l < thresholds.size(); ++l)
    if (!(thresholds[l] > thresholds[l - 1])) throw std::invalid_argument("thresholds must increase strictly");

  const StateSpace hidden(std::vector<int>{static_cast<int>(k)});
  ParallelSlicing out;
  out.r.resize(static_cast<Eigen::Index>(k));
  out.b.resize(static_cast<Eigen::Index>(k));
  const double t1 = thresholds.empty() ? 0.0 : thresholds[0];
  out.b(0) = 0.0;
  for (std::size_t y = 0; y < k; ++y) {
    out.r(static_cast<Eigen::Index>(y)) = static_cast<double>(y);
    if (y > 0) out.b(static_cast<Eigen::Index>(y)) = out.b(static_cast<Eigen::Index>(y - 1)) + thresholds[y - 1] - t1 + 1.0;
  }
  // score_y(x) = λ(x) r_y - b_y, written as a linear functional of A_x
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                static_cast<Eigen::Index>(space.stat_dim()));
  for (std::size_t y = 1; y < k; ++y) {
    const double ry = out.r(static_cast<Eigen::Index>(y));
    theta.row(static_cast<Eigen::Index>(y)) = ry * direction.transpose();
    theta(static_cast<Eigen::Index>(y), 0) += ry * (1.0 - t1) - out.b(static_cast<Eigen::Index>(y));
  }
  out.lambda.resize(static_cast<Eigen::Index>(space.size()));
  out.slicing = Slicing{space, hidden, single_unit_theta(theta), std::vector<std::size_t>(space.size())};
  for (std::size_t x = 0; x < space.size(); ++x) {
    const double z = direction.dot(statistics_column(space, x));
    std::size_t c = 0;
    for (double t : thresholds) {
      const double gap = std::abs(z - t);
      if (gap <= kGenericityMargin * std::max(1.0, std::abs(t)))
        throw NonGenericSlicing("state lies on a slicing hyperplane", x);
      if (z > t) ++c;
    }
    out.slicing.cell[x] = c;
    out.lambda(static_cast<Eigen::Index>(x)) = z - t1 + 1.0;
  }
  return out;
}

std::vector<std::pair<double, double>> slicing_intervals(const Eigen::VectorXd& r,
                                                         const Eigen::VectorXd& b) {
  if (r.size() != b.size()) throw std::invalid_argument("r and b must have equal length");
  const Eigen::Index k = r.size();
  for (Eigen::Index y = 1; y < k; ++y)
    if (!(r(y) > r(y - 1))) throw std::invalid_argument("r must increase strictly");
  std::vector<std::pair<double, double>> out;
  for (Eigen::Index y = 0; y < k; ++y) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index z = 0; z < k; ++z) {
      if (z < y) lo = std::max(lo, (b(y) - b(z)) / (r(y) - r(z)));
      if (z > y) hi = std::min(hi, (b(z) - b(y)) / (r(z) - r(y)));
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

std::optional<Eigen::MatrixXd> realize_partition(const StateSpace& visible, std::size_t k,
                                                 const std::vector<std::size_t>& cell) {
  if (cell.size() != visible.size()) throw std::invalid_argument("assignment length mismatch");
  const std::size_t d = visible.stat_dim();
  if (k <= 1) return Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  LinearProgram lp((k - 1) * d);
  for (std::size_t x = 0; x < visible.size(); ++x) {
    if (cell[x] >= k) throw std::invalid_argument("cell label out of range");
    const Eigen::VectorXd a = statistics_column(visible, x);
    for (std::size_t h = 0; h < k; ++h) {
      if (h == cell[x]) continue;
      std::vector<double> row(lp.num_vars, 0.0);
      for (std::size_t c = 0; c < d; ++c) {
        if (cell[x] > 0) row[(cell[x] - 1) * d + c] += a(static_cast<Eigen::Index>(c));
        if (h > 0) row[(h - 1) * d + c] -= a(static_cast<Eigen::Index>(c));
      }
      lp.add(std::move(row), Sense::kGreaterEqual, 1.0);
    }
  }
  const LpResult res = solve_lp(lp);
  if (!res.feasible()) return std::nullopt;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t h = 1; h < k; ++h)
    for (std::size_t c = 0; c < d; ++c)
      w(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(c)) = res.x[(h - 1) * d + c];
  return single_unit_theta(w);
}

std::vector<Slicing> enumerate_slicings(const StateSpace& space, std::size_t hidden_card,
                                        std::size_t budget, std::uint64_t seed) {
  std::vector<Slicing> out;
  if (budget == 0 || hidden_card == 0) return out;
  const StateSpace hidden(std::vector<int>{static_cast<int>(hidden_card)});
  const auto d = static_cast<Eigen::Index>(space.stat_dim());
  const auto k = static_cast<Eigen::Index>(hidden_card);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::set<std::vector<std::size_t>> seen;
  auto keep = [&](Slicing s) {
    if (seen.insert(s.cell).second) out.push_back(std::move(s));
  };
  for (std::size_t trial = 0; trial < budget; ++trial) {
    if (trial % 2 == 0 || hidden_card == 1) {
      Eigen::MatrixXd theta(k, d);
      for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < d; ++c) theta(r, c) = r == 0 ? 0.0 : gauss(rng);
      if (auto s = slicing_from_map(space, hidden, theta)) keep(std::move(*s));
      continue;
    }
    Eigen::VectorXd u(d);
    for (Eigen::Index c = 0; c < d; ++c) u(c) = gauss(rng);
    std::vector<double> z(space.size());
    for (std::size_t x = 0; x < space.size(); ++x) z[x] = u.dot(statistics_column(space, x));
    std::sort(z.begin(), z.end());
    std::vector<double> gaps;
    for (std::size_t i = 1; i < z.size(); ++i)
      if (z[i] - z[i - 1] > 1e-6 * std::max(1.0, std::abs(z[i]))) gaps.push_back(0.5 * (z[i] + z[i - 1]));
    if (gaps.size() + 1 < hidden_card) continue;
    std::shuffle(gaps.begin(), gaps.end(), rng);
    gaps.resize(hidden_card - 1);
    std::sort(gaps.begin(), gaps.end());
    try {
      keep(parallel_slicing(space, hidden_card, u, gaps).slicing);
    } catch (const NonGenericSlicing&) {
    }
  }
  return out;
}

std::vector<std::size_t> strong_modes(const Distribution& p) {
  const StateSpace& space = p.space();
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < space.size(); ++x) {
    State s = space.state(x);
    double neighbours = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int orig = s[i];
      for (int v = 0; v < space.card(i); ++v) {
        if (v == orig) continue;
        s[i] = v;
        neighbours += p[space.index(s)];
      }
      s[i] = orig;
    }
    if (p[x] > neighbours) out.push_back(x);
  }
  return out;
}

std::vector<std::size_t> strong_modes_by_line_sums(const Distribution& p) {
  const StateSpace& space = p.space();
  const std::size_t n = space.num_vars();
  const auto stride = strides_of(space);
  // line[i][x] = sum of p over the states agreeing with x off variable i
  std::vector<std::vector<double>> line(n, std::vector<double>(space.size(), 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(space.card(i));
    for (std::size_t x = 0; x < space.size(); ++x) {
      if ((x / stride[i]) % r != 0) continue;
      double s = 0.0;
      for (std::size_t v = 0; v < r; ++v) s += p[x + v * stride[i]];
      for (std::size_t v = 0; v < r; ++v) line[i][x + v * stride[i]] = s;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < space.size(); ++x) {
    double neighbours = 0.0;
    for (std::size_t i = 0; i < n; ++i) neighbours += line[i][x] - p[x];
    if (p[x] > neighbours) out.push_back(x);
  }
  return out;
}

namespace {

std::optional<Eigen::MatrixXd> solve_mode_lp(const SufficientStatistics& vis,
                                             const SufficientStatistics& hid,
                                             const std::vector<std::size_t>& assignment) {
  const StateSpace& vs = vis.space();
  const std::size_t dx = vis.rows(), dy = hid.rows();
  LinearProgram lp(dx * dy);
  auto var = [&](std::size_t r, std::size_t c) { return r * dx + c; };
  for (std::size_t y = 0; y < hid.cols(); ++y) {
    const std::size_t w = assignment[y];
    const State ws = vs.state(w);
    // ⟨Θ^T a_y, a_w⟩ = 0
    std::vector<double> eq(lp.num_vars, 0.0);
    for (std::size_t r = 0; r < dy; ++r) {
      if (!hid.at(r, y)) continue;
      for (std::size_t c = 0; c < dx; ++c)
        if (vis.at(c, w)) eq[var(r, c)] += 1.0;
    }
    lp.add(std::move(eq), Sense::kEqual, 0.0);
    // w is the strict maximiser with margin one
    for (std::size_t i = 0; i < ws.size(); ++i)
      for (int v = 0; v < vs.card(i); ++v) {
        if (v == ws[i]) continue;
        std::vector<double> row(lp.num_vars, 0.0);
        for (std::size_t r = 0; r < dy; ++r) {
          if (!hid.at(r, y)) continue;
          if (ws[i] != 0) row[var(r, vis.row_of(static_cast<int>(i), ws[i]))] += 1.0;
          if (v != 0) row[var(r, vis.row_of(static_cast<int>(i), v))] -= 1.0;
        }
        lp.add(std::move(row), Sense::kGreaterEqual, 1.0);
      }
  }
  const LpResult res = solve_lp(lp);
  if (!res.feasible()) return std::nullopt;
  Eigen::MatrixXd theta(static_cast<Eigen::Index>(dy), static_cast<Eigen::Index>(dx));
  for (std::size_t r = 0; r < dy; ++r)
    for (std::size_t c = 0; c < dx; ++c)
      theta(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = res.x[var(r, c)];
  return theta;
}

}  // namespace

std::optional<ModeCertificate> strong_mode_certificate(const StateSpace& visible,
                                                       const StateSpace& hidden, const Code& code,
                                                       std::size_t restarts, std::uint64_t seed) {
  if (!(code.space() == visible)) throw std::invalid_argument("code lives on a different space");
  if (code.min_distance() && *code.min_distance() < 2)
    throw std::invalid_argument("strong-mode certificates need minimum distance at least two");
  const std::vector<std::size_t>& words = code.words();
  const std::size_t ny = hidden.size();
  if (ny < words.size()) return std::nullopt;
  const SufficientStatistics vis(visible), hid(hidden);
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> assignment(ny);
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(restarts, 1); ++attempt) {
    if (attempt == 0) {
      for (std::size_t y = 0; y < ny; ++y) assignment[y] = words[y % words.size()];
    } else {
      std::vector<std::size_t> ys(ny);
      for (std::size_t y = 0; y < ny; ++y) ys[y] = y;
      std::shuffle(ys.begin(), ys.end(), rng);
      std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
      for (std::size_t t = 0; t < ny; ++t) assignment[ys[t]] = t < words.size() ? words[t] : words[pick(rng)];
    }
    const auto theta = solve_mode_lp(vis, hid, assignment);
    if (!theta) continue;
    for (int doubling = 0; doubling < 40; ++doubling) {
      const double scale = std::ldexp(1.0, doubling);
      const DiscreteRBM rbm(visible, hidden, ThetaMatrix(scale * *theta));
      const auto modes = strong_modes(rbm_marginal_factorized(rbm));
      if (modes == words) {
        ModeCertificate cert{rbm.theta(), ThetaMatrix(*theta), scale, assignment, modes};
        return cert;
      }
    }
  }
  return std::nullopt;
}

bool hidden_vertices_cover(const DiscreteRBM& rbm, const std::vector<std::size_t>& modes) {
  for (std::size_t x : modes) {
    bool found = false;
    for (std::size_t y = 0; y < rbm.hidden().size() && !found; ++y)
      found = normal_cone_contains(rbm.visible(), x, rbm.project_hidden(y), true);
    if (!found) return false;
  }
  return true;
}

}  // namespace drbm
