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

#include "drbm/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "drbm/coding.hpp"

namespace drbm {

namespace {

std::size_t checked_product(std::size_t a, std::size_t b, std::size_t cap) {
  if (a != 0 && b > cap / a) throw InstanceTooLarge("joint state space exceeds the exact cap");
  const std::size_t p = a * b;
  if (p > cap) throw InstanceTooLarge("joint state space exceeds the exact cap");
  return p;
}

std::size_t model_expected_dimension(const StateSpace& visible, const StateSpace& hidden) {
  return std::min(visible.stat_dim() * hidden.stat_dim() - 1, visible.size() - 1);
}

Slicing single_cell(const StateSpace& space, std::size_t k) {
  const StateSpace hidden(std::vector<int>{static_cast<int>(k)});
  Slicing s{space, hidden,
            Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(space.stat_dim())),
            std::vector<std::size_t>(space.size(), 0)};
  for (std::size_t y = 1; y < k; ++y) s.theta(static_cast<Eigen::Index>(y), 0) = -1.0;
  s.theta = single_unit_theta(s.theta);
  return s;
}

class RankSearch {
 public:
  RankSearch(const StateSpace& visible, const StateSpace& hidden, std::size_t upper)
      : visible_(visible), hidden_(hidden), upper_(upper) {}

  // Returns true when the candidate improved the incumbent.
  bool offer(std::vector<Slicing> slicings, const std::string& family) {
    ++candidates_;
    const TropicalBlockMatrix a = tropical_matrix(visible_, slicings);
    if (!best_.empty() && rank_mod_prime(a.matrix) <= rank_) return false;
    const std::size_t r = exact_rank(a.matrix);
    if (!best_.empty() && r <= rank_) return false;
    std::vector<std::int64_t> ones(visible_.size(), 1);
    if (!in_column_span(a.matrix, ones)) throw std::logic_error("constant functions missing from the column span");
    rank_ = r;
    best_ = std::move(slicings);
    family_ = family;
    return true;
  }

  bool done() const { return !best_.empty() && rank_ >= upper_ + 1; }

  TropicalDimension result(bool exhaustive) const {
    TropicalDimension out;
    out.rank = rank_;
    out.value = rank_ == 0 ? 0 : rank_ - 1;
    out.upper_bound = upper_;
    out.exact = exhaustive || out.value == upper_;
    out.family = family_;
    out.slicings = best_;
    out.candidates = candidates_;
    return out;
  }

  std::size_t rank() const { return rank_; }
  void count() { ++candidates_; }
  void set(std::size_t rank, std::vector<Slicing> s, const std::string& family) {
    rank_ = rank;
    best_ = std::move(s);
    family_ = family;
  }

 private:
  const StateSpace& visible_;
  const StateSpace& hidden_;
  std::size_t upper_;
  std::size_t rank_ = 0;
  std::vector<Slicing> best_;
  std::string family_;
  std::size_t candidates_ = 0;
};

}  // namespace

HomogeneousStatistics homogeneous_statistics(const StateSpace& visible, const StateSpace& hidden,
                                             std::size_t cap) {
  const std::size_t nx = visible.size(), ny = hidden.size();
  const std::size_t cols = checked_product(nx, ny, cap);
  HomogeneousStatistics out{visible, hidden, {}, {}};
  for (std::size_t i = 0; i < visible.num_vars(); ++i)
    for (std::size_t j = 0; j < hidden.num_vars(); ++j)
      for (int x = 0; x < visible.card(i); ++x)
        for (int h = 0; h < hidden.card(j); ++h) out.rows.push_back({i, j, x, h});
  out.matrix = IntMatrix(out.rows.size(), cols);
  std::vector<State> vs(nx), hs(ny);
  for (std::size_t x = 0; x < nx; ++x) vs[x] = visible.state(x);
  for (std::size_t y = 0; y < ny; ++y) hs[y] = hidden.state(y);
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    const auto& row = out.rows[r];
    for (std::size_t x = 0; x < nx; ++x) {
      if (vs[x][row.visible_var] != row.x) continue;
      for (std::size_t y = 0; y < ny; ++y)
        if (hs[y][row.hidden_var] == row.h) out.matrix(r, x * ny + y) = 1;
    }
  }
  return out;
}

IntMatrix joint_statistics_matrix(const StateSpace& visible, const StateSpace& hidden, std::size_t cap) {
  const SufficientStatistics sv(visible), sh(hidden);
  const JointStatistics joint(sv, sh, cap);
  IntMatrix m(joint.rows(), joint.cols());
  for (std::size_t r = 0; r < joint.rows(); ++r)
    for (std::size_t c = 0; c < joint.cols(); ++c) m(r, c) = joint.at(r, c);
  return m;
}

double tropical_value(const DiscreteRBM& rbm, std::size_t v) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < rbm.hidden().size(); ++y) best = std::max(best, rbm.energy(v, y));
  return best;
}

double tropical_value_decomposed(const DiscreteRBM& rbm, std::size_t v) {
  const Eigen::VectorXd u = rbm.project_visible(v);
  const StateSpace& h = rbm.hidden();
  double total = u(0);
  for (std::size_t j = 0; j < h.num_vars(); ++j) {
    double best = 0.0;
    for (int s = 1; s < h.card(j); ++s)
      best = std::max(best, u(static_cast<Eigen::Index>(indicator_row(h, static_cast<int>(j), s))));
    total += best;
  }
  return total;
}

double tropical_block_value(const StateSpace& visible, const std::vector<Eigen::MatrixXd>& params,
                            std::size_t v) {
  const SufficientStatistics stats(visible);
  const Eigen::VectorXd a = stats.column(v);
  double total = 0.0;
  for (const auto& p : params) {
    if (static_cast<std::size_t>(p.cols()) != visible.stat_dim())
      throw std::invalid_argument("unit parameters must have d_X columns");
    total += (p * a).maxCoeff();
  }
  return total;
}

TropicalBlockMatrix tropical_matrix(const StateSpace& visible, const std::vector<Slicing>& slicings) {
  const std::size_t d = visible.stat_dim();
  TropicalBlockMatrix out;
  out.block_width = d;
  std::size_t cols = 0;
  for (const auto& s : slicings) {
    if (!(s.visible == visible) || s.cell.size() != visible.size())
      throw std::invalid_argument("slicing does not match the visible space");
    out.unit_offset.push_back(cols);
    cols += s.num_cells() * d;
  }
  const SufficientStatistics stats(visible);
  out.matrix = IntMatrix(visible.size(), cols);
  for (std::size_t j = 0; j < slicings.size(); ++j) {
    const auto& s = slicings[j];
    for (std::size_t x = 0; x < visible.size(); ++x) {
      if (s.cell[x] >= s.num_cells()) throw std::invalid_argument("cell label out of range");
      const std::size_t base = out.unit_offset[j] + s.cell[x] * d;
      for (std::size_t c = 0; c < d; ++c) out.matrix(x, base + c) = stats.at(c, x);
    }
  }
  return out;
}

std::optional<Slicing> ball_slicing(const StateSpace& space, std::size_t center, int radius) {
  const int n = static_cast<int>(space.num_vars());
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  if (radius > n || n == 0) return std::nullopt;
  const State c = space.state(center);
  // ⟨u, A_x⟩ = d_H(x, center)
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.stat_dim()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) {
      for (int v = 1; v < space.card(i); ++v)
        u(static_cast<Eigen::Index>(indicator_row(space, static_cast<int>(i), v))) = 1.0;
    } else {
      u(0) += 1.0;
      u(static_cast<Eigen::Index>(indicator_row(space, static_cast<int>(i), c[i]))) = -1.0;
    }
  }
  const std::size_t inner = static_cast<std::size_t>((radius + 2) / 2);
  std::vector<double> thresholds;
  for (std::size_t l = 0; l < inner; ++l)
    thresholds.push_back(std::min(2 * static_cast<int>(l) + 1, radius) + 0.5);
  return parallel_slicing(space, inner + 1, u, thresholds).slicing;
}

std::optional<std::vector<Slicing>> ball_slicing_certificate(const StateSpace& space,
                                                             const std::vector<std::size_t>& centers,
                                                             const std::vector<int>& radii) {
  if (centers.size() != radii.size()) throw std::invalid_argument("one radius per center");
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      if (hamming_distance(space, centers[a], centers[b]) <= radii[a] + radii[b])
        throw std::invalid_argument("balls overlap");
  std::vector<Slicing> out;
  for (std::size_t a = 0; a < centers.size(); ++a) {
    auto s = ball_slicing(space, centers[a], radii[a]);
    if (!s) return std::nullopt;
    out.push_back(std::move(*s));
  }
  return out;
}

Slicing widen_slicing(const Slicing& s, std::size_t k) {
  if (k < s.num_cells()) throw std::invalid_argument("cannot narrow a slicing");
  if (k == s.num_cells()) return s;
  const SufficientStatistics stats(s.visible);
  double top = 0.0;
  for (std::size_t x = 0; x < s.visible.size(); ++x)
    top = std::max(top, (s.theta * stats.column(x)).cwiseAbs().maxCoeff());
  if (s.hidden.num_vars() != 1) throw std::invalid_argument("widen_slicing needs a single hidden unit");
  const Eigen::Index old_k = s.theta.rows();
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), s.theta.cols());
  scores.row(0) = s.theta.row(0);
  for (Eigen::Index y = 1; y < old_k; ++y) scores.row(y) = s.theta.row(0) + s.theta.row(old_k - y);
  for (auto y = old_k; y < scores.rows(); ++y) scores(y, 0) = -(3.0 * top + 1.0);
  return Slicing{s.visible, StateSpace(std::vector<int>{static_cast<int>(k)}), single_unit_theta(scores),
                 s.cell};
}

TropicalDimension tropical_dimension(const StateSpace& visible, const StateSpace& hidden,
                                     std::size_t budget, std::uint64_t seed) {
  if (visible.size() > kExactCap) throw InstanceTooLarge("visible space exceeds the exact cap");
  const std::size_t upper = model_expected_dimension(visible, hidden);
  const std::size_t m = hidden.num_vars();
  RankSearch search(visible, hidden, upper);

  // units with a single state slice nothing
  auto fill_unit = [&](std::size_t j, std::optional<Slicing> s) {
    const auto k = static_cast<std::size_t>(hidden.card(j));
    if (!s) return single_cell(visible, k);
    return widen_slicing(*s, k);
  };

  // structured: disjoint balls of radii 2(s_j - 1) - 1, shrinking on failure
  {
    int top = 0;
    for (std::size_t j = 0; j < m; ++j) top = std::max(top, 2 * hidden.card(j) - 3);
    for (int shrink = 0; shrink <= top && !search.done(); ++shrink) {
      std::vector<std::size_t> units;
      std::vector<int> radii;
      for (std::size_t j = 0; j < m; ++j) {
        const int r = 2 * hidden.card(j) - 3 - shrink;
        if (hidden.card(j) >= 2 && r >= 0) {
          units.push_back(j);
          radii.push_back(r);
        }
      }
      if (units.empty()) break;
      std::vector<std::size_t> order(units.size());
      for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });
      std::vector<int> sorted;
      for (std::size_t t : order) sorted.push_back(radii[t]);
      const auto packing = ball_packing(visible, sorted, SearchBudget{200'000});
      if (!packing) continue;
      std::vector<std::optional<Slicing>> per(m);
      for (std::size_t t = 0; t < order.size(); ++t) {
        const std::size_t j = units[order[t]];
        auto s = ball_slicing(visible, packing->centers[t], sorted[t]);
        if (s && s->num_cells() <= static_cast<std::size_t>(hidden.card(j))) per[j] = std::move(s);
      }
      std::vector<Slicing> cand;
      for (std::size_t j = 0; j < m; ++j) cand.push_back(fill_unit(j, per[j]));
      search.offer(std::move(cand), shrink == 0 ? "ball-packing" : "ball-packing-reduced");
      if (shrink == 0 && packing->complement_full_rank) break;
    }
  }

  // structured: radius-one balls around a covering code
  if (!search.done() && visible.size() <= 4096 && m > 0) {
    const auto cover = min_covering_size(visible, 1, SearchBudget{200'000});
    if (!cover.witness.empty()) {
      std::vector<Slicing> cand;
      for (std::size_t j = 0; j < m; ++j) {
        std::optional<Slicing> s;
        if (j < cover.witness.size() && hidden.card(j) >= 2) s = ball_slicing(visible, cover.witness[j], 1);
        cand.push_back(fill_unit(j, std::move(s)));
      }
      search.offer(std::move(cand), "covering");
    }
  }

  // exhaustive: one binary hidden unit on a small space
  bool exhaustive = false;
  if (!search.done() && m == 1 && hidden.card(0) == 2 && visible.size() <= 16) {
    const std::size_t nx = visible.size();
    std::vector<std::size_t> cell(nx, 0);
    std::vector<std::size_t> in0, in1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (nx - 1)) && !search.done(); ++mask) {
      in0.clear();
      in1.clear();
      for (std::size_t x = 0; x < nx; ++x) {
        cell[x] = x == 0 ? 0 : (mask >> (x - 1)) & 1;
        (cell[x] ? in1 : in0).push_back(x);
      }
      search.count();
      const std::size_t r = statistics_rank(visible, in0) + statistics_rank(visible, in1);
      if (r <= search.rank()) continue;
      const auto w = realize_partition(visible, 2, cell);
      if (!w) continue;
      Slicing s{visible, hidden, *w, cell};
      search.set(r, {s}, "exhaustive");
    }
    exhaustive = true;
  }

  // random generic maps and parallel sweeps
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(visible.stat_dim());
  for (std::size_t trial = 0; trial < budget && !search.done() && !exhaustive; ++trial) {
    const bool parallel = trial % 2 == 1;
    std::vector<Slicing> cand;
    for (std::size_t j = 0; j < m; ++j) {
      const auto k = static_cast<std::size_t>(hidden.card(j));
      const StateSpace unit(std::vector<int>{static_cast<int>(k)});
      std::optional<Slicing> s;
      for (int attempt = 0; attempt < 8 && !s; ++attempt) {
        if (!parallel || k == 1) {
          Eigen::MatrixXd theta(static_cast<Eigen::Index>(k), d);
          for (Eigen::Index r = 0; r < theta.rows(); ++r)
            for (Eigen::Index c = 0; c < d; ++c) theta(r, c) = r == 0 ? 0.0 : gauss(rng);
          s = slicing_from_map(visible, unit, theta);
        } else {
          auto many = enumerate_slicings(visible, k, 2, rng());
          for (auto& e : many)
            if (e.theta.rows() == static_cast<Eigen::Index>(k)) s = std::move(e);
        }
      }
      cand.push_back(s ? std::move(*s) : single_cell(visible, k));
    }
    search.offer(std::move(cand), parallel ? "random-parallel" : "random-map");
  }
  return search.result(exhaustive);
}

}  // namespace drbm
