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

#include "drbm/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "drbm/coding.hpp"

namespace drbm {

double kl_divergence(const Distribution& q, const Distribution& p) {
  if (!(q.space() == p.space())) throw std::invalid_argument("distributions live on different spaces");
  double d = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] <= 0.0) continue;
    if (p[x] <= 0.0) return std::numeric_limits<double>::infinity();
    d += q[x] * std::log(q[x] / p[x]);
  }
  return std::max(d, 0.0);
}

PartitionModel::PartitionModel(StateSpace space, std::vector<std::size_t> fixed)
    : space_(std::move(space)), fixed_(std::move(fixed)) {
  std::sort(fixed_.begin(), fixed_.end());
  fixed_.erase(std::unique(fixed_.begin(), fixed_.end()), fixed_.end());
  for (std::size_t i : fixed_) {
    if (i >= space_.num_vars()) throw std::out_of_range("fixed variable out of range");
    num_blocks_ *= static_cast<std::size_t>(space_.card(i));
  }
}

std::size_t PartitionModel::block_of(std::size_t x) const {
  const State s = space_.state(x);
  std::size_t b = 0;
  for (std::size_t i : fixed_) b = b * static_cast<std::size_t>(space_.card(i)) + static_cast<std::size_t>(s[i]);
  return b;
}

Distribution project_to_partition(const Distribution& p, const PartitionModel& model) {
  if (!(p.space() == model.space())) throw std::invalid_argument("partition model on a different space");
  std::vector<double> mass(model.num_blocks(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) mass[model.block_of(x)] += p[x];
  std::vector<double> out(p.size());
  const auto size = static_cast<double>(model.block_size());
  for (std::size_t x = 0; x < p.size(); ++x) out[x] = mass[model.block_of(x)] / size;
  return Distribution(p.space(), std::move(out));
}

std::size_t hidden_dim(const StateSpace& hidden) { return hidden.stat_dim(); }

KlBound kl_upper_bound(const StateSpace& visible, const StateSpace& hidden) {
  const std::size_t n = visible.num_vars();
  if (n > 20) throw std::invalid_argument("kl_upper_bound enumerates subsets of at most 20 variables");
  const double dy = static_cast<double>(hidden_dim(hidden));
  KlBound best;
  best.bound = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double outside = 1.0, inside = 1.0, top = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = visible.card(i);
      if (mask >> i & 1) {
        inside *= r;
        top = std::max(top, r);
      } else {
        outside *= r;
      }
    }
    if (outside > dy) continue;
    const double b = std::log(inside / top);
    if (b < best.bound - 1e-15) {
      best.bound = b;
      best_mask = mask;
    }
  }
  std::size_t arg = n;
  for (std::size_t i = 0; i < n; ++i)
    if (best_mask >> i & 1) {
      best.lambda.push_back(i);
      if (arg == n || visible.card(i) > visible.card(arg)) arg = i;
    }
  for (std::size_t i = 0; i < n; ++i)
    if (!(best_mask >> i & 1) || i == arg) best.fixed.push_back(i);
  best.bound = std::max(best.bound, 0.0);
  best.universal = best.bound == 0.0;
  return best;
}

std::string to_string(Universality u) {
  switch (u) {
    case Universality::kUniversal:
      return "universal";
    case Universality::kNotUniversal:
      return "not-universal";
    case Universality::kUnknown:
      break;
  }
  return "unknown";
}

UniversalityVerdict universality_verdict(const StateSpace& visible, const StateSpace& hidden) {
  UniversalityVerdict v;
  v.d_y = hidden_dim(hidden);
  v.code_size = distance_two_code_size(visible);
  std::size_t top = 1;
  for (int r : visible.cards()) top = std::max(top, static_cast<std::size_t>(r));
  if (v.d_y * top >= visible.size()) {
    v.verdict = Universality::kUniversal;
    v.reason = "d_Y = " + std::to_string(v.d_y) + " >= |X|/max|X_i| = " + std::to_string(visible.size() / top);
  } else if (hidden.size() < v.code_size) {
    v.verdict = Universality::kNotUniversal;
    v.reason = "|Y| = " + std::to_string(hidden.size()) + " < A(X,2) = " + std::to_string(v.code_size);
  } else {
    v.verdict = Universality::kUnknown;
    v.reason = "d_Y < |X|/max|X_i| and |Y| >= A(X,2)";
  }
  if (v.verdict == Universality::kUniversal && hidden.size() < v.code_size)
    throw std::logic_error("universality verdict contradicts the strong-mode count");
  return v;
}

namespace {

// Loss and gradient of θ -> D(q || p_θ) on a fixed shape.
class Objective {
 public:
  Objective(const Distribution& target, const StateSpace& hidden)
      : q_(target), hidden_(hidden), vis_(target.space()), a_(vis_.dense().transpose()) {
    dx_ = static_cast<Eigen::Index>(vis_.rows());
    dy_ = static_cast<Eigen::Index>(hidden.stat_dim());
    entropy_ = 0.0;
    for (std::size_t x = 0; x < q_.size(); ++x)
      if (q_[x] > 0.0) entropy_ += q_[x] * std::log(q_[x]);
    for (std::size_t j = 0; j < hidden.num_vars(); ++j) {
      std::vector<Eigen::Index> rows;
      for (int s = 1; s < hidden.card(j); ++s)
        rows.push_back(static_cast<Eigen::Index>(indicator_row(hidden, static_cast<int>(j), s)));
      unit_rows_.push_back(std::move(rows));
    }
  }

  Eigen::Index size() const { return dx_ * dy_; }

  double operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
    const Eigen::Map<const Eigen::MatrixXd> t(theta.data(), dy_, dx_);
    const Eigen::MatrixXd v = a_ * t.transpose();  // |X| x d_Y
    const Eigen::Index nx = v.rows();
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(nx, dy_);
    Eigen::VectorXd logp(nx);
    for (Eigen::Index x = 0; x < nx; ++x) {
      double l = v(x, 0);
      mu(x, 0) = 1.0;
      for (const auto& rows : unit_rows_) {
        double top = 0.0;
        for (auto r : rows) top = std::max(top, v(x, r));
        double s = std::exp(-top);
        for (auto r : rows) s += std::exp(v(x, r) - top);
        const double lse = top + std::log(s);
        l += lse;
        for (auto r : rows) mu(x, r) = std::exp(v(x, r) - lse);
      }
      logp(x) = l;
    }
    const double top = logp.maxCoeff();
    const double lz = top + std::log((logp.array() - top).exp().sum());
    Eigen::VectorXd w(nx);
    double cross = 0.0;
    for (Eigen::Index x = 0; x < nx; ++x) {
      const double lp = logp(x) - lz;
      const double qx = q_[static_cast<std::size_t>(x)];
      if (qx > 0.0) cross += qx * lp;
      w(x) = std::exp(lp) - qx;
    }
    const Eigen::MatrixXd g = mu.transpose() * (a_.array().colwise() * w.array()).matrix();  // d_Y x d_X
    grad = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
    return std::max(entropy_ - cross, 0.0);
  }

 private:
  const Distribution& q_;
  StateSpace hidden_;
  SufficientStatistics vis_;
  Eigen::MatrixXd a_;  // |X| x d_X
  Eigen::Index dx_ = 0, dy_ = 0;
  double entropy_ = 0.0;
  std::vector<std::vector<Eigen::Index>> unit_rows_;
};

struct Minimum {
  Eigen::VectorXd x;
  double f = 0.0;
  double gnorm = 0.0;
  std::size_t iterations = 0;
};

Minimum lbfgs(const Objective& obj, Eigen::VectorXd x, const FitOptions& opt) {
  constexpr std::size_t kMemory = 10;
  std::deque<Eigen::VectorXd> ss, ys;
  Eigen::VectorXd g;
  double f = obj(x, g);
  Minimum out;
  std::size_t it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (g.norm() < opt.gradient_tolerance || f <= opt.target_loss) break;
    // two-loop recursion
    Eigen::VectorXd d = -g;
    std::vector<double> alpha(ss.size());
    for (std::size_t k = ss.size(); k-- > 0;) {
      alpha[k] = ss[k].dot(d) / ys[k].dot(ss[k]);
      d -= alpha[k] * ys[k];
    }
    if (!ss.empty()) d *= ss.back().dot(ys.back()) / ys.back().squaredNorm();
    for (std::size_t k = 0; k < ss.size(); ++k) {
      const double beta = ys[k].dot(d) / ys[k].dot(ss[k]);
      d += (alpha[k] - beta) * ss[k];
    }
    if (g.dot(d) >= 0.0) {
      d = -g;
      ss.clear();
      ys.clear();
    }
    double step = 1.0;
    const double slope = g.dot(d);
    Eigen::VectorXd xn, gn;
    double fn = f;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      xn = x + step * d;
      fn = obj(xn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    Eigen::VectorXd s = xn - x, y = gn - g;
    if (s.dot(y) > 1e-12 * y.squaredNorm()) {
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      if (ss.size() > kMemory) {
        ss.pop_front();
        ys.pop_front();
      }
    }
    x = std::move(xn);
    g = std::move(gn);
    f = fn;
  }
  out.x = std::move(x);
  out.f = f;
  out.gnorm = g.norm();
  out.iterations = it;
  return out;
}

}  // namespace

FitResult fit_rbm(const Distribution& target, const StateSpace& hidden, const FitOptions& options) {
  const Objective obj(target, hidden);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FitResult best;
  best.divergence = std::numeric_limits<double>::infinity();
  const auto dy = static_cast<Eigen::Index>(hidden.stat_dim());
  const auto dx = obj.size() / std::max<Eigen::Index>(dy, 1);
  for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    Eigen::VectorXd x0(obj.size());
    for (Eigen::Index k = 0; k < x0.size(); ++k) x0(k) = r == 0 ? 0.0 : gauss(rng);
    const Minimum m = lbfgs(obj, std::move(x0), options);
    if (m.f < best.divergence) {
      best.divergence = m.f;
      best.gradient_norm = m.gnorm;
      best.iterations = m.iterations;
      best.theta = ThetaMatrix::from_vector(static_cast<std::size_t>(dy), static_cast<std::size_t>(dx), m.x);
    }
    if (best.divergence <= options.target_loss) break;
  }
  return best;
}

std::vector<Distribution> divergence_targets(const StateSpace& visible, std::size_t dirichlet_targets,
                                             std::uint64_t seed) {
  std::vector<Distribution> out;
  for (std::size_t x = 0; x < visible.size(); ++x) out.push_back(Distribution::point_mass(visible, x));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (std::size_t t = 0; t < dirichlet_targets; ++t) {
    std::vector<double> w(visible.size());
    double s = 0.0;
    for (double& v : w) s += (v = gamma(rng));
    for (double& v : w) v /= s;
    out.emplace_back(visible, std::move(w));
  }
  return out;
}

EmpiricalDivergence empirical_max_divergence(const StateSpace& visible, const StateSpace& hidden,
                                             std::size_t dirichlet_targets, const FitOptions& options) {
  if (visible.size() > 64) throw InstanceTooLarge("empirical divergence is limited to 64 visible states");
  EmpiricalDivergence out;
  const auto targets = divergence_targets(visible, dirichlet_targets, options.seed);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    FitOptions o = options;
    o.seed = options.seed + 1000003ULL * (t + 1);
    const FitResult fit = fit_rbm(targets[t], hidden, o);
    out.per_target.push_back(fit.divergence);
    if (t == 0 || fit.divergence > out.max_divergence) {
      out.max_divergence = fit.divergence;
      out.worst_target = t;
      out.worst_gradient_norm = fit.gradient_norm;
    }
  }
  return out;
}

Distribution product_mixture(const StateSpace& space, const std::vector<ProductComponent>& components) {
  std::vector<double> p(space.size(), 0.0);
  for (std::size_t x = 0; x < space.size(); ++x) {
    const State s = space.state(x);
    for (const auto& c : components) {
      double v = c.weight;
      for (std::size_t i = 0; i < s.size(); ++i) v *= c.marginals[i][static_cast<std::size_t>(s[i])];
      p[x] += v;
    }
  }
  return Distribution(space, std::move(p));
}

namespace {

void check_component(const StateSpace& space, const ProductComponent& c) {
  if (c.marginals.size() != space.num_vars()) throw std::invalid_argument("one marginal per variable required");
  if (!(c.weight >= 0.0)) throw std::invalid_argument("component weights must be nonnegative");
  for (std::size_t i = 0; i < space.num_vars(); ++i) {
    if (c.marginals[i].size() != static_cast<std::size_t>(space.card(i)))
      throw std::invalid_argument("marginal length does not match the cardinality");
    double s = 0.0;
    for (double v : c.marginals[i]) {
      if (!(v >= 0.0)) throw std::invalid_argument("marginals must be nonnegative");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("marginals must sum to one");
  }
}

bool disjoint(const ProductComponent& a, const ProductComponent& b) {
  for (std::size_t i = 0; i < a.marginals.size(); ++i) {
    bool shared = false;
    for (std::size_t v = 0; v < a.marginals[i].size() && !shared; ++v)
      shared = a.marginals[i][v] > 0.0 && b.marginals[i][v] > 0.0;
    if (!shared) return true;
  }
  return false;
}

// Natural parameters with log-values clamped at -saturation off the support.
Eigen::VectorXd saturated_parameters(const StateSpace& space, const ProductComponent& c, double saturation) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.stat_dim()));
  for (std::size_t i = 0; i < space.num_vars(); ++i) {
    auto lv = [&](int v) {
      const double p = c.marginals[i][static_cast<std::size_t>(v)];
      return p > 0.0 ? std::log(p) : -saturation;
    };
    theta(0) += lv(0);
    for (int v = 1; v < space.card(i); ++v)
      theta(static_cast<Eigen::Index>(indicator_row(space, static_cast<int>(i), v))) = lv(v) - lv(0);
  }
  theta(0) += std::log(c.weight);
  return theta;
}

}  // namespace

ThetaMatrix disjoint_mixture_witness(const StateSpace& visible, const StateSpace& hidden,
                                     const std::vector<ProductComponent>& components) {
  std::vector<ProductComponent> used;
  double total = 0.0;
  for (const auto& c : components) {
    check_component(visible, c);
    total += c.weight;
    if (c.weight > 0.0) used.push_back(c);
  }
  if (used.empty() || std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("component weights must sum to one");
  const std::size_t dy = hidden.stat_dim();
  if (used.size() > dy) throw std::invalid_argument("more components than d_Y");
  for (std::size_t a = 0; a < used.size(); ++a)
    for (std::size_t b = a + 1; b < used.size(); ++b)
      if (!disjoint(used[a], used[b])) throw std::invalid_argument("component supports overlap");

  const SufficientStatistics vs(visible);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dy), static_cast<Eigen::Index>(vs.rows()));
  const Eigen::VectorXd base = saturated_parameters(visible, used[0], kSaturation);
  theta.row(0) = base.transpose();
  // lowest value of the base over X, so the other units can cancel it
  double low = base(0);
  for (std::size_t i = 0; i < visible.num_vars(); ++i) {
    double m = 0.0;
    for (int v = 1; v < visible.card(i); ++v)
      m = std::min(m, base(static_cast<Eigen::Index>(indicator_row(visible, static_cast<int>(i), v))));
    low += m;
  }
  const double sat = kSaturation + std::max(0.0, -low);
  std::size_t next = 0;
  std::vector<std::size_t> slots;
  for (std::size_t j = 0; j < hidden.num_vars(); ++j)
    for (int s = 1; s < hidden.card(j); ++s) slots.push_back(indicator_row(hidden, static_cast<int>(j), s));
  for (std::size_t c = 1; c < used.size(); ++c) {
    const Eigen::VectorXd phi = saturated_parameters(visible, used[c], sat) - base;
    theta.row(static_cast<Eigen::Index>(slots[next++])) = phi.transpose();
  }
  for (; next < slots.size(); ++next) theta(static_cast<Eigen::Index>(slots[next]), 0) = -sat;
  return ThetaMatrix(theta);
}

ThetaMatrix partition_witness(const StateSpace& visible, const StateSpace& hidden, const PartitionPayload& payload) {
  const PartitionModel& model = payload.model;
  if (!(model.space() == visible)) throw std::invalid_argument("partition model on a different space");
  if (payload.block_masses.size() != model.num_blocks()) throw std::invalid_argument("one mass per block required");
  const auto& fixed = model.fixed();
  std::size_t top = 1, arg = visible.num_vars();
  for (std::size_t i : fixed)
    if (static_cast<std::size_t>(visible.card(i)) > top || arg == visible.num_vars()) {
      top = static_cast<std::size_t>(visible.card(i));
      arg = i;
    }
  if (model.num_blocks() > hidden_dim(hidden) * top)
    throw std::invalid_argument("d_Y too small for this partition model");
  // group blocks that differ only in the largest fixed variable
  std::map<State, ProductComponent> groups;
  for (std::size_t b = 0; b < model.num_blocks(); ++b) {
    const double mass = payload.block_masses[b];
    if (mass < 0.0) throw std::invalid_argument("block masses must be nonnegative");
    if (mass == 0.0) continue;
    State values(fixed.size());
    std::size_t rest = b;
    for (std::size_t t = fixed.size(); t-- > 0;) {
      values[t] = static_cast<int>(rest % static_cast<std::size_t>(visible.card(fixed[t])));
      rest /= static_cast<std::size_t>(visible.card(fixed[t]));
    }
    State key = values;
    int own = 0;
    for (std::size_t t = 0; t < fixed.size(); ++t)
      if (fixed[t] == arg) {
        own = values[t];
        key[t] = -1;
      }
    auto [it, fresh] = groups.try_emplace(key);
    ProductComponent& c = it->second;
    if (fresh) {
      c.marginals.resize(visible.num_vars());
      for (std::size_t i = 0; i < visible.num_vars(); ++i) {
        const auto r = static_cast<std::size_t>(visible.card(i));
        c.marginals[i].assign(r, 1.0 / static_cast<double>(r));
      }
      for (std::size_t t = 0; t < fixed.size(); ++t) {
        auto& mi = c.marginals[fixed[t]];
        std::fill(mi.begin(), mi.end(), 0.0);
        if (fixed[t] != arg) mi[static_cast<std::size_t>(values[t])] = 1.0;
      }
    }
    c.weight += mass;
    if (arg < visible.num_vars()) c.marginals[arg][static_cast<std::size_t>(own)] += mass;
  }
  std::vector<ProductComponent> comps;
  for (auto& [key, c] : groups) {
    if (arg < visible.num_vars())
      for (double& v : c.marginals[arg]) v /= c.weight;
    comps.push_back(std::move(c));
  }
  double total = 0.0;
  for (const auto& c : comps) total += c.weight;
  for (auto& c : comps) c.weight /= total;
  return disjoint_mixture_witness(visible, hidden, comps);
}

ThetaMatrix line_support_witness(const StateSpace& visible, const StateSpace& hidden,
                                 const LineSupportPayload& payload) {
  const Distribution& q = payload.target;
  if (!(q.space() == visible)) throw std::invalid_argument("target on a different space");
  const std::size_t n = visible.num_vars();
  std::vector<std::size_t> support;
  for (std::size_t x = 0; x < q.size(); ++x)
    if (q[x] > 0.0) support.push_back(x);
  auto on_line = [&](const LineSegment& l, const State& s) {
    for (std::size_t i = 0; i < n; ++i)
      if (i != l.free_var && s[i] != l.anchor[i]) return false;
    return true;
  };
  std::vector<LineSegment> lines = payload.lines;
  std::vector<int> owner(q.size(), -1);
  if (lines.empty()) {
    std::vector<bool> covered(q.size(), false);
    std::size_t left = support.size();
    while (left > 0) {
      LineSegment best;
      std::size_t gain = 0;
      for (std::size_t x : support) {
        if (covered[x]) continue;
        const State s = visible.state(x);
        for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) {
          const LineSegment l{i, s};
          std::size_t g = 0;
          for (std::size_t y : support)
            if (!covered[y] && on_line(l, visible.state(y))) ++g;
          if (g > gain) {
            gain = g;
            best = l;
          }
        }
      }
      for (std::size_t y : support)
        if (!covered[y] && on_line(best, visible.state(y))) {
          covered[y] = true;
          --left;
        }
      lines.push_back(best);
    }
  }
  for (const auto& l : lines)
    if (l.anchor.size() != n || l.free_var >= std::max<std::size_t>(n, 1))
      throw std::invalid_argument("malformed line segment");
  for (std::size_t x : support) {
    const State s = visible.state(x);
    for (std::size_t l = 0; l < lines.size() && owner[x] < 0; ++l)
      if (on_line(lines[l], s)) owner[x] = static_cast<int>(l);
    if (owner[x] < 0) throw std::invalid_argument("support is not covered by the line segments");
  }
  std::vector<ProductComponent> comps;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    ProductComponent c;
    c.marginals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.marginals[i].assign(static_cast<std::size_t>(visible.card(i)), 0.0);
      if (i != lines[l].free_var) c.marginals[i][static_cast<std::size_t>(lines[l].anchor[i])] = 1.0;
    }
    for (std::size_t x : support)
      if (owner[x] == static_cast<int>(l)) {
        c.weight += q[x];
        c.marginals[lines[l].free_var][static_cast<std::size_t>(visible.state(x)[lines[l].free_var])] += q[x];
      }
    if (c.weight <= 0.0) continue;
    for (double& v : c.marginals[lines[l].free_var]) v /= c.weight;
    comps.push_back(std::move(c));
  }
  if (comps.size() > hidden_dim(hidden)) throw std::invalid_argument("support needs more than d_Y line segments");
  return disjoint_mixture_witness(visible, hidden, comps);
}

ThetaMatrix submodel_witness(const StateSpace& visible, const StateSpace& hidden, const WitnessPayload& payload) {
  if (const auto* comps = std::get_if<std::vector<ProductComponent>>(&payload))
    return disjoint_mixture_witness(visible, hidden, *comps);
  if (const auto* part = std::get_if<PartitionPayload>(&payload)) return partition_witness(visible, hidden, *part);
  return line_support_witness(visible, hidden, std::get<LineSupportPayload>(payload));
}

}  // namespace drbm
