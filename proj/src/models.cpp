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

#include "drbm/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace drbm {

// ---------------------------------------------------------------------------
// ThetaMatrix

ThetaMatrix::ThetaMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (!m_.allFinite()) throw std::invalid_argument("theta must have finite entries");
}

ThetaMatrix ThetaMatrix::zeros(std::size_t d_hidden, std::size_t d_visible) {
  return ThetaMatrix(Eigen::MatrixXd::Zero(d_hidden, d_visible));
}

ThetaMatrix ThetaMatrix::from_vector(std::size_t d_hidden, std::size_t d_visible,
                                     const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != d_hidden * d_visible)
    throw std::invalid_argument("theta vector has the wrong length");
  return ThetaMatrix(Eigen::Map<const Eigen::MatrixXd>(theta.data(), d_hidden, d_visible));
}

Eigen::VectorXd ThetaMatrix::vectorize() const {
  return Eigen::Map<const Eigen::VectorXd>(m_.data(), m_.size());
}

// ---------------------------------------------------------------------------
// Distribution

double log_sum_exp(std::span<const double> values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double v : values) s += std::exp(v - hi);
  return hi + std::log(s);
}

Distribution::Distribution(StateSpace space, std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (probs_.size() != space_.size())
    throw std::invalid_argument("distribution length does not match the state space");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to one");
  for (double& p : probs_) p /= total;
}

Distribution Distribution::from_log_weights(StateSpace space, std::span<const double> log_weights) {
  if (log_weights.size() != space.size())
    throw std::invalid_argument("log-weight vector does not match the state space");
  const double lz = log_sum_exp(log_weights);
  if (!std::isfinite(lz)) throw std::domain_error("log-weights have no finite normaliser");
  std::vector<double> p(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights[i] - lz);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return Distribution(std::move(space), std::move(p));
}

Distribution Distribution::uniform(StateSpace space) {
  const std::size_t n = space.size();
  return Distribution(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(StateSpace space, std::size_t state) {
  std::vector<double> p(space.size(), 0.0);
  p.at(state) = 1.0;
  return Distribution(std::move(space), std::move(p));
}

double Distribution::max_abs_diff(const Distribution& other) const {
  if (!(space_ == other.space_)) throw std::invalid_argument("distributions live on different spaces");
  double d = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) d = std::max(d, std::abs(probs_[i] - other.probs_[i]));
  return d;
}

double Distribution::total_variation(const Distribution& other) const {
  if (!(space_ == other.space_)) throw std::invalid_argument("distributions live on different spaces");
  double d = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) d += std::abs(probs_[i] - other.probs_[i]);
  return 0.5 * d;
}

// ---------------------------------------------------------------------------
// Independence model and mixtures

Distribution exp_family_distribution(const SufficientStatistics& stats,
                                     const Eigen::VectorXd& param) {
  if (static_cast<std::size_t>(param.size()) != stats.rows())
    throw std::invalid_argument("parameter length must equal d_X");
  if (!param.allFinite()) throw std::invalid_argument("parameters must be finite");
  std::vector<double> logw(stats.cols(), 0.0);
  for (std::size_t c = 0; c < stats.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < stats.rows(); ++r)
      if (stats.at(r, c)) s += param(r);
    logw[c] = s;
  }
  return Distribution::from_log_weights(stats.space(), logw);
}

Eigen::VectorXd product_parameters(const SufficientStatistics& stats,
                                   const std::vector<std::vector<double>>& log_factors) {
  const StateSpace& space = stats.space();
  if (log_factors.size() != space.num_vars()) throw std::invalid_argument("one factor per variable expected");
  Eigen::VectorXd param = Eigen::VectorXd::Zero(stats.rows());
  for (std::size_t i = 0; i < space.num_vars(); ++i) {
    if (log_factors[i].size() != static_cast<std::size_t>(space.card(i)))
      throw std::invalid_argument("factor length must equal the variable's cardinality");
    param(0) += log_factors[i][0];
    for (int v = 1; v < space.card(i); ++v)
      param(stats.row_of(static_cast<int>(i), v)) = log_factors[i][v] - log_factors[i][0];
  }
  return param;
}

std::vector<std::vector<double>> variable_marginals(const Distribution& p) {
  const StateSpace& space = p.space();
  std::vector<std::vector<double>> out(space.num_vars());
  for (std::size_t i = 0; i < space.num_vars(); ++i) out[i].assign(space.card(i), 0.0);
  for (std::size_t c = 0; c < space.size(); ++c) {
    const State x = space.state(c);
    for (std::size_t i = 0; i < x.size(); ++i) out[i][x[i]] += p[c];
  }
  return out;
}

Distribution mixture_distribution(const MixtureModelSpec& spec) {
  const std::size_t k = spec.weights.size();
  if (k == 0 || spec.components.size() != k) throw std::invalid_argument("mixture needs k weights and k components");
  double total = 0.0;
  for (double w : spec.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to one");
  const SufficientStatistics stats(spec.space);
  std::vector<double> p(spec.space.size(), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (spec.weights[i] == 0.0) continue;
    const Distribution comp = exp_family_distribution(stats, spec.components[i]);
    for (std::size_t c = 0; c < p.size(); ++c) p[c] += spec.weights[i] / total * comp[c];
  }
  double s = 0.0;
  for (double v : p) s += v;
  for (double& v : p) v /= s;
  return Distribution(spec.space, std::move(p));
}

Distribution hadamard_product(const Distribution& p, const Distribution& q) {
  if (!(p.space() == q.space())) throw std::invalid_argument("hadamard_product: different spaces");
  std::vector<double> r(p.size());
  double z = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = p[i] * q[i];
    z += r[i];
  }
  if (!(z > 0.0)) throw std::domain_error("hadamard_product: supports are disjoint");
  for (double& v : r) v /= z;
  return Distribution(p.space(), std::move(r));
}

// ---------------------------------------------------------------------------
// DiscreteRBM

DiscreteRBM::DiscreteRBM(StateSpace visible, StateSpace hidden, ThetaMatrix theta)
    : vis_(std::move(visible)), hid_(std::move(hidden)), theta_(std::move(theta)) {
  if (theta_.rows() != hid_.rows() || theta_.cols() != vis_.rows())
    throw std::invalid_argument("theta must have shape d_Y x d_X");
}

DiscreteRBM::DiscreteRBM(StateSpace visible, StateSpace hidden)
    : vis_(std::move(visible)), hid_(std::move(hidden)),
      theta_(ThetaMatrix::zeros(hid_.rows(), vis_.rows())) {}

Eigen::VectorXd DiscreteRBM::project_visible(std::size_t x) const {
  const Eigen::MatrixXd& t = theta_.matrix();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(t.rows());
  for (std::size_t c = 0; c < vis_.rows(); ++c)
    if (vis_.at(c, x)) v += t.col(c);
  return v;
}

Eigen::VectorXd DiscreteRBM::project_hidden(std::size_t y) const {
  const Eigen::MatrixXd& t = theta_.matrix();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(t.cols());
  for (std::size_t r = 0; r < hid_.rows(); ++r)
    if (hid_.at(r, y)) v += t.row(r).transpose();
  return v;
}

double DiscreteRBM::energy(std::size_t x, std::size_t y) const {
  const Eigen::VectorXd v = project_visible(x);
  double s = 0.0;
  for (std::size_t r = 0; r < hid_.rows(); ++r)
    if (hid_.at(r, y)) s += v(r);
  return s;
}

double DiscreteRBM::log_unnormalized_marginal(std::size_t x) const {
  const Eigen::VectorXd v = project_visible(x);
  const StateSpace& h = hid_.space();
  double total = v(0);
  std::vector<double> terms;
  for (std::size_t j = 0; j < h.num_vars(); ++j) {
    terms.assign(1, 0.0);
    for (int s = 1; s < h.card(j); ++s) terms.push_back(v(hid_.row_of(static_cast<int>(j), s)));
    total += log_sum_exp(terms);
  }
  return total;
}

DiscreteRBM rbm_from_binary_weights(const Eigen::MatrixXd& W, const Eigen::VectorXd& B,
                                    const Eigen::VectorXd& C) {
  const auto m = static_cast<std::size_t>(W.rows());
  const auto n = static_cast<std::size_t>(W.cols());
  if (static_cast<std::size_t>(B.size()) != n || static_cast<std::size_t>(C.size()) != m)
    throw std::invalid_argument("W must be m x n with B of length n and C of length m");
  const StateSpace vis(std::vector<int>(n, 2));
  const StateSpace hid(std::vector<int>(m, 2));
  const SufficientStatistics sv(vis), sh(hid);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(sh.rows(), sv.rows());
  for (std::size_t i = 0; i < n; ++i) t(0, sv.row_of(static_cast<int>(i), 1)) = B(i);
  for (std::size_t j = 0; j < m; ++j) {
    t(sh.row_of(static_cast<int>(j), 1), 0) = C(j);
    for (std::size_t i = 0; i < n; ++i)
      t(sh.row_of(static_cast<int>(j), 1), sv.row_of(static_cast<int>(i), 1)) = W(j, i);
  }
  return DiscreteRBM(vis, hid, ThetaMatrix(std::move(t)));
}

Distribution rbm_joint(const DiscreteRBM& rbm, std::size_t cap) {
  const JointStatistics guard(rbm.visible_stats(), rbm.hidden_stats(), cap);
  const std::size_t nx = rbm.visible().size();
  const std::size_t ny = rbm.hidden().size();
  std::vector<double> logw(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    const Eigen::VectorXd v = rbm.project_visible(x);
    for (std::size_t y = 0; y < ny; ++y) {
      double s = 0.0;
      for (std::size_t r = 0; r < rbm.hidden_stats().rows(); ++r)
        if (rbm.hidden_stats().at(r, y)) s += v(r);
      logw[x * ny + y] = s;
    }
  }
  return Distribution::from_log_weights(rbm.visible().concat(rbm.hidden()), logw);
}

Distribution rbm_marginal(const DiscreteRBM& rbm, std::size_t cap) {
  const Distribution joint = rbm_joint(rbm, cap);
  const std::size_t nx = rbm.visible().size();
  const std::size_t ny = rbm.hidden().size();
  std::vector<double> p(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) p[x] += joint[x * ny + y];
  double s = 0.0;
  for (double v : p) s += v;
  for (double& v : p) v /= s;
  return Distribution(rbm.visible(), std::move(p));
}

Distribution rbm_marginal_factorized(const DiscreteRBM& rbm) {
  std::vector<double> logw(rbm.visible().size());
  for (std::size_t x = 0; x < logw.size(); ++x) logw[x] = rbm.log_unnormalized_marginal(x);
  return Distribution::from_log_weights(rbm.visible(), logw);
}

Distribution rbm_hidden_marginal(const DiscreteRBM& rbm, std::size_t cap) {
  const Distribution joint = rbm_joint(rbm, cap);
  const std::size_t nx = rbm.visible().size();
  const std::size_t ny = rbm.hidden().size();
  std::vector<double> p(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) p[y] += joint[x * ny + y];
  double s = 0.0;
  for (double v : p) s += v;
  for (double& v : p) v /= s;
  return Distribution(rbm.hidden(), std::move(p));
}

Distribution conditional_visible_given_hidden(const DiscreteRBM& rbm, std::size_t y) {
  return exp_family_distribution(rbm.visible_stats(), rbm.project_hidden(y));
}

Distribution conditional_hidden_given_visible(const DiscreteRBM& rbm, std::size_t x) {
  return exp_family_distribution(rbm.hidden_stats(), rbm.project_visible(x));
}

// ---------------------------------------------------------------------------
// Edge (monomial) parametrisation

EdgeParameters::EdgeParameters(StateSpace visible, StateSpace hidden)
    : visible_(std::move(visible)), hidden_(std::move(hidden)) {
  std::size_t per_unit = 0;
  edge_offset_.assign(visible_.num_vars(), 0);
  for (std::size_t i = 0; i < visible_.num_vars(); ++i) {
    edge_offset_[i] = per_unit;
    per_unit += static_cast<std::size_t>(visible_.card(i));
  }
  std::size_t total = 0;
  unit_offset_.assign(hidden_.num_vars(), 0);
  for (std::size_t j = 0; j < hidden_.num_vars(); ++j) {
    unit_offset_[j] = total;
    total += per_unit * static_cast<std::size_t>(hidden_.card(j));
  }
  log_gamma_.assign(total, 0.0);
}

std::size_t EdgeParameters::offset(std::size_t j, std::size_t i, int h, int x) const {
  std::size_t per_unit = 0;
  for (std::size_t l = 0; l < visible_.num_vars(); ++l) per_unit += static_cast<std::size_t>(visible_.card(l));
  return unit_offset_.at(j) + static_cast<std::size_t>(h) * per_unit + edge_offset_.at(i) +
         static_cast<std::size_t>(x);
}

double& EdgeParameters::log_gamma(std::size_t j, std::size_t i, int h, int x) {
  return log_gamma_.at(offset(j, i, h, x));
}

double EdgeParameters::log_gamma(std::size_t j, std::size_t i, int h, int x) const {
  return log_gamma_.at(offset(j, i, h, x));
}

EdgeParameters EdgeParameters::from_gamma(StateSpace visible, StateSpace hidden,
                                          const std::vector<double>& gamma) {
  EdgeParameters out(std::move(visible), std::move(hidden));
  if (gamma.size() != out.log_gamma_.size()) throw std::invalid_argument("gamma has the wrong length");
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    if (!(gamma[k] > 0.0) || !std::isfinite(gamma[k]))
      throw std::invalid_argument("gamma entries must be positive and finite");
    out.log_gamma_[k] = std::log(gamma[k]);
  }
  return out;
}

EdgeParameters edge_parameters(const DiscreteRBM& rbm) {
  const StateSpace& vis = rbm.visible();
  const StateSpace& hid = rbm.hidden();
  const SufficientStatistics& sv = rbm.visible_stats();
  const SufficientStatistics& sh = rbm.hidden_stats();
  const ThetaMatrix& t = rbm.theta();
  EdgeParameters e(vis, hid);
  for (std::size_t j = 0; j < hid.num_vars(); ++j)
    for (std::size_t i = 0; i < vis.num_vars(); ++i)
      for (int h = 0; h < hid.card(j); ++h)
        for (int x = 0; x < vis.card(i); ++x) {
          const bool hj = h != 0, xi = x != 0;
          const std::size_t r = hj ? sh.row_of(static_cast<int>(j), h) : 0;
          const std::size_t c = xi ? sv.row_of(static_cast<int>(i), x) : 0;
          double g = 0.0;
          if (hj && xi) g += t(r, c);
          if (j == 0 && xi) g += t(0, c);
          if (i == 0 && hj) g += t(r, 0);
          if (i == 0 && j == 0) g += t(0, 0);
          e.log_gamma(j, i, h, x) = g;
        }
  return e;
}

Distribution rbm_marginal_polynomial(const EdgeParameters& params) {
  const StateSpace& vis = params.visible();
  const StateSpace& hid = params.hidden();
  std::vector<double> logw(vis.size(), 0.0);
  std::vector<double> terms;
  for (std::size_t v = 0; v < vis.size(); ++v) {
    const State x = vis.state(v);
    double total = 0.0;
    for (std::size_t j = 0; j < hid.num_vars(); ++j) {
      terms.assign(static_cast<std::size_t>(hid.card(j)), 0.0);
      for (int h = 0; h < hid.card(j); ++h)
        for (std::size_t i = 0; i < vis.num_vars(); ++i) terms[h] += params.log_gamma(j, i, h, x[i]);
      total += log_sum_exp(terms);
    }
    logw[v] = total;
  }
  return Distribution::from_log_weights(vis, logw);
}

Distribution rbm_marginal_polynomial(const DiscreteRBM& rbm) {
  return rbm_marginal_polynomial(edge_parameters(rbm));
}

std::vector<Distribution> hadamard_factors(const DiscreteRBM& rbm) {
  const StateSpace& vis = rbm.visible();
  const StateSpace& hid = rbm.hidden();
  const SufficientStatistics& sv = rbm.visible_stats();
  const SufficientStatistics& sh = rbm.hidden_stats();
  const Eigen::MatrixXd& t = rbm.theta().matrix();
  std::vector<Distribution> factors;
  for (std::size_t j = 0; j < hid.num_vars(); ++j) {
    MixtureModelSpec spec{vis, {}, {}};
    std::vector<double> log_z;
    for (int h = 0; h < hid.card(j); ++h) {
      Eigen::VectorXd phi = Eigen::VectorXd::Zero(sv.rows());
      if (j == 0) phi += t.row(0).transpose();
      if (h != 0) phi += t.row(sh.row_of(static_cast<int>(j), h)).transpose();
      // log partition function of the product component
      std::vector<double> lw(vis.size());
      for (std::size_t c = 0; c < vis.size(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < sv.rows(); ++r)
          if (sv.at(r, c)) s += phi(r);
        lw[c] = s;
      }
      log_z.push_back(log_sum_exp(lw));
      spec.components.push_back(std::move(phi));
    }
    const double lz = log_sum_exp(log_z);
    for (double l : log_z) spec.weights.push_back(std::exp(l - lz));
    double s = 0.0;
    for (double w : spec.weights) s += w;
    for (double& w : spec.weights) w /= s;
    factors.push_back(mixture_distribution(spec));
  }
  return factors;
}

void write_csv(std::ostream& out, const Distribution& p) {
  out << "state,probability\n";
  char buf[64];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p[i]);
    out << p.space().label(i) << ',' << buf << '\n';
  }
}

}  // namespace drbm
