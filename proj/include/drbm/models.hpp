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

#ifndef DRBM_MODELS_HPP
#define DRBM_MODELS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "drbm/statespace.hpp"

namespace drbm {

// Tolerance for identities that hold exactly in exact arithmetic.
inline constexpr double kExactTol = 1e-12;
// Tolerance for checks that go through an optimiser or a feasibility program.
inline constexpr double kOptimTol = 1e-6;
// Parameter magnitude standing in for +/- infinity when a closure point
// (a point mass, a zero-probability state) has to be realised.
inline constexpr double kSaturation = 40.0;

// Natural parameters of the bipartite family as a d_Y x d_X matrix.
// The flat parameter vector theta is its column-by-column vectorisation.
class ThetaMatrix {
 public:
  ThetaMatrix() = default;
  explicit ThetaMatrix(Eigen::MatrixXd entries);
  static ThetaMatrix zeros(std::size_t d_hidden, std::size_t d_visible);
  static ThetaMatrix from_vector(std::size_t d_hidden, std::size_t d_visible,
                                 const Eigen::VectorXd& theta);

  const Eigen::MatrixXd& matrix() const { return m_; }
  std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  Eigen::VectorXd vectorize() const;

 private:
  Eigen::MatrixXd m_;
};

// Probability vector indexed by the joint states of a StateSpace.
class Distribution {
 public:
  Distribution(StateSpace space, std::vector<double> probs);

  // exp(log_weights) normalised with a single log-sum-exp.
  static Distribution from_log_weights(StateSpace space, std::span<const double> log_weights);
  static Distribution uniform(StateSpace space);
  static Distribution point_mass(StateSpace space, std::size_t state);

  const StateSpace& space() const { return space_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  // Largest absolute entrywise difference.
  double max_abs_diff(const Distribution& other) const;
  double total_variation(const Distribution& other) const;

 private:
  StateSpace space_;
  std::vector<double> probs_;
};

double log_sum_exp(std::span<const double> values);

// Independence model: p(x) proportional to exp(<param, A_x>).
Distribution exp_family_distribution(const SufficientStatistics& stats,
                                     const Eigen::VectorXd& param);

// Per-variable log-factors f_i(x_i) -> natural parameter vector with
// <param, A_x> = sum_i f_i(x_i).
Eigen::VectorXd product_parameters(const SufficientStatistics& stats,
                                   const std::vector<std::vector<double>>& log_factors);

// Single-variable marginals of a distribution on a product space.
std::vector<std::vector<double>> variable_marginals(const Distribution& p);

struct MixtureModelSpec {
  StateSpace space;
  std::vector<double> weights;               // length k, on the simplex
  std::vector<Eigen::VectorXd> components;   // k natural parameter vectors
};

Distribution mixture_distribution(const MixtureModelSpec& spec);

// Renormalised entrywise product.  Throws std::domain_error when the
// supports are disjoint.
Distribution hadamard_product(const Distribution& p, const Distribution& q);

// Discrete restricted Boltzmann machine with visible space X, hidden space Y
// and interaction matrix Theta (d_Y x d_X).
class DiscreteRBM {
 public:
  DiscreteRBM(StateSpace visible, StateSpace hidden, ThetaMatrix theta);
  DiscreteRBM(StateSpace visible, StateSpace hidden);  // theta = 0

  const StateSpace& visible() const { return vis_.space(); }
  const StateSpace& hidden() const { return hid_.space(); }
  const SufficientStatistics& visible_stats() const { return vis_; }
  const SufficientStatistics& hidden_stats() const { return hid_; }
  const ThetaMatrix& theta() const { return theta_; }

  // Theta * A^(X)_x, a point in the parameter space of E_Y.
  Eigen::VectorXd project_visible(std::size_t x) const;
  // Theta^T * A^(Y)_y, a point in the parameter space of E_X.
  Eigen::VectorXd project_hidden(std::size_t y) const;

  // <Theta A_x, A_y>.
  double energy(std::size_t x, std::size_t y) const;
  // log of sum_y exp(energy(x, y)), evaluated hidden unit by hidden unit.
  double log_unnormalized_marginal(std::size_t x) const;

 private:
  SufficientStatistics vis_;
  SufficientStatistics hid_;
  ThetaMatrix theta_;
};

// Builds Theta from binary-RBM weights: W is m x n, B has length n, C length
// m.  Visible and hidden spaces are {0,1}^n and {0,1}^m.
DiscreteRBM rbm_from_binary_weights(const Eigen::MatrixXd& W, const Eigen::VectorXd& B,
                                    const Eigen::VectorXd& C);

// Distribution over visible.concat(hidden).
Distribution rbm_joint(const DiscreteRBM& rbm, std::size_t cap = kExactCap);
// Marginal on X obtained by summing the enumerated joint over Y.
Distribution rbm_marginal(const DiscreteRBM& rbm, std::size_t cap = kExactCap);
// Marginal from the per-unit factorisation; never touches the joint space.
Distribution rbm_marginal_factorized(const DiscreteRBM& rbm);

// Edge parameters gamma_{j,i,(h_j, x_i)} > 0 of the square-free monomial
// parametrisation, stored as logs, flattened as [j][h_j][i][x_i].
class EdgeParameters {
 public:
  EdgeParameters(StateSpace visible, StateSpace hidden);

  const StateSpace& visible() const { return visible_; }
  const StateSpace& hidden() const { return hidden_; }
  double& log_gamma(std::size_t j, std::size_t i, int h, int x);
  double log_gamma(std::size_t j, std::size_t i, int h, int x) const;

  // Positive gammas in the same layout; throws std::invalid_argument on a
  // nonpositive entry.
  static EdgeParameters from_gamma(StateSpace visible, StateSpace hidden,
                                   const std::vector<double>& gamma);
  std::size_t size() const { return log_gamma_.size(); }

 private:
  std::size_t offset(std::size_t j, std::size_t i, int h, int x) const;

  StateSpace visible_;
  StateSpace hidden_;
  std::vector<std::size_t> unit_offset_;
  std::vector<std::size_t> edge_offset_;
  std::vector<double> log_gamma_;
};

// gamma = exp(homogeneous theta).  Constant, visible-only and hidden-only
// terms of Theta are folded onto the edges of hidden unit 1 / visible unit 1.
EdgeParameters edge_parameters(const DiscreteRBM& rbm);

// p(v) proportional to prod_j sum_{h_j} prod_i gamma_{j,i,(h_j, v_i)}.
Distribution rbm_marginal_polynomial(const EdgeParameters& params);
Distribution rbm_marginal_polynomial(const DiscreteRBM& rbm);

Distribution conditional_visible_given_hidden(const DiscreteRBM& rbm, std::size_t y);
Distribution conditional_hidden_given_visible(const DiscreteRBM& rbm, std::size_t x);

// Marginal of the hidden layer, sum_x p(x, y).
Distribution rbm_hidden_marginal(const DiscreteRBM& rbm, std::size_t cap = kExactCap);

// The m mixture factors whose Hadamard product is the RBM marginal: factor j
// is the one-hidden-unit model built from the rows of Theta that belong to
// hidden unit j (the visible bias rides on factor 1).
std::vector<Distribution> hadamard_factors(const DiscreteRBM& rbm);

// CSV "state,probability".
void write_csv(std::ostream& out, const Distribution& p);

}  // namespace drbm

#endif  // DRBM_MODELS_HPP
