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

#ifndef DRBM_GEOMETRY_HPP
#define DRBM_GEOMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "drbm/coding.hpp"
#include "drbm/models.hpp"
#include "drbm/statespace.hpp"

namespace drbm {

inline constexpr double kGenericityMargin = 1e-9;

// ⟨v, A_x - A_y⟩ >= 0 for all y (> 0 for y != x when strict).
bool normal_cone_contains(const StateSpace& space, std::size_t x, const Eigen::VectorXd& v,
                          bool strict);

// min over y != x of ⟨v, A_x - A_y⟩; +inf on a single-state space.
double cone_margin(const StateSpace& space, std::size_t x, const Eigen::VectorXd& v);

// States maximising ⟨v, A_x⟩, ascending.
std::vector<std::size_t> maximizing_states(const StateSpace& space, const Eigen::VectorXd& v);

class NonGenericSlicing : public std::runtime_error {
 public:
  NonGenericSlicing(const std::string& what, std::size_t state)
      : std::runtime_error(what), state_(state) {}
  std::size_t state() const { return state_; }

 private:
  std::size_t state_;
};

// A partition of the visible states into the preimages of the maximal cones
// of the normal fan of the hidden polytope.
struct Slicing {
  StateSpace visible;
  StateSpace hidden;
  Eigen::MatrixXd theta;          // d_Y x d_X
  std::vector<std::size_t> cell;  // visible state -> hidden state

  std::size_t num_cells() const { return hidden.size(); }
  std::vector<std::vector<std::size_t>> cells() const;
};

// Θ of a single hidden variable with k states whose state y scores
// ⟨scores.row(y), A_x⟩ (k x d_X in, k x d_X out, A^(Y) row order).
Eigen::MatrixXd single_unit_theta(const Eigen::MatrixXd& scores);

// Slicing induced by theta; nullopt when some image is within the margin of
// a cone boundary.
std::optional<Slicing> slicing_from_map(const StateSpace& visible, const StateSpace& hidden,
                                        const Eigen::MatrixXd& theta);

std::vector<std::size_t> inference_function(const DiscreteRBM& rbm, std::size_t x);
std::size_t inference_state(const DiscreteRBM& rbm, std::size_t x);

struct ParallelSlicing {
  Slicing slicing;
  Eigen::VectorXd r;  // slopes, strictly increasing
  Eigen::VectorXd b;  // offsets, strictly increasing, r concave in b
  // λ(x) = ⟨direction, A_x⟩ - t_1 + 1; cell y maximises λ r_y - b_y.
  Eigen::VectorXd lambda;
};

ParallelSlicing parallel_slicing(const StateSpace& space, std::size_t k,
                                 const Eigen::VectorXd& direction,
                                 const std::vector<double>& thresholds);

// I_y = {λ : λ (r_y - r_z) > b_y - b_z for all z != y} for increasing r.
std::vector<std::pair<double, double>> slicing_intervals(const Eigen::VectorXd& r,
                                                         const Eigen::VectorXd& b);

// Linear feasibility check for a labelled partition into k cells; returns a
// realizing Θ for one hidden variable with k states (first row zero).
std::optional<Eigen::MatrixXd> realize_partition(const StateSpace& visible, std::size_t k,
                                                 const std::vector<std::size_t>& cell);

std::vector<Slicing> enumerate_slicings(const StateSpace& space, std::size_t hidden_card,
                                        std::size_t budget, std::uint64_t seed = 0);

std::vector<std::size_t> strong_modes(const Distribution& p);
std::vector<std::size_t> strong_modes_by_line_sums(const Distribution& p);

struct ModeCertificate {
  ThetaMatrix theta;                    // scaled map
  ThetaMatrix direction;                // unscaled LP solution
  double scale = 1.0;
  std::vector<std::size_t> assignment;  // hidden state -> code word
  std::vector<std::size_t> modes;       // strong modes of the resulting marginal
};

std::optional<ModeCertificate> strong_mode_certificate(const StateSpace& visible,
                                                       const StateSpace& hidden, const Code& code,
                                                       std::size_t restarts = 200,
                                                       std::uint64_t seed = 0);

// Every state in `modes` receives at least one hidden vertex strictly inside
// its normal cone under theta^T.
bool hidden_vertices_cover(const DiscreteRBM& rbm, const std::vector<std::size_t>& modes);

}  // namespace drbm

#endif  // DRBM_GEOMETRY_HPP
