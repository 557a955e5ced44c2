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

#ifndef DRBM_TROPICAL_HPP
#define DRBM_TROPICAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drbm/exact_rank.hpp"
#include "drbm/geometry.hpp"
#include "drbm/models.hpp"
#include "drbm/statespace.hpp"

namespace drbm {

// One row per (visible variable i, hidden variable j, x_i, h_j); a one in
// every joint column (x, h) agreeing with that pair.
struct HomogeneousStatistics {
  struct Row {
    std::size_t visible_var = 0;
    std::size_t hidden_var = 0;
    int x = 0;
    int h = 0;
  };

  StateSpace visible;
  StateSpace hidden;
  std::vector<Row> rows;
  IntMatrix matrix;  // columns indexed x * |Y| + h
};

HomogeneousStatistics homogeneous_statistics(const StateSpace& visible, const StateSpace& hidden,
                                             std::size_t cap = kExactCap);

// A^(X,Y) as an integer matrix, same column order.
IntMatrix joint_statistics_matrix(const StateSpace& visible, const StateSpace& hidden,
                                  std::size_t cap = kExactCap);

// max over hidden states of ⟨Θ A_v, A_h⟩.
double tropical_value(const DiscreteRBM& rbm, std::size_t v);
// The same maximum taken hidden unit by hidden unit.
double tropical_value_decomposed(const DiscreteRBM& rbm, std::size_t v);

// sum_j max_h ⟨params[j].row(h), A_v⟩ for free per-unit parameters
// (params[j] is |Y_j| x d_X).
double tropical_block_value(const StateSpace& visible, const std::vector<Eigen::MatrixXd>& params,
                            std::size_t v);

struct TropicalBlockMatrix {
  IntMatrix matrix;                     // |X| x sum_j |Y_j| d_X
  std::vector<std::size_t> unit_offset;  // first column of each unit
  std::size_t block_width = 0;           // d_X
};

TropicalBlockMatrix tropical_matrix(const StateSpace& visible, const std::vector<Slicing>& slicings);

// Slicing by parallel hyperplanes whose inner cells are consecutive pairs of
// Hamming spheres around `center`.  nullopt when radius > n.
std::optional<Slicing> ball_slicing(const StateSpace& space, std::size_t center, int radius);

std::optional<std::vector<Slicing>> ball_slicing_certificate(const StateSpace& space,
                                                             const std::vector<std::size_t>& centers,
                                                             const std::vector<int>& radii);

// Copy of s with extra, never-selected hidden states up to k cells.
Slicing widen_slicing(const Slicing& s, std::size_t k);

struct TropicalDimension {
  std::size_t value = 0;  // rank - 1
  std::size_t rank = 0;
  std::size_t upper_bound = 0;
  bool exact = false;
  std::string family;
  std::vector<Slicing> slicings;
  std::size_t candidates = 0;
};

TropicalDimension tropical_dimension(const StateSpace& visible, const StateSpace& hidden,
                                     std::size_t budget = 2000, std::uint64_t seed = 0);

}  // namespace drbm

#endif  // DRBM_TROPICAL_HPP
