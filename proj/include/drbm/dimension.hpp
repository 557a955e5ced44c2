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

#ifndef DRBM_DIMENSION_HPP
#define DRBM_DIMENSION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drbm/models.hpp"
#include "drbm/statespace.hpp"
#include "drbm/tropical.hpp"

namespace drbm {

inline constexpr double kRankThreshold = 1e-9;
inline constexpr double kRequiredGap = 1e3;

// d_X * d_Y - 1.
std::size_t exp_family_dimension(const StateSpace& visible, const StateSpace& hidden);
std::size_t expected_dimension(const StateSpace& visible, const StateSpace& hidden);

// |X| x (d_X d_Y) derivative of x -> log p~(x) with respect to vec(Θ).
Eigen::MatrixXd log_marginal_jacobian(const DiscreteRBM& rbm);

struct NumericalRank {
  std::size_t rank = 0;
  double gap = 0.0;  // σ_rank / σ_{rank+1}, +inf when no trailing value
  bool certain = false;
};

// Rank of the Jacobian after projecting out the constant direction.
NumericalRank jacobian_numerical_rank(const Eigen::MatrixXd& jacobian);

struct JacobianRank {
  std::size_t rank = 0;
  double gap = 0.0;
  bool certain = false;
  std::size_t samples = 0;
  std::size_t draws = 0;  // including re-draws of uncertain samples
  std::uint64_t seed = 0;
};

JacobianRank jacobian_rank(const StateSpace& visible, const StateSpace& hidden,
                           std::size_t samples = 5, std::uint64_t seed = 0);

using MixtureDimension = std::function<std::size_t(std::size_t k)>;

// dim M_{X,k} from jacobian_rank on the one-unit shape.
MixtureDimension numerical_mixture_dimension(const StateSpace& visible, std::uint64_t seed = 0);

struct HadamardBound {
  std::size_t bound = 0;
  std::size_t unit = 0;  // minimising hidden unit
};

HadamardBound hadamard_upper_bound(const StateSpace& visible, const StateSpace& hidden,
                                   const MixtureDimension& mixture_dim);

enum class DimensionVerdict { kExpected, kDefective, kFullDimensional, kUndetermined };

std::string to_string(DimensionVerdict v);

struct DimensionOptions {
  std::size_t samples = 5;
  std::uint64_t seed = 0;
  std::size_t tropical_budget = 2000;
};

struct DimensionReport {
  std::size_t expected = 0;
  std::size_t exp_family = 0;
  std::size_t ambient = 0;  // |X| - 1
  JacobianRank jacobian;
  TropicalDimension tropical;
  HadamardBound hadamard;
  std::vector<std::string> clauses;  // sufficient conditions that fired
  DimensionVerdict verdict = DimensionVerdict::kUndetermined;
  std::vector<std::string> trace;
};

DimensionReport dimension_certificate(const StateSpace& visible, const StateSpace& hidden,
                                      const DimensionOptions& options = {});

}  // namespace drbm

#endif  // DRBM_DIMENSION_HPP
