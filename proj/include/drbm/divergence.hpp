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

#ifndef DRBM_DIVERGENCE_HPP
#define DRBM_DIVERGENCE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "drbm/models.hpp"
#include "drbm/statespace.hpp"

namespace drbm {

// D(q || p) = sum_x q(x) log(q(x) / p(x)); +inf when supp(q) is not inside supp(p).
double kl_divergence(const Distribution& q, const Distribution& p);

// Distributions constant on the blocks {x_F} x X_free, F = fixed variables.
class PartitionModel {
 public:
  PartitionModel(StateSpace space, std::vector<std::size_t> fixed);

  const StateSpace& space() const { return space_; }
  const std::vector<std::size_t>& fixed() const { return fixed_; }
  std::size_t num_blocks() const { return num_blocks_; }
  std::size_t block_size() const { return space_.size() / num_blocks_; }
  std::size_t block_of(std::size_t x) const;

 private:
  StateSpace space_;
  std::vector<std::size_t> fixed_;  // sorted
  std::size_t num_blocks_ = 1;
};

// Information projection: block masses kept, uniform inside blocks.
Distribution project_to_partition(const Distribution& p, const PartitionModel& model);

struct KlBound {
  double bound = 0.0;
  std::vector<std::size_t> lambda;  // variables entering the bound (0-based)
  std::vector<std::size_t> fixed;   // fixed variables of the partition model attaining it
  bool universal = false;
};

std::size_t hidden_dim(const StateSpace& hidden);  // d_Y

KlBound kl_upper_bound(const StateSpace& visible, const StateSpace& hidden);

enum class Universality { kUniversal, kNotUniversal, kUnknown };

std::string to_string(Universality u);

struct UniversalityVerdict {
  Universality verdict = Universality::kUnknown;
  std::string reason;
  std::size_t d_y = 0;
  std::size_t code_size = 0;  // A(X,2)
};

UniversalityVerdict universality_verdict(const StateSpace& visible, const StateSpace& hidden);

struct FitOptions {
  std::size_t restarts = 20;
  std::size_t max_iterations = 5000;
  double gradient_tolerance = 1e-8;
  double target_loss = 1e-9;
  std::uint64_t seed = 0;
};

struct FitResult {
  ThetaMatrix theta;
  double divergence = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
};

// Minimises D(target || p_θ) over θ with L-BFGS and backtracking.
FitResult fit_rbm(const Distribution& target, const StateSpace& hidden, const FitOptions& options = {});

struct EmpiricalDivergence {
  double max_divergence = 0.0;
  std::size_t worst_target = 0;
  double worst_gradient_norm = 0.0;
  std::vector<double> per_target;  // point masses first, then Dirichlet draws
};

EmpiricalDivergence empirical_max_divergence(const StateSpace& visible, const StateSpace& hidden,
                                             std::size_t dirichlet_targets = 10,
                                             const FitOptions& options = {});

std::vector<Distribution> divergence_targets(const StateSpace& visible, std::size_t dirichlet_targets,
                                             std::uint64_t seed);

struct ProductComponent {
  double weight = 0.0;
  std::vector<std::vector<double>> marginals;  // one distribution per variable
};

struct PartitionPayload {
  PartitionModel model;
  std::vector<double> block_masses;  // indexed by block_of
};

struct LineSegment {
  std::size_t free_var = 0;
  State anchor;
};

struct LineSupportPayload {
  Distribution target;
  std::vector<LineSegment> lines;  // found greedily when empty
};

using WitnessPayload = std::variant<std::vector<ProductComponent>, PartitionPayload, LineSupportPayload>;

ThetaMatrix disjoint_mixture_witness(const StateSpace& visible, const StateSpace& hidden,
                                     const std::vector<ProductComponent>& components);
ThetaMatrix partition_witness(const StateSpace& visible, const StateSpace& hidden,
                              const PartitionPayload& payload);
ThetaMatrix line_support_witness(const StateSpace& visible, const StateSpace& hidden,
                                 const LineSupportPayload& payload);
ThetaMatrix submodel_witness(const StateSpace& visible, const StateSpace& hidden,
                             const WitnessPayload& payload);

Distribution product_mixture(const StateSpace& space, const std::vector<ProductComponent>& components);

}  // namespace drbm

#endif  // DRBM_DIVERGENCE_HPP
