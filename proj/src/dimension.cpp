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

#include "drbm/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>

#include "drbm/coding.hpp"

namespace drbm {

std::size_t exp_family_dimension(const StateSpace& visible, const StateSpace& hidden) {
  return visible.stat_dim() * hidden.stat_dim() - 1;
}

std::size_t expected_dimension(const StateSpace& visible, const StateSpace& hidden) {
  return std::min(exp_family_dimension(visible, hidden), visible.size() - 1);
}

Eigen::MatrixXd log_marginal_jacobian(const DiscreteRBM& rbm) {
  const SufficientStatistics& vs = rbm.visible_stats();
  const StateSpace& h = rbm.hidden();
  const auto dx = static_cast<Eigen::Index>(vs.rows());
  const auto dy = static_cast<Eigen::Index>(rbm.hidden_stats().rows());
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(vs.cols()), dx * dy);
  Eigen::VectorXd mu(dy);
  std::vector<double> terms;
  for (std::size_t x = 0; x < vs.cols(); ++x) {
    const Eigen::VectorXd v = rbm.project_visible(x);
    // conditional expectations of the hidden statistics given x
    mu(0) = 1.0;
    for (std::size_t j = 0; j < h.num_vars(); ++j) {
      terms.assign(1, 0.0);
      for (int s = 1; s < h.card(j); ++s)
        terms.push_back(v(static_cast<Eigen::Index>(indicator_row(h, static_cast<int>(j), s))));
      const double lse = log_sum_exp(terms);
      for (int s = 1; s < h.card(j); ++s) {
        const auto r = static_cast<Eigen::Index>(indicator_row(h, static_cast<int>(j), s));
        mu(r) = std::exp(v(r) - lse);
      }
    }
    for (Eigen::Index c = 0; c < dx; ++c) {
      const double a = vs.at(static_cast<std::size_t>(c), x);
      jac.row(static_cast<Eigen::Index>(x)).segment(c * dy, dy) = a * mu.transpose();
    }
  }
  return jac;
}

NumericalRank jacobian_numerical_rank(const Eigen::MatrixXd& jacobian) {
  Eigen::MatrixXd centred = jacobian.rowwise() - jacobian.colwise().mean();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred);
  const Eigen::VectorXd& s = svd.singularValues();
  NumericalRank out;
  if (s.size() == 0 || s(0) == 0.0) {
    out.gap = std::numeric_limits<double>::infinity();
    out.certain = true;
    return out;
  }
  const double tol = kRankThreshold * s(0);
  std::size_t r = 0;
  while (r < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(r)) > tol) ++r;
  out.rank = r;
  if (r == static_cast<std::size_t>(s.size()) || s(static_cast<Eigen::Index>(r)) == 0.0)
    out.gap = std::numeric_limits<double>::infinity();
  else
    out.gap = s(static_cast<Eigen::Index>(r - 1)) / s(static_cast<Eigen::Index>(r));
  out.certain = out.gap >= kRequiredGap;
  return out;
}

JacobianRank jacobian_rank(const StateSpace& visible, const StateSpace& hidden, std::size_t samples,
                           std::uint64_t seed) {
  if (visible.size() > kExactCap) throw InstanceTooLarge("visible space exceeds the exact cap");
  JacobianRank out;
  out.samples = samples;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto dy = static_cast<Eigen::Index>(hidden.stat_dim());
  const auto dx = static_cast<Eigen::Index>(visible.stat_dim());
  bool have_certain = false;
  std::size_t best_any = 0;
  double best_any_gap = 0.0;
  for (std::size_t sample = 0; sample < samples; ++sample) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      Eigen::MatrixXd theta(dy, dx);
      for (Eigen::Index c = 0; c < dx; ++c)
        for (Eigen::Index r = 0; r < dy; ++r) theta(r, c) = gauss(rng);
      const DiscreteRBM rbm(visible, hidden, ThetaMatrix(theta));
      const NumericalRank nr = jacobian_numerical_rank(log_marginal_jacobian(rbm));
      ++out.draws;
      if (nr.rank > best_any || out.draws == 1) {
        best_any = std::max(best_any, nr.rank);
        best_any_gap = nr.gap;
      }
      if (!nr.certain) continue;
      if (!have_certain || nr.rank > out.rank) {
        out.rank = nr.rank;
        out.gap = nr.gap;
      }
      have_certain = true;
      break;
    }
  }
  out.certain = have_certain;
  if (!have_certain) {
    out.rank = best_any;
    out.gap = best_any_gap;
  }
  return out;
}

MixtureDimension numerical_mixture_dimension(const StateSpace& visible, std::uint64_t seed) {
  auto cache = std::make_shared<std::map<std::size_t, std::size_t>>();
  return [visible, seed, cache](std::size_t k) {
    if (k <= 1) return visible.stat_dim() - 1;
    auto it = cache->find(k);
    if (it != cache->end()) return it->second;
    const std::size_t r =
        jacobian_rank(visible, StateSpace(std::vector<int>{static_cast<int>(k)}), 5, seed).rank;
    (*cache)[k] = r;
    return r;
  };
}

HadamardBound hadamard_upper_bound(const StateSpace& visible, const StateSpace& hidden,
                                   const MixtureDimension& mixture_dim) {
  std::vector<std::size_t> units;
  for (std::size_t j = 0; j < hidden.num_vars(); ++j)
    if (hidden.card(j) >= 2) units.push_back(j);
  const std::size_t ambient = visible.size() - 1;
  HadamardBound out;
  if (units.empty()) {
    out.bound = std::min(visible.stat_dim() - 1, ambient);
    return out;
  }
  out.bound = std::numeric_limits<std::size_t>::max();
  for (std::size_t i : units) {
    std::size_t b = mixture_dim(static_cast<std::size_t>(hidden.card(i))) + (units.size() - 1);
    for (std::size_t j : units)
      if (j != i) b += mixture_dim(static_cast<std::size_t>(hidden.card(j) - 1));
    if (b < out.bound) {
      out.bound = b;
      out.unit = i;
    }
  }
  out.bound = std::min(out.bound, ambient);
  return out;
}

std::string to_string(DimensionVerdict v) {
  switch (v) {
    case DimensionVerdict::kExpected:
      return "expected-dimension";
    case DimensionVerdict::kDefective:
      return "defective";
    case DimensionVerdict::kFullDimensional:
      return "full-dimensional";
    case DimensionVerdict::kUndetermined:
      break;
  }
  return "undetermined";
}

DimensionReport dimension_certificate(const StateSpace& visible, const StateSpace& hidden,
                                      const DimensionOptions& options) {
  if (visible.size() > kExactCap) throw InstanceTooLarge("visible space exceeds the exact cap");
  DimensionReport rep;
  rep.exp_family = exp_family_dimension(visible, hidden);
  rep.ambient = visible.size() - 1;
  rep.expected = std::min(rep.exp_family, rep.ambient);
  const std::size_t m = hidden.num_vars();
  std::size_t proven = 0;
  std::string proof;
  auto prove = [&](std::size_t value, const std::string& why) {
    if (value > proven || proof.empty()) {
      proven = std::max(proven, value);
      proof = why;
    }
  };

  const bool binary_hidden =
      m > 0 && std::all_of(hidden.cards().begin(), hidden.cards().end(), [](int s) { return s == 2; });
  if (binary_hidden && visible.num_vars() >= 1) {
    const auto a3 = max_code_size(visible, 3, SearchBudget{2'000'000});
    if (m + 1 <= a3.value) {
      rep.clauses.push_back("binary-hidden: m+1 = " + std::to_string(m + 1) + " <= A(X,3) >= " +
                            std::to_string(a3.value));
      prove(rep.exp_family, rep.clauses.back());
    }
    const auto k1 = min_covering_size(visible, 1, SearchBudget{2'000'000});
    if (m + 1 >= k1.value) {
      rep.clauses.push_back("binary-hidden: m+1 = " + std::to_string(m + 1) + " >= K(X,1) <= " +
                            std::to_string(k1.value));
      prove(rep.ambient, rep.clauses.back());
    }
  }
  {
    std::vector<int> radii;
    for (std::size_t j = 0; j < m; ++j)
      if (hidden.card(j) >= 2) radii.push_back(2 * hidden.card(j) - 3);
    std::sort(radii.rbegin(), radii.rend());
    if (!radii.empty()) {
      const auto packing = ball_packing(visible, radii, SearchBudget{2'000'000});
      if (packing && packing->complement_full_rank) {
        rep.clauses.push_back("disjoint balls of radii 2|Y_j|-3 with full-rank complement");
        prove(rep.exp_family, rep.clauses.back());
      }
    }
    if (m > 0) {
      const auto k1 = min_covering_size(visible, 1, SearchBudget{2'000'000});
      if (m >= k1.value) {
        rep.clauses.push_back("m = " + std::to_string(m) + " radius-one balls cover X");
        prove(rep.ambient, rep.clauses.back());
      }
    }
  }

  rep.tropical = tropical_dimension(visible, hidden, options.tropical_budget, options.seed);
  rep.jacobian = jacobian_rank(visible, hidden, options.samples, options.seed);
  rep.hadamard = hadamard_upper_bound(visible, hidden, numerical_mixture_dimension(visible, options.seed));

  rep.trace.push_back("expected = min(" + std::to_string(rep.exp_family) + ", " + std::to_string(rep.ambient) +
                      ") = " + std::to_string(rep.expected));
  rep.trace.push_back("tropical rank search: " + std::to_string(rep.tropical.value) + " via " + rep.tropical.family +
                      (rep.tropical.exact ? " (exact)" : " (lower bound)"));
  rep.trace.push_back("jacobian rank: " + std::to_string(rep.jacobian.rank) +
                      (rep.jacobian.certain ? "" : " (rank uncertain)"));
  rep.trace.push_back("hadamard upper bound: " + std::to_string(rep.hadamard.bound));

  if (rep.tropical.value > rep.jacobian.rank || rep.jacobian.rank > rep.expected)
    throw std::logic_error("dimension chain violated: tropical " + std::to_string(rep.tropical.value) +
                           ", jacobian " + std::to_string(rep.jacobian.rank) + ", expected " +
                           std::to_string(rep.expected));
  if (proven > rep.expected) throw std::logic_error("certificate exceeds the expected dimension");

  if (rep.tropical.value >= proven && rep.tropical.value > 0) prove(rep.tropical.value, "tropical rank certificate");
  const auto full_or_expected = rep.exp_family <= rep.ambient ? DimensionVerdict::kExpected
                                                              : DimensionVerdict::kFullDimensional;
  if (proven == rep.expected) {
    rep.verdict = full_or_expected;
    rep.trace.push_back("proved: " + proof);
    if (rep.jacobian.certain && rep.jacobian.rank != rep.expected)
      throw std::logic_error("certificate contradicts the jacobian rank");
  } else if (rep.hadamard.bound < rep.expected) {
    rep.verdict = DimensionVerdict::kDefective;
    rep.trace.push_back("hadamard bound below expected");
  } else if (rep.jacobian.certain && rep.jacobian.rank == rep.expected) {
    rep.verdict = full_or_expected;
    rep.trace.push_back("numerical: jacobian rank equals expected");
  } else if (rep.jacobian.certain && rep.jacobian.rank < rep.expected) {
    rep.verdict = DimensionVerdict::kDefective;
    rep.trace.push_back("numerical: jacobian rank below expected");
  } else {
    rep.verdict = DimensionVerdict::kUndetermined;
  }
  return rep;
}

}  // namespace drbm
