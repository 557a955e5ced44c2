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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace drbm {
namespace {

using testing::stat_column;

// Brute force: states x with ⟨v, A_x⟩ maximal.
std::vector<std::size_t> brute_argmax(const StateSpace& space, const Eigen::VectorXd& v) {
  std::vector<double> score(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) score[x] = v.dot(stat_column(space.cards(), space.state(x)));
  const double top = *std::max_element(score.begin(), score.end());
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < space.size(); ++x)
    if (score[x] >= top - 1e-12) out.push_back(x);
  return out;
}

std::vector<std::size_t> brute_strong_modes(const Distribution& p) {
  std::vector<std::size_t> out;
  const auto& space = p.space();
  for (std::size_t x = 0; x < space.size(); ++x) {
    double nb = 0.0;
    for (std::size_t y = 0; y < space.size(); ++y)
      if (hamming_distance(space, x, y) == 1) nb += p[y];
    if (p[x] > nb) out.push_back(x);
  }
  return out;
}

TEST(NormalCone, GenericDirectionsPickOneVertex) {
  std::mt19937_64 rng(1);
  StateSpace space({3, 2, 4});
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd v = testing::random_matrix(rng, space.stat_dim(), 1);
    auto top = brute_argmax(space, v);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(maximizing_states(space, v), top);
    std::size_t inside = 0;
    for (std::size_t x = 0; x < space.size(); ++x) {
      bool strict = normal_cone_contains(space, x, v, true);
      inside += strict;
      EXPECT_EQ(strict, x == top[0]);
      EXPECT_EQ(cone_margin(space, x, v) > 0.0, strict);
    }
    EXPECT_EQ(inside, 1u);
  }
}

TEST(NormalCone, TiesAreReported) {
  StateSpace space({2, 2});
  Eigen::Vector3d v(0.0, 0.0, 1.0);  // indifferent in x2
  auto top = maximizing_states(space, v);
  EXPECT_EQ(top, brute_argmax(space, v));
  EXPECT_EQ(top.size(), 2u);
  EXPECT_TRUE(normal_cone_contains(space, top[0], v, false));
  EXPECT_FALSE(normal_cone_contains(space, top[0], v, true));
}

Eigen::MatrixXd prism_theta() {
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(5, 4);
  theta.bottomRows(4) << 3, -2, -2, -2,
                         1, 2, -2, -2,
                         1, -2, -2, 2,
                         1, -2, 2, -2;
  return theta;
}

TEST(Slicing, PrismIntoFourCube) {
  StateSpace prism({3, 2}), cube({2, 2, 2, 2});
  Eigen::MatrixXd theta = prism_theta();
  // columns in the published order: (x1, x2) = 21, 11, 01, 20, 10, 00
  const std::vector<State> order{{2, 1}, {1, 1}, {0, 1}, {2, 0}, {1, 0}, {0, 0}};
  Eigen::MatrixXd published(4, 6);
  published << -1, -1, 1, 1, 1, 3,
               1, 1, 3, -1, -1, 1,
               -3, 1, -1, -1, 3, 1,
               1, -3, -1, 3, -1, 1;
  std::set<std::vector<bool>> orthants;
  for (std::size_t c = 0; c < order.size(); ++c) {
    Eigen::VectorXd image = theta.bottomRows(4) * stat_column(prism.cards(), order[c]);
    EXPECT_EQ(image, Eigen::VectorXd(published.col(static_cast<Eigen::Index>(c))));
    std::vector<bool> sign;
    int positive = 0;
    for (Eigen::Index i = 0; i < 4; ++i) {
      EXPECT_NE(image(i), 0.0);
      sign.push_back(image(i) > 0);
      positive += image(i) > 0;
    }
    EXPECT_EQ(positive % 2, 0);
    orthants.insert(sign);
  }
  EXPECT_EQ(orthants.size(), 6u);

  auto s = slicing_from_map(prism, cube, theta);
  ASSERT_TRUE(s.has_value());
  std::set<std::size_t> cells(s->cell.begin(), s->cell.end());
  EXPECT_EQ(cells.size(), 6u);
  DiscreteRBM rbm(prism, cube, ThetaMatrix(theta));
  for (std::size_t x = 0; x < prism.size(); ++x) {
    EXPECT_EQ(inference_function(rbm, x), std::vector<std::size_t>{s->cell[x]});
    // hidden unit j is on exactly when its row of Theta A_x is positive
    State y = cube.state(s->cell[x]);
    Eigen::VectorXd image = theta * stat_column(prism.cards(), prism.state(x));
    for (int j = 0; j < 4; ++j) EXPECT_EQ(y[j] == 1, image(static_cast<Eigen::Index>(indicator_row(cube, j, 1))) > 0);
  }
}

TEST(Slicing, NonGenericMapIsRejected) {
  StateSpace vis({2, 2}), hid({2});
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(2, 3);
  EXPECT_FALSE(slicing_from_map(vis, hid, theta).has_value());
  EXPECT_THROW(slicing_from_map(vis, hid, Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
}

TEST(Inference, MatchesEnergyArgmax) {
  std::mt19937_64 rng(2);
  StateSpace vis({3, 2}), hid({2, 3});
  DiscreteRBM rbm(vis, hid, ThetaMatrix(testing::random_matrix(rng, hid.stat_dim(), vis.stat_dim())));
  for (std::size_t x = 0; x < vis.size(); ++x) {
    std::size_t best = 0;
    for (std::size_t y = 1; y < hid.size(); ++y)
      if (rbm.energy(x, y) > rbm.energy(x, best)) best = y;
    EXPECT_EQ(inference_state(rbm, x), best);
  }
}

TEST(ParallelSlicing, CellsFollowThresholds) {
  StateSpace space({3, 3});
  Eigen::VectorXd u(5);
  u << 0.0, 1.0, 0.5, 2.0, 1.1;
  std::vector<double> thresholds{0.7, 1.8, 2.6};
  auto ps = parallel_slicing(space, 4, u, thresholds);
  auto intervals = slicing_intervals(ps.r, ps.b);
  for (std::size_t x = 0; x < space.size(); ++x) {
    double z = u.dot(stat_column(space.cards(), space.state(x)));
    std::size_t expected = std::count_if(thresholds.begin(), thresholds.end(), [&](double t) { return z > t; });
    std::size_t cell = ps.slicing.cell[x];
    EXPECT_EQ(cell, expected);
    double lambda = ps.lambda(static_cast<Eigen::Index>(x));
    EXPECT_DOUBLE_EQ(lambda, z - thresholds[0] + 1.0);
    EXPECT_GT(lambda, intervals[cell].first);
    EXPECT_LT(lambda, intervals[cell].second);
  }
  auto from_map = slicing_from_map(space, ps.slicing.hidden, ps.slicing.theta);
  ASSERT_TRUE(from_map.has_value());
  EXPECT_EQ(from_map->cell, ps.slicing.cell);
  EXPECT_THROW(parallel_slicing(space, 4, u, {0.7, 0.6, 2.6}), std::invalid_argument);
  EXPECT_THROW(parallel_slicing(space, 2, u, {1.0}), NonGenericSlicing);
}

TEST(ParallelSlicing, IntervalsPartitionTheLine) {
  Eigen::Vector3d r(0, 1, 2), b(0, 1, 3);
  auto iv = slicing_intervals(r, b);
  EXPECT_EQ(iv[0].second, 1.0);
  EXPECT_EQ(iv[1].first, 1.0);
  EXPECT_EQ(iv[1].second, 2.0);
  EXPECT_EQ(iv[2].first, 2.0);
}

TEST(Realize, SeparableAndXor) {
  StateSpace square({2, 2});
  std::vector<std::size_t> corner{0, 0, 0, 1};
  auto w = realize_partition(square, 2, corner);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->row(0).isZero());
  auto s = slicing_from_map(square, StateSpace({2}), *w);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->cell, corner);
  EXPECT_FALSE(realize_partition(square, 2, {0, 1, 1, 0}).has_value());

  StateSpace prism({3, 2});
  std::vector<std::size_t> three{0, 0, 1, 1, 2, 2};
  auto w3 = realize_partition(prism, 3, three);
  ASSERT_TRUE(w3.has_value());
  auto s3 = slicing_from_map(prism, StateSpace({3}), *w3);
  ASSERT_TRUE(s3.has_value());
  EXPECT_EQ(s3->cell, three);
}

TEST(Enumerate, SquareHasFourteenBinarySlicings) {
  // Cover's count of linear dichotomies of 4 points in general position in the plane
  const int expected = 2 * (1 + 3 + 3);
  auto slicings = enumerate_slicings(StateSpace({2, 2}), 2, 4000, 3);
  EXPECT_EQ(static_cast<int>(slicings.size()), expected);
  for (const auto& s : slicings) {
    auto again = slicing_from_map(s.visible, s.hidden, s.theta);
    ASSERT_TRUE(again.has_value());
    EXPECT_EQ(again->cell, s.cell);
  }
}

TEST(StrongModes, AgreeWithDefinition) {
  std::mt19937_64 rng(4);
  std::gamma_distribution<double> g(0.3, 1.0);
  for (int t = 0; t < 100; ++t) {
    StateSpace space(testing::random_cards(rng, 4, 3, 54));
    std::vector<double> w(space.size());
    double total = 0.0;
    for (auto& v : w) total += v = g(rng) + 1e-300;
    for (auto& v : w) v /= total;
    Distribution p(space, w);
    auto brute = brute_strong_modes(p);
    EXPECT_EQ(strong_modes(p), brute);
    EXPECT_EQ(strong_modes_by_line_sums(p), brute);
  }
}

TEST(StrongModes, CertificateForRepetitionCode) {
  StateSpace vis({2, 2, 2, 2}), hid({2});
  Code code(vis, {0, 15});
  auto cert = strong_mode_certificate(vis, hid, code);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->modes, code.words());
  DiscreteRBM rbm(vis, hid, cert->theta);
  EXPECT_EQ(strong_modes(rbm_marginal(rbm)), code.words());
  EXPECT_TRUE(hidden_vertices_cover(rbm, code.words()));
}

TEST(StrongModes, TooManyWordsHasNoCertificate) {
  StateSpace vis({2, 2, 2}), hid({2});
  Code code(vis, {0, 3, 5, 6});
  EXPECT_FALSE(strong_mode_certificate(vis, hid, code, 20).has_value());
}

TEST(StrongModes, MixtureCap) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> kk(2, 4), nn(2, 4);
  for (int t = 0; t < 200; ++t) {
    std::size_t k = kk(rng);
    StateSpace vis(std::vector<int>(nn(rng), 2));
    DiscreteRBM rbm(vis, StateSpace({static_cast<int>(k)}),
                    ThetaMatrix(testing::random_matrix(rng, k, vis.stat_dim(), 4.0)));
    EXPECT_LE(strong_modes(rbm_marginal(rbm)).size(), k);
  }
}

}  // namespace
}  // namespace drbm
