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
#include "drbm/coding.hpp"

#include <algorithm>
#include <functional>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace drbm {
namespace {

// Plain exhaustive maximum code search, no pruning beyond the size bound.
std::size_t brute_max_code(const StateSpace& space, int d) {
  const std::size_t n = space.size();
  std::size_t best = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    best = std::max(best, chosen.size());
    if (chosen.size() + (n - next) <= best) return;
    for (std::size_t v = next; v < n; ++v) {
      bool ok = std::all_of(chosen.begin(), chosen.end(),
                            [&](std::size_t c) { return hamming_distance(space, c, v) >= d; });
      if (!ok) continue;
      chosen.push_back(v);
      rec(v + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

// Smallest k such that some k-subset covers the space within `radius`.
std::size_t brute_covering(const StateSpace& space, int radius) {
  const std::size_t n = space.size();
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(k), true);
    do {
      bool covers = true;
      for (std::size_t x = 0; x < n && covers; ++x) {
        bool hit = false;
        for (std::size_t c = 0; c < n && !hit; ++c) hit = mask[c] && hamming_distance(space, c, x) <= radius;
        covers = hit;
      }
      if (covers) return k;
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return n;
}

TEST(Code, Attributes) {
  StateSpace space({2, 2, 2});
  Code code(space, {7, 0, 0});
  EXPECT_EQ(code.size(), 2u);
  EXPECT_EQ(code.min_distance(), 3);
  EXPECT_EQ(code.covering_radius(), 1);
  EXPECT_TRUE(code.contains(7));
  EXPECT_FALSE(code.contains(3));
  EXPECT_FALSE(Code(space, {5}).min_distance().has_value());
  EXPECT_THROW(Code(space, {8}), std::out_of_range);
}

TEST(MaxCodeSize, GoldenValues) {
  auto a = max_code_size(StateSpace({2, 2, 2}), 2);
  EXPECT_EQ(a.value, 4u);
  EXPECT_TRUE(a.exact);
  auto b = max_code_size(StateSpace({3, 3, 3}), 2);
  EXPECT_EQ(b.value, 9u);
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(Code(StateSpace({3, 3, 3}), b.witness).min_distance(), 2);
}

TEST(MaxCodeSize, AgreesWithExhaustiveSearch) {
  for (auto cards : std::vector<std::vector<int>>{{2, 2, 2, 2}, {3, 2, 2}, {3, 3, 2}, {4, 2, 2}, {2, 2, 2, 2, 2}}) {
    StateSpace space(cards);
    for (int d = 1; d <= static_cast<int>(cards.size()); ++d) {
      auto res = max_code_size(space, d);
      EXPECT_EQ(res.value, brute_max_code(space, d)) << space.label(0) << " d=" << d;
      EXPECT_TRUE(res.exact);
      if (d >= 2 && res.value >= 2) {
        Code w(space, res.witness);
        EXPECT_EQ(w.size(), res.value);
        EXPECT_GE(*w.min_distance(), d);
      }
    }
  }
}

TEST(MaxCodeSize, DistanceTwoClosedForm) {
  EXPECT_EQ(distance_two_code_size(StateSpace({3, 3, 3})), 9u);
  EXPECT_EQ(distance_two_code_size(StateSpace({2, 5, 3})), 6u);
  auto big = max_code_size(StateSpace(std::vector<int>(14, 2)), 2);
  EXPECT_EQ(big.value, 1u << 13);
  EXPECT_TRUE(big.exact);
}

TEST(GilbertVarshamov, HandComputed) {
  // 2^7 / (1 + 7 + 21) rounds up to 5; 2^4 * (1 + 6) < 2^7 gives 16
  EXPECT_EQ(gilbert_varshamov(2, 7, 3), 16u);
  EXPECT_EQ(gilbert_varshamov(2, 5, 3), 4u);
  EXPECT_EQ(gilbert_varshamov(3, 4, 1), 81u);
  // q = 6 is not a prime power: sphere-covering form only, 216 / 16
  EXPECT_EQ(gilbert_varshamov(6, 3, 2), 14u);
  EXPECT_THROW(gilbert_varshamov(2, 80, 3), std::overflow_error);
}

TEST(HammingCode, BinarySevenFourIsPerfect) {
  Code code = hamming_code(2, 3);
  StateSpace space(std::vector<int>(7, 2));
  EXPECT_EQ(code.space(), space);
  EXPECT_EQ(code.size(), 16u);
  EXPECT_EQ(code.min_distance(), 3);
  // balls of radius one tile {0,1}^7
  std::vector<int> hits(space.size(), 0);
  for (std::size_t w : code.words())
    for (std::size_t x = 0; x < space.size(); ++x)
      if (hamming_distance(space, w, x) <= 1) ++hits[x];
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_EQ(code.covering_radius(), 1);
}

TEST(HammingCode, TernaryAndQuaternary) {
  Code ternary = hamming_code(3, 2);
  EXPECT_EQ(ternary.space().num_vars(), 4u);
  EXPECT_EQ(ternary.size(), 9u);
  EXPECT_EQ(ternary.min_distance(), 3);
  EXPECT_EQ(ternary.covering_radius(), 1);
  Code quaternary = hamming_code(4, 2);
  EXPECT_EQ(quaternary.space().num_vars(), 5u);
  EXPECT_EQ(quaternary.size(), 64u);
  EXPECT_EQ(quaternary.min_distance(), 3);
  EXPECT_THROW(hamming_code(6, 2), std::invalid_argument);
}

TEST(MaxCodeSize, PerfectCodeShortcut) {
  auto res = max_code_size(StateSpace(std::vector<int>(15, 2)), 3);
  EXPECT_EQ(res.value, 2048u);
  EXPECT_TRUE(res.exact);
}

TEST(Covering, GoldenAndExhaustive) {
  auto k = min_covering_size(StateSpace({2, 2, 2}), 1);
  EXPECT_EQ(k.value, 2u);
  EXPECT_TRUE(k.exact);
  for (auto cards : std::vector<std::vector<int>>{{2, 2}, {3, 2}, {2, 2, 3}, {3, 3}, {2, 2, 2, 2}}) {
    StateSpace space(cards);
    auto res = min_covering_size(space, 1);
    EXPECT_EQ(res.value, brute_covering(space, 1)) << space.label(0);
    EXPECT_LE(Code(space, res.witness).covering_radius(), 1);
  }
}

TEST(Covering, SstFormulaMatchesSearch) {
  for (int s = 1; s <= 3; ++s)
    for (int t = std::max(s, 2); t <= 5; ++t) {
      std::vector<int> cards;
      if (s >= 2) cards = {s, s, t};
      else cards = {t};
      auto res = min_covering_size(StateSpace(cards), 1);
      EXPECT_TRUE(res.exact);
      EXPECT_EQ(res.value, covering_formula_sst(s, t)) << s << "," << t;
    }
}

TEST(BallPacking, DisjointWithFullRankComplement) {
  StateSpace space(std::vector<int>(5, 2));
  auto packing = ball_packing(space, {1});
  ASSERT_TRUE(packing.has_value());
  ASSERT_EQ(packing->centers.size(), 1u);
  std::vector<std::size_t> rest;
  for (std::size_t x = 0; x < space.size(); ++x)
    if (hamming_distance(space, packing->centers[0], x) > 1) rest.push_back(x);
  EXPECT_EQ(statistics_rank(space, rest), packing->complement_rank);
  EXPECT_TRUE(packing->complement_full_rank);

  auto two = ball_packing(space, {1, 1});
  ASSERT_TRUE(two.has_value());
  EXPECT_GE(hamming_distance(space, two->centers[0], two->centers[1]), 3);
  EXPECT_FALSE(ball_packing(StateSpace({2, 2, 2}), {1, 1, 1}).has_value());
}

TEST(StatisticsRank, MatchesOracle) {
  StateSpace space({3, 2, 2});
  std::vector<std::size_t> states{0, 1, 5, 7, 11};
  std::vector<std::vector<long long>> rows(space.stat_dim(), std::vector<long long>(states.size()));
  for (std::size_t c = 0; c < states.size(); ++c) {
    Eigen::VectorXd col = testing::stat_column(space.cards(), space.state(states[c]));
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r][c] = static_cast<long long>(col(static_cast<Eigen::Index>(r)));
  }
  EXPECT_EQ(statistics_rank(space, states), testing::rational_rank(rows));
}

}  // namespace
}  // namespace drbm
