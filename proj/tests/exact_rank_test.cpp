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
#include "drbm/exact_rank.hpp"

#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace drbm {
namespace {

IntMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

TEST(ExactRank, SmallCases) {
  EXPECT_EQ(exact_rank(IntMatrix(3, 4)), 0u);
  EXPECT_EQ(exact_rank(from_rows({{1, 2}, {2, 4}})), 1u);
  EXPECT_EQ(exact_rank(from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})), 2u);
  EXPECT_EQ(exact_rank(from_rows({{2, 0}, {0, 3}})), 2u);
}

// A matrix that is singular over Q but looks regular in floating point.
TEST(ExactRank, NearlySingularIsDetected) {
  const long long big = 1LL << 40;
  auto m = from_rows({{big, big + 1}, {big - 1, big}, {2 * big - 1, 2 * big + 1}});
  EXPECT_EQ(exact_rank(m), 2u);
  EXPECT_EQ(exact_rank(from_rows({{big, big + 1}, {2 * big, 2 * big + 2}})), 1u);
}

TEST(ExactRank, AgreesWithRationalOracle) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::uniform_int_distribution<int> dim(1, 9);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = dim(rng), c = dim(rng), k = dim(rng);
    // low-rank product plus occasional dense case
    std::vector<std::vector<long long>> a(r, std::vector<long long>(k)), b(k, std::vector<long long>(c));
    for (auto& row : a)
      for (auto& v : row) v = entry(rng);
    for (auto& row : b)
      for (auto& v : row) v = entry(rng);
    std::vector<std::vector<long long>> p(r, std::vector<long long>(c, 0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t l = 0; l < k; ++l) p[i][j] += a[i][l] * b[l][j];
    auto m = from_rows(p);
    std::size_t expected = testing::rational_rank(p);
    EXPECT_EQ(exact_rank(m), expected);
    EXPECT_EQ(exact_rank(m.transpose()), expected);
    EXPECT_LE(rank_mod_prime(m, 3), expected);
    EXPECT_EQ(rank_mod_prime(m), expected);
  }
}

TEST(ExactRank, ModTwoCanUndercount) {
  auto m = from_rows({{1, 1}, {1, -1}});
  EXPECT_EQ(exact_rank(m), 2u);
  EXPECT_EQ(rank_mod_prime(m, 2), 1u);
}

TEST(ExactRank, ColumnSpan) {
  auto m = from_rows({{1, 0}, {1, 1}, {1, 2}});
  std::vector<std::int64_t> in{3, 5, 7};
  std::vector<std::int64_t> out{1, 0, 0};
  EXPECT_TRUE(in_column_span(m, in));
  EXPECT_FALSE(in_column_span(m, out));
}

TEST(ExactRank, Hstack) {
  auto a = from_rows({{1}, {2}});
  auto b = from_rows({{3, 4}, {5, 6}});
  EXPECT_EQ(a.hstack(b), from_rows({{1, 3, 4}, {2, 5, 6}}));
}

}  // namespace
}  // namespace drbm
