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

#ifndef DRBM_CODING_HPP
#define DRBM_CODING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drbm/statespace.hpp"

namespace drbm {

// A set of words in a product space under the Hamming metric.
class Code {
 public:
  Code(StateSpace space, std::vector<std::size_t> words);

  const StateSpace& space() const { return space_; }
  const std::vector<std::size_t>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::size_t state) const;

  // Minimum pairwise distance; empty for codes with fewer than two words.
  std::optional<int> min_distance() const { return min_distance_; }
  int covering_radius() const { return covering_radius_; }

 private:
  StateSpace space_;
  std::vector<std::size_t> words_;  // sorted, unique
  std::optional<int> min_distance_;
  int covering_radius_ = 0;
};

// Budget for the exact branch-and-bound searches, in search nodes.
struct SearchBudget {
  std::uint64_t max_nodes = 50'000'000;
};

struct CodeSizeResult {
  std::size_t value = 0;
  bool exact = false;
  std::string method;               // "search", "perfect-code", "closed-form", "lower-bound"
  std::vector<std::size_t> witness;  // a code of size `value` when available
};

// A(X, d): largest code of minimum distance >= d.
CodeSizeResult max_code_size(const StateSpace& space, int d, SearchBudget budget = {});

// |X| / max_i r_i, the size of the largest distance-2 code (parity
// construction on the largest alphabet; matches the deletion bound).
std::size_t distance_two_code_size(const StateSpace& space);

// max(q^n / V_{d-1}, q^k) with k the largest integer such that
// q^k * sum_{j<=d-2} C(n-1, j)(q-1)^j < q^n (second form only for prime
// powers q).  Throws std::overflow_error when q^n does not fit in 64 bits.
std::uint64_t gilbert_varshamov(int q, int n, int d);

bool is_prime_power(int q);

// q-ary Hamming code of redundancy r (length (q^r - 1)/(q - 1)).  Supports
// prime powers q <= 9.
Code hamming_code(int q, int r);

struct CoveringResult {
  std::size_t value = 0;
  bool exact = false;
  std::vector<std::size_t> witness;
};

// K(X, radius): smallest code with covering radius <= radius.
CoveringResult min_covering_size(const StateSpace& space, int radius, SearchBudget budget = {});

// Closed form for X = [s] x [s] x [t], s <= t, radius one.
std::size_t covering_formula_sst(int s, int t);

struct BallPacking {
  std::vector<std::size_t> centers;
  std::size_t complement_rank = 0;
  bool complement_full_rank = false;  // rank == d_X
};

// Pairwise disjoint Hamming balls with the given radii, preferring a
// placement whose uncovered complement has full rank.  Empty when no
// placement is found.
std::optional<BallPacking> ball_packing(const StateSpace& space, const std::vector<int>& radii,
                                        SearchBudget budget = {});

// Exact rank of the columns A^(X)_x for the listed states.
std::size_t statistics_rank(const StateSpace& space, const std::vector<std::size_t>& states);

}  // namespace drbm

#endif  // DRBM_CODING_HPP
