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

#ifndef DRBM_EXACT_RANK_HPP
#define DRBM_EXACT_RANK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace drbm {

// Small dense integer matrix, row-major.  Used for the 0/1 statistics blocks
// whose rank has to be known exactly.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  // Appends the columns of other (same row count).
  IntMatrix hstack(const IntMatrix& other) const;

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

// Rank over the rationals by fraction-free (Bareiss) elimination in
// arbitrary precision.  Exact.
std::size_t exact_rank(const IntMatrix& m);

// Rank over GF(p).  Never exceeds exact_rank; used as a fast filter.
std::size_t rank_mod_prime(const IntMatrix& m, std::uint32_t p = 2147483647u);

// True iff v lies in the rational column span of m.
bool in_column_span(const IntMatrix& m, std::span<const std::int64_t> v);

}  // namespace drbm

#endif  // DRBM_EXACT_RANK_HPP
