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

#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace drbm {

using boost::multiprecision::cpp_int;

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::hstack(const IntMatrix& other) const {
  if (other.rows_ != rows_) throw std::invalid_argument("hstack: row counts differ");
  IntMatrix out(rows_, cols_ + other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < other.cols_; ++c) out(r, cols_ + c) = other(r, c);
  }
  return out;
}

std::size_t exact_rank(const IntMatrix& input) {
  // Eliminate along the shorter side.
  const IntMatrix& m0 = input;
  const bool flip = input.rows() > input.cols();
  const IntMatrix t = flip ? input.transpose() : IntMatrix{};
  const IntMatrix& m = flip ? t : m0;

  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<cpp_int> a(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a[r * cols + c] = m(r, c);

  cpp_int prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (a[r * cols + c] != 0) {
        pivot = r;
        break;
      }
    if (pivot == rows) continue;
    if (pivot != rank)
      for (std::size_t j = c; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
    const cpp_int p = a[rank * cols + c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const cpp_int f = a[r * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        cpp_int& x = a[r * cols + j];
        x = (p * x - f * a[rank * cols + j]) / prev;
      }
      a[r * cols + c] = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

std::size_t rank_mod_prime(const IntMatrix& m, std::uint32_t p) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::uint64_t mod = p;
  std::vector<std::uint64_t> a(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::int64_t v = m(r, c) % static_cast<std::int64_t>(mod);
      if (v < 0) v += static_cast<std::int64_t>(mod);
      a[r * cols + c] = static_cast<std::uint64_t>(v);
    }
  auto inverse = [mod](std::uint64_t x) {
    std::uint64_t result = 1, base = x, e = mod - 2;
    while (e) {
      if (e & 1) result = result * base % mod;
      base = base * base % mod;
      e >>= 1;
    }
    return result;
  };
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (a[r * cols + c] != 0) {
        pivot = r;
        break;
      }
    if (pivot == rows) continue;
    if (pivot != rank)
      for (std::size_t j = c; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
    const std::uint64_t inv = inverse(a[rank * cols + c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const std::uint64_t f = a[r * cols + c] * inv % mod;
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        a[r * cols + j] = (a[r * cols + j] + (mod - f) * a[rank * cols + j]) % mod;
    }
    ++rank;
  }
  return rank;
}

bool in_column_span(const IntMatrix& m, std::span<const std::int64_t> v) {
  if (v.size() != m.rows()) throw std::invalid_argument("in_column_span: length mismatch");
  IntMatrix col(m.rows(), 1);
  for (std::size_t r = 0; r < m.rows(); ++r) col(r, 0) = v[r];
  return exact_rank(m.hstack(col)) == exact_rank(m);
}

}  // namespace drbm
