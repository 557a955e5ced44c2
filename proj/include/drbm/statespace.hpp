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

#ifndef DRBM_STATESPACE_HPP
#define DRBM_STATESPACE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace drbm {

// Joint state of a collection of finite variables, one entry per variable.
using State = std::vector<int>;

// Largest number of joint columns any exact (fully enumerating) operation
// will touch.
inline constexpr std::size_t kExactCap = std::size_t{1} << 24;

// Raised when an instance needs more joint states than kExactCap.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite product space X = X_1 x ... x X_n with X_i = {0, ..., r_i - 1}.
//
// Joint states are enumerated lexicographically with variable 1 (index 0)
// most significant, so state (x_1, ..., x_n) has index
// sum_i x_i * prod_{l > i} r_l.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::vector<int> cards);

  std::size_t num_vars() const { return cards_.size(); }
  int card(std::size_t i) const { return cards_.at(i); }
  const std::vector<int>& cards() const { return cards_; }

  // |X|.  Throws InstanceTooLarge if the product does not fit in 62 bits.
  std::size_t size() const { return size_; }

  // d_X = 1 + sum_i (r_i - 1).
  std::size_t stat_dim() const { return stat_dim_; }

  std::size_t index(std::span<const int> x) const;
  State state(std::size_t index) const;

  // Label used in CSV headers and JSON dumps: digits concatenated when every
  // cardinality is at most 10, dot-separated otherwise.
  std::string label(std::size_t index) const;

  // Cartesian product: variables of *this first, then those of other.
  StateSpace concat(const StateSpace& other) const;

  bool operator==(const StateSpace& other) const { return cards_ == other.cards_; }

 private:
  std::vector<int> cards_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  std::size_t stat_dim_ = 0;
};

// Number of coordinates in which x and y differ.
int hamming_distance(const StateSpace& space, std::span<const int> x,
                     std::span<const int> y);
int hamming_distance(const StateSpace& space, std::size_t x, std::size_t y);

// Number of states within Hamming distance `radius` of any fixed state.
std::size_t ball_volume(const StateSpace& space, int radius);

// Row of the indicator x_variable == value in A^(X) (value >= 1).
std::size_t indicator_row(const StateSpace& space, int variable, int value);

// Row label of a sufficient-statistics matrix.  variable == -1 marks the
// constant row; otherwise the row is the indicator of x_variable == value.
struct RowLabel {
  int variable = -1;
  int value = 0;

  bool is_constant() const { return variable < 0; }
  bool operator==(const RowLabel&) const = default;
};

// The 0/1 matrix A^(X) of the independence model on a StateSpace.
//
// Row order: the constant row, then for variables n, n-1, ..., 1 the
// indicators of x_i = r_i - 1, ..., x_i = 1.  Columns follow the joint-state
// order of the space.
class SufficientStatistics {
 public:
  SufficientStatistics() = default;
  explicit SufficientStatistics(StateSpace space);

  const StateSpace& space() const { return space_; }
  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return space_.size(); }
  const std::vector<RowLabel>& row_labels() const { return labels_; }

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return data_[row * cols() + col];
  }

  // Row index of the indicator x_variable == value (value >= 1).
  std::size_t row_of(int variable, int value) const;

  Eigen::VectorXd column(std::size_t col) const;
  Eigen::MatrixXd dense() const;

 private:
  StateSpace space_;
  std::vector<RowLabel> labels_;
  std::vector<std::size_t> row_offset_;  // first row of each variable
  std::vector<std::uint8_t> data_;       // row-major
};

SufficientStatistics build_statistics(const StateSpace& space);

// A^(X,Y) = A^(X) kron A^(Y), generated on demand.
//
// Row (rx, ry) sits at rx * d_Y + ry, which pairs with the column-by-column
// vectorisation of a d_Y x d_X parameter matrix.  Column (x, y) sits at
// x * |Y| + y, the joint order of visible.concat(hidden).
class JointStatistics {
 public:
  JointStatistics(SufficientStatistics visible, SufficientStatistics hidden,
                  std::size_t cap = kExactCap);

  const SufficientStatistics& visible() const { return visible_; }
  const SufficientStatistics& hidden() const { return hidden_; }
  std::size_t rows() const { return visible_.rows() * hidden_.rows(); }
  std::size_t cols() const { return visible_.cols() * hidden_.cols(); }

  std::uint8_t at(std::size_t row, std::size_t col) const;
  Eigen::MatrixXd dense() const;

 private:
  SufficientStatistics visible_;
  SufficientStatistics hidden_;
};

JointStatistics joint_statistics(const SufficientStatistics& visible,
                                 const SufficientStatistics& hidden,
                                 std::size_t cap = kExactCap);

// CSV with a header of column state labels; first field of each row is the
// row label ("1" or "x<i>=<v>", 1-based variables).
void write_csv(std::ostream& out, const SufficientStatistics& stats);

std::string row_label_string(const RowLabel& label);

}  // namespace drbm

#endif  // DRBM_STATESPACE_HPP
