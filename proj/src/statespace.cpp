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

#include "drbm/statespace.hpp"

#include <limits>
#include <ostream>
#include <sstream>

namespace drbm {

StateSpace::StateSpace(std::vector<int> cards) : cards_(std::move(cards)) {
  if (cards_.empty()) throw std::invalid_argument("state space needs at least one variable");
  strides_.assign(cards_.size(), 1);
  constexpr std::size_t limit = std::size_t{1} << 62;
  std::size_t total = 1;
  stat_dim_ = 1;
  for (std::size_t i = cards_.size(); i-- > 0;) {
    if (cards_[i] < 2) throw std::invalid_argument("every cardinality must be at least 2");
    strides_[i] = total;
    if (total > limit / static_cast<std::size_t>(cards_[i]))
      throw InstanceTooLarge("state space has more than 2^62 joint states");
    total *= static_cast<std::size_t>(cards_[i]);
    stat_dim_ += static_cast<std::size_t>(cards_[i] - 1);
  }
  size_ = total;
}

std::size_t StateSpace::index(std::span<const int> x) const {
  if (x.size() != cards_.size()) throw std::invalid_argument("state has the wrong number of variables");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    if (x[i] < 0 || x[i] >= cards_[i]) throw std::out_of_range("state value out of range");
    idx += static_cast<std::size_t>(x[i]) * strides_[i];
  }
  return idx;
}

State StateSpace::state(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("state index out of range");
  State x(cards_.size());
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    x[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return x;
}

std::string StateSpace::label(std::size_t index) const {
  const State x = state(index);
  bool compact = true;
  for (int r : cards_) compact = compact && r <= 10;
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!compact && i > 0) out += '.';
    out += std::to_string(x[i]);
  }
  return out;
}

StateSpace StateSpace::concat(const StateSpace& other) const {
  std::vector<int> cards = cards_;
  cards.insert(cards.end(), other.cards_.begin(), other.cards_.end());
  return StateSpace(std::move(cards));
}

int hamming_distance(const StateSpace& space, std::span<const int> x,
                     std::span<const int> y) {
  if (x.size() != space.num_vars() || y.size() != space.num_vars())
    throw std::invalid_argument("states do not belong to this space");
  int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= space.card(i) || y[i] < 0 || y[i] >= space.card(i))
      throw std::out_of_range("state value out of range");
    d += x[i] != y[i];
  }
  return d;
}

int hamming_distance(const StateSpace& space, std::size_t x, std::size_t y) {
  const State a = space.state(x);
  const State b = space.state(y);
  return hamming_distance(space, a, b);
}

std::size_t ball_volume(const StateSpace& space, int radius) {
  // elementary symmetric polynomials of (r_i - 1)
  const std::size_t n = space.num_vars();
  std::vector<std::size_t> e(n + 1, 0);
  e[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = static_cast<std::size_t>(space.card(i) - 1);
    for (std::size_t k = i + 1; k > 0; --k) e[k] += e[k - 1] * w;
  }
  std::size_t total = 0;
  for (int k = 0; k <= radius && k <= static_cast<int>(n); ++k) total += e[k];
  return total;
}

SufficientStatistics::SufficientStatistics(StateSpace space) : space_(std::move(space)) {
  const std::size_t n = space_.num_vars();
  labels_.push_back(RowLabel{});
  row_offset_.assign(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    row_offset_[i] = labels_.size();
    for (int v = space_.card(i) - 1; v >= 1; --v)
      labels_.push_back(RowLabel{static_cast<int>(i), v});
  }
  const std::size_t cols = space_.size();
  data_.assign(labels_.size() * cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    data_[c] = 1;
    const State x = space_.state(c);
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] != 0) data_[row_of(static_cast<int>(i), x[i]) * cols + c] = 1;
  }
}

std::size_t indicator_row(const StateSpace& space, int variable, int value) {
  if (variable < 0 || static_cast<std::size_t>(variable) >= space.num_vars() || value < 1 ||
      value >= space.card(variable))
    throw std::out_of_range("no indicator row for this variable/value");
  std::size_t row = 1;
  for (std::size_t i = space.num_vars(); i-- > static_cast<std::size_t>(variable) + 1;)
    row += static_cast<std::size_t>(space.card(i) - 1);
  return row + static_cast<std::size_t>(space.card(variable) - 1 - value);
}

std::size_t SufficientStatistics::row_of(int variable, int value) const {
  if (variable < 0 || static_cast<std::size_t>(variable) >= space_.num_vars() ||
      value < 1 || value >= space_.card(variable))
    throw std::out_of_range("no indicator row for this variable/value");
  return row_offset_[variable] + static_cast<std::size_t>(space_.card(variable) - 1 - value);
}

Eigen::VectorXd SufficientStatistics::column(std::size_t col) const {
  Eigen::VectorXd v(rows());
  for (std::size_t r = 0; r < rows(); ++r) v(r) = at(r, col);
  return v;
}

Eigen::MatrixXd SufficientStatistics::dense() const {
  Eigen::MatrixXd m(rows(), cols());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) m(r, c) = at(r, c);
  return m;
}

SufficientStatistics build_statistics(const StateSpace& space) {
  return SufficientStatistics(space);
}

JointStatistics::JointStatistics(SufficientStatistics visible, SufficientStatistics hidden,
                                 std::size_t cap)
    : visible_(std::move(visible)), hidden_(std::move(hidden)) {
  const std::size_t nx = visible_.cols();
  const std::size_t ny = hidden_.cols();
  if (ny != 0 && nx > cap / ny)
    throw InstanceTooLarge("joint state space exceeds the exact enumeration cap of " +
                           std::to_string(cap) + " columns");
}

std::uint8_t JointStatistics::at(std::size_t row, std::size_t col) const {
  const std::size_t dy = hidden_.rows();
  const std::size_t ny = hidden_.cols();
  return visible_.at(row / dy, col / ny) & hidden_.at(row % dy, col % ny);
}

Eigen::MatrixXd JointStatistics::dense() const {
  Eigen::MatrixXd m(rows(), cols());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) m(r, c) = at(r, c);
  return m;
}

JointStatistics joint_statistics(const SufficientStatistics& visible,
                                 const SufficientStatistics& hidden, std::size_t cap) {
  return JointStatistics(visible, hidden, cap);
}

std::string row_label_string(const RowLabel& label) {
  if (label.is_constant()) return "1";
  return "x" + std::to_string(label.variable + 1) + "=" + std::to_string(label.value);
}

void write_csv(std::ostream& out, const SufficientStatistics& stats) {
  out << "row";
  for (std::size_t c = 0; c < stats.cols(); ++c) out << ',' << stats.space().label(c);
  out << '\n';
  for (std::size_t r = 0; r < stats.rows(); ++r) {
    out << row_label_string(stats.row_labels()[r]);
    for (std::size_t c = 0; c < stats.cols(); ++c) out << ',' << int(stats.at(r, c));
    out << '\n';
  }
}

}  // namespace drbm
