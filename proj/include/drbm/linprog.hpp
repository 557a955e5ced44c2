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

#ifndef DRBM_LINPROG_HPP
#define DRBM_LINPROG_HPP

#include <cstddef>
#include <vector>

namespace drbm {

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

// minimize <objective, x> subject to rows; variables are free unless marked
// nonnegative.
struct LinearProgram {
  explicit LinearProgram(std::size_t num_vars)
      : num_vars(num_vars), objective(num_vars, 0.0), nonnegative(num_vars, false) {}

  void add(std::vector<double> coeffs, Sense sense, double rhs);

  std::size_t num_vars;
  std::vector<double> objective;
  std::vector<bool> nonnegative;
  std::vector<std::vector<double>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;

  bool feasible() const { return status == LpStatus::kOptimal || status == LpStatus::kUnbounded; }
};

// Dense two-phase simplex with Bland's rule.  Meant for the few-hundred-row
// feasibility programs that certify slicings and strong modes.
LpResult solve_lp(const LinearProgram& lp, std::size_t max_pivots = 200000);

}  // namespace drbm

#endif  // DRBM_LINPROG_HPP
