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

#include "drbm/json_io.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drbm {

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_rows(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw std::invalid_argument("theta must have d_Y rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw std::invalid_argument("theta rows must have d_X entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
  }
  return m;
}

}  // namespace

Json to_json(const StateSpace& space) { return Json(space.cards()); }

StateSpace space_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("state space must be an array of cardinalities");
  return StateSpace(j.get<std::vector<int>>());
}

Json to_json(const DiscreteRBM& rbm) {
  Json j;
  j["visible"] = to_json(rbm.visible());
  j["hidden"] = to_json(rbm.hidden());
  j["theta"] = matrix_rows(rbm.theta().matrix());
  return j;
}

DiscreteRBM model_from_json(const Json& j) {
  const StateSpace vis = space_from_json(j.at("visible"));
  const StateSpace hid = space_from_json(j.at("hidden"));
  return DiscreteRBM(vis, hid, ThetaMatrix(matrix_from_rows(j.at("theta"), hid.stat_dim(), vis.stat_dim())));
}

Json to_json(const Slicing& s) {
  Json j;
  j["visible"] = to_json(s.visible);
  j["hidden"] = to_json(s.hidden);
  j["theta"] = matrix_rows(s.theta);
  Json cells = Json::object();
  const auto parts = s.cells();
  for (std::size_t y = 0; y < parts.size(); ++y) cells[std::to_string(y)] = parts[y];
  j["cells"] = std::move(cells);
  return j;
}

Slicing slicing_from_json(const Json& j) {
  Slicing s;
  s.visible = space_from_json(j.at("visible"));
  s.hidden = space_from_json(j.at("hidden"));
  s.theta = matrix_from_rows(j.at("theta"), s.hidden.stat_dim(), s.visible.stat_dim());
  s.cell.assign(s.visible.size(), s.hidden.size());
  for (const auto& [key, xs] : j.at("cells").items()) {
    const std::size_t y = std::stoul(key);
    if (y >= s.hidden.size()) throw std::invalid_argument("cell label out of range");
    for (const auto& x : xs) s.cell.at(x.get<std::size_t>()) = y;
  }
  for (std::size_t c : s.cell)
    if (c >= s.hidden.size()) throw std::invalid_argument("cells do not cover the visible space");
  return s;
}

Json to_json(const Code& code) {
  Json j;
  j["space"] = to_json(code.space());
  Json words = Json::array();
  for (std::size_t w : code.words()) words.push_back(code.space().state(w));
  j["words"] = std::move(words);
  j["min_distance"] = code.min_distance() ? Json(*code.min_distance()) : Json(nullptr);
  j["covering_radius"] = code.covering_radius();
  return j;
}

Code code_from_json(const Json& j) {
  const StateSpace space = space_from_json(j.at("space"));
  std::vector<std::size_t> words;
  for (const auto& w : j.at("words")) {
    if (w.is_number_integer()) {
      words.push_back(w.get<std::size_t>());
    } else {
      const State s = w.get<State>();
      if (s.size() != space.num_vars()) throw std::invalid_argument("code word has the wrong length");
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 0 || s[i] >= space.card(i)) throw std::invalid_argument("code word value out of range");
      words.push_back(space.index(s));
    }
  }
  return Code(space, std::move(words));
}

Json to_json(const Distribution& p) {
  Json j;
  j["space"] = to_json(p.space());
  Json probs = Json::object();
  for (std::size_t x = 0; x < p.size(); ++x) probs[p.space().label(x)] = p[x];
  j["probabilities"] = std::move(probs);
  return j;
}

Json to_json(const TropicalDimension& t) {
  Json j;
  j["value"] = t.value;
  j["rank"] = t.rank;
  j["upper_bound"] = t.upper_bound;
  j["exact"] = t.exact;
  j["label"] = t.exact ? "exact" : "lower bound";
  j["family"] = t.family;
  j["candidates"] = t.candidates;
  Json sl = Json::array();
  for (const auto& s : t.slicings) sl.push_back(to_json(s));
  j["slicings"] = std::move(sl);
  return j;
}

Json to_json(const JacobianRank& r) {
  Json j;
  j["rank"] = r.rank;
  j["gap"] = finite_or_null(r.gap);
  j["certain"] = r.certain;
  j["samples"] = r.samples;
  j["draws"] = r.draws;
  j["seed"] = r.seed;
  return j;
}

Json to_json(const DimensionReport& r) {
  Json j;
  j["expected"] = r.expected;
  j["parameters"] = r.exp_family;
  j["ambient"] = r.ambient;
  j["jacobian"] = to_json(r.jacobian);
  j["tropical"] = to_json(r.tropical);
  j["hadamard_upper"] = r.hadamard.bound;
  j["clauses"] = r.clauses;
  j["verdict"] = to_string(r.verdict);
  j["trace"] = r.trace;
  return j;
}

Json to_json(const ModeCertificate& c) {
  Json j;
  j["scale"] = c.scale;
  j["assignment"] = c.assignment;
  j["modes"] = c.modes;
  j["theta"] = matrix_rows(c.theta.matrix());
  j["direction"] = matrix_rows(c.direction.matrix());
  return j;
}

Json divergence_json(const KlBound& bound, const UniversalityVerdict& verdict,
                     const std::optional<EmpiricalDivergence>& empirical) {
  Json j;
  j["bound"] = bound.bound;
  j["empirical"] = empirical ? Json(empirical->max_divergence) : Json(nullptr);
  j["verdict"] = to_string(verdict.verdict);
  j["lambda"] = bound.lambda;
  j["partition_fixed"] = bound.fixed;
  j["reason"] = verdict.reason;
  j["d_y"] = verdict.d_y;
  j["code_size"] = verdict.code_size;
  if (empirical) {
    j["worst_target"] = empirical->worst_target;
    j["worst_gradient_norm"] = empirical->worst_gradient_norm;
  }
  return j;
}

}  // namespace drbm
