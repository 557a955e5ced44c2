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
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "drbm/coding.hpp"
#include "drbm/dimension.hpp"
#include "drbm/divergence.hpp"
#include "drbm/geometry.hpp"
#include "drbm/json_io.hpp"
#include "drbm/models.hpp"
#include "drbm/tropical.hpp"

namespace {

using namespace drbm;

// Tolerances, fixed here so the printed verdicts are reproducible.
constexpr double kIdentityTol = 1e-12;
constexpr double kDivergenceSlack = 0.02;
constexpr double kAttainSlack = 0.05;
constexpr double kGap = 1e3;
constexpr double kCriterion1Seconds = 10.0;
constexpr double kCriterion2Seconds = 60.0;
constexpr double kCriterion9Seconds = 300.0;

StateSpace binary(int n) { return StateSpace(std::vector<int>(static_cast<std::size_t>(n), 2)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cards_string(const StateSpace& s) {
  std::string out;
  for (std::size_t i = 0; i < s.num_vars(); ++i) out += (i ? "," : "") + std::to_string(s.card(i));
  return out;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

Outcome criterion1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto special = jacobian_rank(binary(4), StateSpace({3}));
  o.require(special.rank == 13, "rank(2^4, [3]) = " + std::to_string(special.rank));
  o.require(expected_dimension(binary(4), StateSpace({3})) == 14, "expected(2^4, [3]) != 14");
  o.require(special.gap >= kGap, "gap below 1e3");
  std::size_t shapes = 0;
  for (int n = 1; n <= 5; ++n)
    for (int k = 2; k <= 4; ++k) {
      if (n == 4 && k == 3) continue;
      auto r = jacobian_rank(binary(n), StateSpace({k}));
      const std::size_t want = std::min<std::size_t>(n * k + k - 1, (std::size_t{1} << n) - 1);
      ++shapes;
      o.require(r.rank == want, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " rank " +
                                    std::to_string(r.rank) + " want " + std::to_string(want));
      o.require(r.gap >= kGap, "gap at n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
  const double secs = seconds_since(t0);
  o.require(secs < kCriterion1Seconds, "runtime");
  o.detail << "jacobian(2^4,[3]) = " << special.rank << " vs expected 14, gap " << special.gap << "; " << shapes
           << " other shapes match; " << secs << " s";
  return o;
}

int ceil_log2(int v) {
  int e = 0;
  while ((1 << e) < v) ++e;
  return e;
}
int floor_log2(int v) {
  int e = 0;
  while ((1 << (e + 1)) <= v) ++e;
  return e;
}

Outcome criterion2() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (int n = 1; n <= 5; ++n)
    for (int m = 1; m <= 4; ++m) {
      const bool lower = m + 1 <= (1 << (n - ceil_log2(n + 1)));
      const bool upper = m >= (1 << (n - floor_log2(n + 1)));
      if (!lower && !upper) continue;
      auto r = jacobian_rank(binary(n), binary(m));
      const std::size_t want = lower ? std::size_t(n * m + n + m) : (std::size_t{1} << n) - 1;
      ++checked;
      o.require(r.rank == want, "n=" + std::to_string(n) + " m=" + std::to_string(m) + " rank " +
                                    std::to_string(r.rank) + " want " + std::to_string(want));
    }
  const double secs = seconds_since(t0);
  o.require(secs < kCriterion2Seconds, "runtime");
  o.detail << checked << " (n,m) shapes checked; " << secs << " s";
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto r = jacobian_rank(StateSpace({3, 3}), StateSpace({2}));
  const std::size_t formula = 2 * (3 + 3 - 2) - 1;
  const std::size_t expected = expected_dimension(StateSpace({3, 3}), StateSpace({2}));
  o.require(r.rank == formula, "rank " + std::to_string(r.rank));
  o.require(expected == 8, "expected " + std::to_string(expected));
  o.detail << "jacobian([3,3],[2]) = " << r.rank << " = k(M+N-k)-1 = " << formula << " < expected " << expected;
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::size_t violations = 0, shapes = 0;
  while (shapes < 30) {
    std::uniform_int_distribution<int> nv(1, 4), card(2, 4), nh(1, 2), hcard(2, 3);
    std::vector<int> v(static_cast<std::size_t>(nv(rng)));
    std::size_t size = 1;
    for (auto& c : v) size *= static_cast<std::size_t>(c = card(rng));
    if (size > 32) continue;
    std::vector<int> h(static_cast<std::size_t>(nh(rng)));
    for (auto& c : h) c = hcard(rng);
    StateSpace vis(v), hid(h);
    auto t = tropical_dimension(vis, hid, 300, shapes);
    auto j = jacobian_rank(vis, hid, 3, shapes);
    const std::size_t e = expected_dimension(vis, hid);
    if (!(t.value <= j.rank && j.rank <= e)) {
      ++violations;
      o.detail << " violation at " << cards_string(vis) << "/" << cards_string(hid) << ";";
    }
    ++shapes;
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.detail << shapes << " shapes, " << violations << " chain violations";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::vector<int> v, h;
    std::size_t size = 1;
    std::uniform_int_distribution<int> card(2, 4), m(1, 3), hcard(2, 4);
    while (true) {
      int c = card(rng);
      if (size * static_cast<std::size_t>(c) > 64) break;
      v.push_back(c);
      size *= static_cast<std::size_t>(c);
      if (v.size() >= 5) break;
    }
    for (int j = m(rng); j > 0; --j) h.push_back(hcard(rng));
    StateSpace vis(v), hid(h);
    Eigen::MatrixXd theta(hid.stat_dim(), vis.stat_dim());
    for (Eigen::Index r = 0; r < theta.rows(); ++r)
      for (Eigen::Index c = 0; c < theta.cols(); ++c) theta(r, c) = g(rng);
    DiscreteRBM rbm(vis, hid, ThetaMatrix(theta));
    // product of the unit mixtures, unit j built from its own rows of Theta
    Distribution prod = Distribution::uniform(vis);
    for (std::size_t j = 0; j < h.size(); ++j) {
      StateSpace unit({h[j]});
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(h[j], theta.cols());
      if (j == 0) block.row(0) = theta.row(0);
      for (int y = 1; y < h[j]; ++y)
        block.row(static_cast<Eigen::Index>(indicator_row(unit, 0, y))) =
            theta.row(static_cast<Eigen::Index>(indicator_row(hid, static_cast<int>(j), y)));
      prod = hadamard_product(prod, rbm_marginal(DiscreteRBM(vis, unit, ThetaMatrix(block))));
    }
    worst = std::max(worst, prod.max_abs_diff(rbm_marginal(rbm)));
  }
  o.require(worst <= kIdentityTol, "max deviation");
  o.detail << "50 instances, max |p - hadamard product| = " << worst;
  return o;
}

Outcome criterion6() {
  Outcome o;
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> shapes{
      {{2}, {2}},       {{2, 2}, {2}},    {{3, 2}, {2}},       {{2, 2, 2}, {3}}, {{3, 3}, {2, 2}},
      {{2, 3, 2}, {2}}, {{4, 2}, {3, 2}}, {{2, 2, 2, 2}, {2}}, {{3}, {4}},       {{2, 2}, {2, 2, 2}}};
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (const auto& [v, h] : shapes) {
    StateSpace vis(v), hid(h);
    auto a = joint_statistics(build_statistics(vis), build_statistics(hid)).dense();
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXd theta(hid.stat_dim(), vis.stat_dim());
      for (Eigen::Index r = 0; r < theta.rows(); ++r)
        for (Eigen::Index c = 0; c < theta.cols(); ++c) theta(r, c) = g(rng);
      DiscreteRBM rbm(vis, hid, ThetaMatrix(theta));
      Eigen::VectorXd flat = rbm.theta().vectorize();
      for (std::size_t x = 0; x < vis.size(); ++x)
        for (std::size_t y = 0; y < hid.size(); ++y) {
          const double lhs = flat.dot(a.col(static_cast<Eigen::Index>(x * hid.size() + y)));
          worst = std::max(worst, std::abs(lhs - rbm.energy(x, y)));
        }
    }
  }
  o.require(worst <= kIdentityTol, "max deviation");
  o.detail << "10 shapes x 100 draws, max |<theta, A_(x,y)> - <Theta A_x, A_y>| = " << worst;
  return o;
}

Outcome criterion7() {
  Outcome o;
  StateSpace prism({3, 2}), cube({2, 2, 2, 2});
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(5, 4);
  theta.bottomRows(4) << 3, -2, -2, -2, 1, 2, -2, -2, 1, -2, -2, 2, 1, -2, 2, -2;
  const std::vector<State> order{{2, 1}, {1, 1}, {0, 1}, {2, 0}, {1, 0}, {0, 0}};
  const int published[4][6] = {{-1, -1, 1, 1, 1, 3}, {1, 1, 3, -1, -1, 1}, {-3, 1, -1, -1, 3, 1}, {1, -3, -1, 3, -1, 1}};
  auto stats = build_statistics(prism);
  std::set<std::size_t> cells;
  bool entries = true, even = true;
  for (std::size_t c = 0; c < order.size(); ++c) {
    const std::size_t x = prism.index(order[c]);
    Eigen::VectorXd image = theta.bottomRows(4) * stats.column(x);
    int positive = 0;
    for (int r = 0; r < 4; ++r) {
      entries &= image(r) == published[r][c];
      positive += image(r) > 0;
    }
    even &= positive % 2 == 0;
    DiscreteRBM rbm(prism, cube, ThetaMatrix(theta));
    auto inf = inference_function(rbm, x);
    if (inf.size() == 1) cells.insert(inf[0]);
  }
  o.require(entries, "product matrix differs");
  o.require(even, "odd number of positive coordinates");
  o.require(cells.size() == 6, "orthants not distinct");
  o.detail << "product matrix " << (entries ? "matches" : "differs") << "; " << cells.size()
           << " distinct orthants; even positive counts " << (even ? "yes" : "no");
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto a = universality_verdict(StateSpace({3, 3, 3}), StateSpace({5}));
  auto b = universality_verdict(StateSpace({3, 3, 3}), StateSpace({5, 5}));
  o.require(a.verdict == Universality::kNotUniversal, "[3,3,3]/[5]");
  o.require(b.verdict == Universality::kUniversal, "[3,3,3]/[5,5]");
  o.detail << "[3,3,3]/[5] " << to_string(a.verdict) << ", [3,3,3]/[5,5] " << to_string(b.verdict);
  for (int n = 2; n <= 4; ++n) {
    const int m = (1 << (n - 1)) - 1;
    auto v = universality_verdict(binary(n), binary(m));
    FitOptions opt;
    opt.restarts = 10;
    auto e = empirical_max_divergence(binary(n), binary(m), 10, opt);
    o.require(v.verdict == Universality::kUniversal, "n=" + std::to_string(n) + " verdict");
    o.require(e.max_divergence <= kDivergenceSlack, "n=" + std::to_string(n) + " empirical");
    o.detail << "; n=" << n << " m=" << m << " " << to_string(v.verdict) << " empirical " << e.max_divergence;
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  StateSpace vis({2, 2, 2}), hid({2});
  auto bound = kl_upper_bound(vis, hid);
  o.require(std::abs(bound.bound - std::log(2.0)) <= kIdentityTol, "bound");
  auto e = empirical_max_divergence(vis, hid);
  o.require(e.max_divergence >= 0.0 && e.max_divergence <= std::log(2.0) + kDivergenceSlack, "empirical");
  PartitionModel model(vis, bound.fixed);
  double attained = 0.0;
  for (std::size_t x = 0; x < vis.size(); ++x) {
    auto d = Distribution::point_mass(vis, x);
    attained = std::max(attained, kl_divergence(d, project_to_partition(d, model)));
  }
  o.require(attained >= std::log(2.0) - kAttainSlack, "point masses");
  const double secs = seconds_since(t0);
  o.require(secs < kCriterion9Seconds, "runtime");
  o.detail << "bound " << bound.bound << ", empirical " << e.max_divergence << ", point masses vs partition "
           << attained << "; " << secs << " s";
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto a2 = max_code_size(StateSpace({2, 2, 2}), 2);
  auto a3 = max_code_size(StateSpace({3, 3, 3}), 2);
  o.require(a2.value == 4 && a2.exact, "A([2]^3,2)");
  o.require(a3.value == 9 && a3.exact, "A([3]^3,2)");
  Code h = hamming_code(2, 3);
  StateSpace seven = binary(7);
  std::vector<int> hits(seven.size(), 0);
  for (std::size_t w : h.words())
    for (std::size_t x = 0; x < seven.size(); ++x)
      if (hamming_distance(seven, w, x) <= 1) ++hits[x];
  const bool tiles = h.size() == 16 && std::all_of(hits.begin(), hits.end(), [](int v) { return v == 1; });
  o.require(tiles, "Hamming [7,4] does not tile");
  auto k = min_covering_size(StateSpace({2, 2, 2}), 1);
  o.require(k.value == 2 && k.exact, "K([2,2,2],1)");
  std::size_t formula_checks = 0;
  for (int s = 2; s <= 3; ++s)
    for (int t = s; t <= 5; ++t) {
      auto r = min_covering_size(StateSpace({s, s, t}), 1);
      ++formula_checks;
      o.require(r.exact && r.value == covering_formula_sst(s, t),
                "[" + std::to_string(s) + "," + std::to_string(s) + "," + std::to_string(t) + "] search " +
                    std::to_string(r.value) + " formula " + std::to_string(covering_formula_sst(s, t)));
    }
  o.detail << "A([2]^3,2)=" << a2.value << ", A([3]^3,2)=" << a3.value << ", Hamming [7,4] perfect "
           << (tiles ? "yes" : "no") << ", K([2,2,2],1)=" << k.value << ", " << formula_checks
           << " [s,s,t] formula checks";
  return o;
}

Outcome criterion11() {
  Outcome o;
  StateSpace vis = binary(4);
  Code code(vis, {0, 15});
  auto cert = strong_mode_certificate(vis, StateSpace({2}), code);
  o.require(cert.has_value(), "no certificate");
  if (cert) {
    auto modes = strong_modes(rbm_marginal(DiscreteRBM(vis, StateSpace({2}), cert->theta)));
    o.require(modes == code.words(), "strong modes differ from the code");
    o.detail << "certificate scale " << cert->scale << ", strong modes {";
    for (std::size_t i = 0; i < modes.size(); ++i) o.detail << (i ? "," : "") << vis.label(modes[i]);
    o.detail << "}";
  }
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kk(2, 4), nn(1, 4);
  std::normal_distribution<double> g(0.0, 3.0);
  std::size_t exceed = 0;
  for (int t = 0; t < 200; ++t) {
    const int k = kk(rng);
    StateSpace v = binary(nn(rng));
    Eigen::MatrixXd theta(k, v.stat_dim());
    for (Eigen::Index r = 0; r < theta.rows(); ++r)
      for (Eigen::Index c = 0; c < theta.cols(); ++c) theta(r, c) = g(rng);
    auto modes = strong_modes(rbm_marginal(DiscreteRBM(v, StateSpace({k}), ThetaMatrix(theta))));
    if (modes.size() > static_cast<std::size_t>(k)) ++exceed;
  }
  o.require(exceed == 0, "mixture with more than k strong modes");
  o.detail << "; 200 mixtures, " << exceed << " exceed k strong modes";
  return o;
}

Outcome criterion12() {
  Outcome o;
  std::size_t instances = 0;
  for (int n = 4; n <= 6; ++n)
    for (int s = 2; 2 * s - 3 <= n; ++s) {
      StateSpace vis = binary(n), hid({s});
      auto packing = ball_packing(vis, {2 * s - 3});
      if (!packing || !packing->complement_full_rank) continue;
      auto t = tropical_dimension(vis, hid);
      const std::size_t e = expected_dimension(vis, hid);
      ++instances;
      o.require(t.value == e, "n=" + std::to_string(n) + " s=" + std::to_string(s) + " tropical " +
                                  std::to_string(t.value) + " expected " + std::to_string(e));
      o.detail << "n=" << n << " s=" << s << ": " << t.value << "/" << e << " via " << t.family << "; ";
    }
  o.require(instances > 0, "no instances");
  return o;
}

#ifdef DRBM_CLI
std::string run(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return out + "\n<status " + std::to_string(status) + ">";
}
#endif

Outcome criterion13() {
  Outcome o;
#ifdef DRBM_CLI
  {
    std::ofstream model("acceptance_model.json");
    model << R"({"visible":[2,3],"hidden":[2],"theta":[[0.1,0.2,-0.3,0.4],[0.5,-0.6,0.7,0.8]]})";
  }
  const std::string cli = DRBM_CLI;
  const std::vector<std::string> args{
      "dim --visible 2,2,2 --hidden 2 --seed 3",
      "dim --visible 2,2,2,2 --hidden 3 --format csv",
      "universal --visible 2,2,2 --hidden 2 --empirical --restarts 3 --targets 3 --seed 5",
      "tropical --visible 2,2,2,2 --hidden 2 --seed 7 --format text",
      "modes --visible 2,2,2,2 --hidden 2 --words 0000,1111",
      "code --visible 3,3,3 --distance 2",
      "code --visible 2,2,2 --covering 1 --format csv",
      "eval --model acceptance_model.json --format csv"};
  std::size_t identical = 0;
  for (const auto& a : args) {
    const std::string cmd = "\"" + cli + "\" " + a + " 2>&1";
    const std::string first = run(cmd), second = run(cmd);
    if (first == second && first.size() > 20) ++identical;
    else o.require(false, a);
  }
  o.detail << identical << "/" << args.size() << " CLI runs byte-identical across two invocations";
#else
  o.require(false, "CLI path not configured");
#endif
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3},   {4, criterion4},   {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8},   {9, criterion9},   {10, criterion10},
      {11, criterion11}, {12, criterion12}, {13, criterion13}};
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
