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

#include <random>

#include <gtest/gtest.h>

#include "drbm/tropical.hpp"
#include "test_util.hpp"

namespace drbm {
namespace {

TEST(Json, StateSpace) {
  StateSpace space({3, 2});
  EXPECT_EQ(to_json(space).dump(), "[3,2]");
  EXPECT_EQ(space_from_json(Json::parse("[3,2]")), space);
  EXPECT_THROW(space_from_json(Json::parse("{}")), std::invalid_argument);
  EXPECT_THROW(space_from_json(Json::parse("[3,1]")), std::invalid_argument);
}

TEST(Json, ModelRoundTripIsExact) {
  std::mt19937_64 rng(1);
  StateSpace vis({3, 2}), hid({2, 2});
  DiscreteRBM rbm(vis, hid, ThetaMatrix(testing::random_matrix(rng, hid.stat_dim(), vis.stat_dim())));
  auto text = to_json(rbm).dump();
  auto back = model_from_json(Json::parse(text));
  EXPECT_EQ(back.visible(), vis);
  EXPECT_EQ(back.hidden(), hid);
  EXPECT_EQ(back.theta().matrix(), rbm.theta().matrix());
  EXPECT_EQ(to_json(back).dump(), text);
}

TEST(Json, ModelShapeErrors) {
  auto j = Json::parse(R"({"visible":[2],"hidden":[2],"theta":[[0,0],[0]]})");
  EXPECT_THROW(model_from_json(j), std::invalid_argument);
  EXPECT_THROW(model_from_json(Json::parse(R"({"visible":[2]})")), Json::exception);
}

TEST(Json, SlicingRoundTrip) {
  auto s = ball_slicing(StateSpace({2, 2, 2}), 0, 1);
  ASSERT_TRUE(s.has_value());
  auto j = to_json(*s);
  EXPECT_EQ(j["cells"]["0"], Json::parse("[0,1,2,4]"));
  auto back = slicing_from_json(j);
  EXPECT_EQ(back.cell, s->cell);
  EXPECT_EQ(back.theta, s->theta);
  auto broken = j;
  broken["cells"].erase("1");
  EXPECT_THROW(slicing_from_json(broken), std::invalid_argument);
}

TEST(Json, CodeRoundTrip) {
  Code code(StateSpace({2, 2, 2, 2}), {0, 15});
  auto j = to_json(code);
  EXPECT_EQ(j["words"], Json::parse("[[0,0,0,0],[1,1,1,1]]"));
  EXPECT_EQ(j["min_distance"], 4);
  auto back = code_from_json(j);
  EXPECT_EQ(back.words(), code.words());
  auto by_index = code_from_json(Json::parse(R"({"space":[2,2,2,2],"words":[0,15]})"));
  EXPECT_EQ(by_index.words(), code.words());
  EXPECT_THROW(code_from_json(Json::parse(R"({"space":[2,2],"words":[[0,2]]})")), std::invalid_argument);
}

TEST(Json, DistributionLabels) {
  auto j = to_json(Distribution::point_mass(StateSpace({3, 2}), 5));
  EXPECT_EQ(j["probabilities"]["21"], 1.0);
  EXPECT_EQ(j["probabilities"].size(), 6u);
}

TEST(Json, ReportsHaveStableKeys) {
  JacobianRank r{7, std::numeric_limits<double>::infinity(), true, 5, 5, 0};
  auto j = to_json(r);
  EXPECT_TRUE(j["gap"].is_null());
  EXPECT_EQ(j["rank"], 7);
  KlBound bound{0.5, {0, 1}, {2}, false};
  UniversalityVerdict verdict{Universality::kNotUniversal, "reason", 2, 4};
  auto d = divergence_json(bound, verdict, std::nullopt);
  EXPECT_TRUE(d["empirical"].is_null());
  EXPECT_EQ(d["verdict"], "not-universal");
  EXPECT_EQ(d["lambda"], Json::parse("[0,1]"));
}

}  // namespace
}  // namespace drbm
