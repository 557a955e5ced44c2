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

#ifndef DRBM_JSON_IO_HPP
#define DRBM_JSON_IO_HPP

#include <optional>

#include <json.hpp>

#include "drbm/coding.hpp"
#include "drbm/dimension.hpp"
#include "drbm/divergence.hpp"
#include "drbm/geometry.hpp"
#include "drbm/models.hpp"
#include "drbm/statespace.hpp"
#include "drbm/tropical.hpp"

namespace drbm {

using Json = nlohmann::ordered_json;

Json to_json(const StateSpace& space);
StateSpace space_from_json(const Json& j);

// {"visible": [..], "hidden": [..], "theta": d_Y rows of d_X entries}
Json to_json(const DiscreteRBM& rbm);
DiscreteRBM model_from_json(const Json& j);

// {"visible", "hidden", "theta", "cells": {"y": [x, ..]}}
Json to_json(const Slicing& s);
Slicing slicing_from_json(const Json& j);

// {"space", "words": [[x_1, .., x_n], ..], "min_distance", "covering_radius"}
Json to_json(const Code& code);
Code code_from_json(const Json& j);

Json to_json(const Distribution& p);
Json to_json(const TropicalDimension& t);
Json to_json(const JacobianRank& j);
Json to_json(const DimensionReport& r);
Json to_json(const ModeCertificate& c);
Json divergence_json(const KlBound& bound, const UniversalityVerdict& verdict,
                     const std::optional<EmpiricalDivergence>& empirical);

}  // namespace drbm

#endif  // DRBM_JSON_IO_HPP
