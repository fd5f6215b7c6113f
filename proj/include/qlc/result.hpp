// Copyright 2026 The qlc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <string>
#include <vector>

#include "qlc/graph.hpp"

namespace qlc {

enum class Method { automatic, tensor_network, state_vector };

std::string method_name(Method m);
/// Accepts "auto", "tensor-network" and "state-vector".
Method method_from_name(const std::string &name);

struct EnergyResult {
    /// Sum of per_edge, accumulated in edge order.
    double total = 0.0;
    /// Evaluated edges, ascending, and the expectation of each edge term.
    std::vector<EdgeId> edges;
    std::vector<double> per_edge;
    /// total divided by the summed weight of the evaluated edges.
    double ratio = 0.0;
    double query_seconds = 0.0;
    Method method = Method::tensor_network;
};

} // namespace qlc
