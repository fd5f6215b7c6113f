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

// Reference implementations used only by the tests. Each one is written
// independently of the library code it checks.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "qlc/graph.hpp"

namespace qlc::testing {

/// Straight reading of the graph6 format: size prefix, then the upper
/// triangle column by column, six bits per byte, most significant first.
struct RawGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges; // sorted, u < v
};
RawGraph graph6_reference_decode(std::string_view text);

/// All connected 3-regular graphs on n vertices up to isomorphism, found by
/// exhausting the double-edge-switch graph from one seed graph.
std::vector<Graph> connected_cubic_graphs(std::size_t n);

/// Energy of the single-edge graph at depth one.
double k2_energy(double gamma, double beta);

/// Depth-one energy of an unweighted edge whose endpoints have degrees du
/// and dv and which lies on `triangles` triangles.
double p1_edge_energy(std::size_t du, std::size_t dv, std::size_t triangles,
                      double gamma, double beta);

/// Depth-one total energy of an unweighted graph from the closed form.
double p1_energy(const Graph &g, double gamma, double beta);

/// Exhaustive cut expectation over a probability vector indexed by basis
/// states, qubit i at bit i.
double cut_expectation(const Graph &g, const std::vector<double> &probs);

} // namespace qlc::testing
