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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qlc/graph.hpp"

namespace qlc {

/// Graph with integer vertex and edge colors, the input to canonical
/// labeling. Colors are compared by value, so callers encode whatever must
/// be preserved (distance labels, weight bit patterns) directly.
struct ColoredGraph {
    std::size_t n = 0;
    std::vector<std::uint64_t> vertex_color;
    struct ColoredEdge {
        Vertex u;
        Vertex v;
        std::uint64_t color;
    };
    std::vector<ColoredEdge> edges;
};

/// Canonical certificate by individualization-refinement: the lexicographically
/// smallest relabeled encoding over all leaves of the search tree. Two inputs
/// have equal certificates iff they are isomorphic as colored graphs. Returns
/// nullopt when the search would visit more than `max_leaves` leaves.
std::optional<std::vector<std::uint64_t>>
canonical_certificate(const ColoredGraph &g, std::size_t max_leaves = 4096);

/// Certificate of a plain graph; edge weights become edge colors.
std::optional<std::vector<std::uint64_t>>
canonical_certificate(const Graph &g, std::size_t max_leaves = 4096);

} // namespace qlc
