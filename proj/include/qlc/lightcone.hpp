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
#include <span>
#include <string>
#include <vector>

#include "qlc/angles.hpp"
#include "qlc/contraction.hpp"
#include "qlc/graph.hpp"
#include "qlc/tensor.hpp"

namespace qlc {

/// An edge of a lightcone. Its phase gate acts in layers 1..layers, where
/// layers = p - (distance of its nearer endpoint).
struct ConeEdge {
    EdgeId id;
    /// Endpoints as positions in LightconeTemplate::vertices.
    std::uint32_t a;
    std::uint32_t b;
    double weight;
    std::uint32_t layers;
};

enum class SlotKind : std::uint8_t { phase, mixer, observable };

/// Meaning of one tensor of the skeleton. `conjugate` marks the bra side.
struct TensorSlot {
    SlotKind kind;
    bool conjugate;
    /// 1-based circuit layer (phase, mixer).
    std::uint32_t layer;
    /// Position in LightconeTemplate::edges (phase, observable) or in
    /// LightconeTemplate::vertices (mixer).
    std::uint32_t target;
};

/// Angle-independent network for one edge term. Each cone qubit at distance
/// d carries p - d ket variables and as many bra variables, followed by one
/// variable shared by both sides; only the mixing rotations separate
/// consecutive variables, and the diagonal phase and observable factors
/// attach to the variables current at their layer.
struct LightconeTemplate {
    EdgeId edge = 0;
    std::size_t p = 0;
    /// Cone vertices ordered by (distance, id); the root endpoints come first.
    std::vector<Vertex> vertices;
    std::vector<int> distance;
    std::vector<ConeEdge> edges;
    /// Position of the root edge in `edges`.
    std::size_t root = 0;
    std::vector<std::vector<IndexId>> wiring;
    std::vector<TensorSlot> slots;
    /// Equal keys imply equal edge energies at every angle. Cones that could
    /// not be labeled canonically get a key unique to their edge.
    std::string structure_key;

    std::size_t num_qubits() const noexcept { return vertices.size(); }
};

/// Throws Error for an invalid edge id or p == 0.
LightconeTemplate lightcone(const Graph &g, EdgeId e, std::size_t p);

/// Tensor values in wiring order, with the template's weights or with
/// `weights` given per cone edge.
std::vector<std::vector<Complex>> tensor_values(const LightconeTemplate &t,
                                                const AngleSequence &a);
std::vector<std::vector<Complex>> tensor_values(const LightconeTemplate &t,
                                                const AngleSequence &a,
                                                std::span<const double> weights);

/// The full network. Its contraction times `normalization(t)` is the edge
/// energy. Throws Error on a depth mismatch.
TensorNetwork instantiate(const LightconeTemplate &t, const AngleSequence &a);
TensorNetwork instantiate(const LightconeTemplate &t, const AngleSequence &a,
                          std::span<const double> weights);

/// 2^-(cone qubits), the plus-state weight kept out of the tensors.
double normalization(const LightconeTemplate &t);

/// The cone edges as a graph on vertices 0..q-1 in template order; the root
/// edge is edge 0.
Graph cone_graph(const LightconeTemplate &t);

/// Groups of edges with equal structure keys. Each group lists its edges
/// ascending; groups are ordered by their first edge.
std::vector<std::vector<EdgeId>>
dedupe(std::span<const LightconeTemplate> templates);

} // namespace qlc
