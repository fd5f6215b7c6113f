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
#include <span>
#include <vector>

#include "qlc/random.hpp"

namespace qlc {

using Vertex = std::uint32_t;

/// Index into a graph's sorted edge list.
using EdgeId = std::uint32_t;

struct Edge {
    Vertex u;
    Vertex v;
    double w = 1.0;

    friend bool operator==(const Edge &, const Edge &) = default;
};

struct Neighbor {
    Vertex vertex;
    EdgeId edge;
};

/// Undirected, weighted, simple graph on vertices 0..n-1. Edges are stored
/// with u < v and sorted lexicographically; an EdgeId is a position in that
/// order. Instances are immutable once constructed.
class Graph {
  public:
    Graph() = default;

    /// Normalizes each edge to u < v and sorts. Throws InvalidGraph on a
    /// self-loop, a duplicate edge, or an endpoint >= n.
    Graph(std::size_t n, std::vector<Edge> edges);

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge> &edges() const noexcept { return edges_; }
    const Edge &edge(EdgeId id) const { return edges_.at(id); }

    std::span<const Neighbor> neighbors(Vertex v) const {
        return {adjacency_.data() + offsets_[v],
                adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const {
        return offsets_[v + 1] - offsets_[v];
    }

    /// Edge id of {u, v}, if present.
    std::optional<EdgeId> find_edge(Vertex u, Vertex v) const;
    bool has_edge(Vertex u, Vertex v) const {
        return find_edge(u, v).has_value();
    }

    double total_weight() const;
    bool is_unweighted() const;
    std::vector<std::size_t> degree_sequence() const;

    /// Stable 64-bit hash of (n, edges, weight bits).
    std::uint64_t content_hash() const;

    friend bool operator==(const Graph &a, const Graph &b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

  private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
};

/// Simple d-regular graph on n vertices from the pairing (configuration)
/// model. Stubs are paired one random pair at a time and a pair that would
/// form a loop or a multi-edge is redrawn; an attempt that gets stuck is
/// discarded. Throws Infeasible when n*d is odd or d >= n, and Error after
/// `max_attempts` discarded attempts.
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                     int max_attempts = 1000);

/// The edge-rooted tree in which both root endpoints and every vertex at
/// distance < p from the root edge have degree d, and vertices at distance
/// exactly p are leaves. Vertices are numbered breadth-first starting with
/// the root endpoints 0 and 1, so the root edge is EdgeId 0.
Graph tree_like_graph(std::size_t d, std::size_t p);

/// Closed-form vertex count of tree_like_graph(d, p).
std::size_t tree_like_vertex_count(std::size_t d, std::size_t p);

Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph petersen_graph();

/// Kneser graph K(n, k): k-subsets of {0..n-1}, adjacent when disjoint.
/// Subsets are numbered in lexicographic order.
Graph kneser_graph(std::size_t n, std::size_t k);

/// Disjoint union, with b's vertices shifted by a.num_vertices().
Graph disjoint_union(const Graph &a, const Graph &b);

/// Relabels vertex v as perm[v].
Graph permute(const Graph &g, std::span<const Vertex> perm);

/// Subgraph induced by `vertices`; vertex vertices[i] becomes i.
Graph induced_subgraph(const Graph &g, std::span<const Vertex> vertices);

/// Length of the shortest cycle, or nullopt for a forest.
std::optional<std::size_t> girth(const Graph &g);

std::size_t triangle_count(const Graph &g);

bool is_connected(const Graph &g);
bool is_bipartite(const Graph &g);

/// Distance of every vertex from the nearest of `sources`; vertices farther
/// than `max_distance` (or unreachable) get -1.
std::vector<int> multi_source_distances(const Graph &g,
                                        std::span<const Vertex> sources,
                                        int max_distance);

struct Neighborhood {
    /// Vertices within distance r of either endpoint, ordered by (distance,
    /// vertex id).
    std::vector<Vertex> vertices;
    /// distance[i] is the distance of vertices[i].
    std::vector<int> distance;
    /// Edges with at least one endpoint within distance r-1, plus the root
    /// edge itself; ascending EdgeId.
    std::vector<EdgeId> edges;
};

Neighborhood neighborhood(const Graph &g, EdgeId e, int r);

enum class SwapStatus { moved, no_move };

struct SwapResult {
    Graph graph;
    SwapStatus status;
};

/// One step of the degree-preserving edge-swap walk: pick two edges with
/// four distinct endpoints, replace them with one of the two other pairings
/// on the same endpoints (chosen at random), and re-pick the edge pair when
/// that pairing would duplicate an existing edge. After `max_attempts`
/// failed picks the input is returned with SwapStatus::no_move.
/// Throws InvalidGraph for weighted input or fewer than two edges.
SwapResult edge_swap_step(const Graph &g, Rng &rng, int max_attempts = 1000);

/// Backtracking isomorphism test for unweighted graphs. Throws
/// LimitExceeded when n exceeds `max_vertices`.
bool are_isomorphic(const Graph &a, const Graph &b,
                    std::size_t max_vertices = 30);

} // namespace qlc
