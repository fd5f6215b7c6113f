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
#include "qlc/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <deque>
#include <functional>
#include <numeric>
#include <string>

#include "qlc/error.hpp"

namespace qlc {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t &h, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xffU;
        h *= kFnvPrime;
    }
}

std::string edge_string(Vertex u, Vertex v) {
    return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

} // namespace

Graph::Graph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
    for (auto &e : edges_) {
        if (e.u == e.v) {
            throw InvalidGraph("self-loop at vertex " + std::to_string(e.u));
        }
        if (e.u >= n_ || e.v >= n_) {
            throw InvalidGraph("edge " + edge_string(e.u, e.v) +
                               " has an endpoint >= n = " + std::to_string(n_));
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
            throw InvalidGraph("duplicate edge " +
                               edge_string(edges_[i].u, edges_[i].v));
        }
    }

    std::vector<std::size_t> degree(n_, 0);
    for (const auto &e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t v = 0; v < n_; ++v) {
        offsets_[v + 1] = offsets_[v] + degree[v];
    }
    adjacency_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t id = 0; id < edges_.size(); ++id) {
        const auto &e = edges_[id];
        adjacency_[fill[e.u]++] = {e.v, static_cast<EdgeId>(id)};
        adjacency_[fill[e.v]++] = {e.u, static_cast<EdgeId>(id)};
    }
    for (std::size_t v = 0; v < n_; ++v) {
        std::sort(adjacency_.begin() + offsets_[v],
                  adjacency_.begin() + offsets_[v + 1],
                  [](const Neighbor &a, const Neighbor &b) {
                      return a.vertex < b.vertex;
                  });
    }
}

std::optional<EdgeId> Graph::find_edge(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_) {
        return std::nullopt;
    }
    const auto nb = neighbors(u);
    const auto it = std::lower_bound(
        nb.begin(), nb.end(), v,
        [](const Neighbor &a, Vertex x) { return a.vertex < x; });
    if (it != nb.end() && it->vertex == v) {
        return it->edge;
    }
    return std::nullopt;
}

double Graph::total_weight() const {
    double total = 0.0;
    for (const auto &e : edges_) {
        total += e.w;
    }
    return total;
}

bool Graph::is_unweighted() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Edge &e) { return e.w == 1.0; });
}

std::vector<std::size_t> Graph::degree_sequence() const {
    std::vector<std::size_t> out(n_);
    for (std::size_t v = 0; v < n_; ++v) {
        out[v] = degree(static_cast<Vertex>(v));
    }
    return out;
}

std::uint64_t Graph::content_hash() const {
    std::uint64_t h = kFnvOffset;
    fnv_mix(h, n_);
    for (const auto &e : edges_) {
        fnv_mix(h, e.u);
        fnv_mix(h, e.v);
        fnv_mix(h, std::bit_cast<std::uint64_t>(e.w));
    }
    return h;
}

// Stubs are paired one random pair at a time, re-drawing a pair that would
// form a loop or a multi-edge. When no admissible pair is left among the
// remaining stubs the attempt is discarded and counted against the budget.
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                     int max_attempts) {
    if (d >= n || (n * d) % 2 != 0) {
        throw Infeasible("no simple " + std::to_string(d) +
                         "-regular graph on " + std::to_string(n) +
                         " vertices");
    }
    Rng rng(seed);
    std::vector<Vertex> stubs;
    std::vector<std::vector<Vertex>> adj(n);
    auto admissible = [&](Vertex a, Vertex b) {
        return a != b &&
               std::find(adj[a].begin(), adj[a].end(), b) == adj[a].end();
    };

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        stubs.clear();
        for (std::size_t v = 0; v < n; ++v) {
            adj[v].clear();
            stubs.insert(stubs.end(), d, static_cast<Vertex>(v));
        }
        std::vector<Edge> edges;
        edges.reserve(n * d / 2);
        bool stuck = false;
        while (!stubs.empty() && !stuck) {
            bool paired = false;
            for (int draw = 0; draw < 64 && !paired; ++draw) {
                const auto i = uniform_index(rng, stubs.size());
                const auto j = uniform_index(rng, stubs.size());
                if (i == j || !admissible(stubs[i], stubs[j])) {
                    continue;
                }
                const Vertex a = stubs[i];
                const Vertex b = stubs[j];
                adj[a].push_back(b);
                adj[b].push_back(a);
                edges.push_back({a, b, 1.0});
                const auto hi = std::max(i, j);
                const auto lo = std::min(i, j);
                stubs[hi] = stubs.back();
                stubs.pop_back();
                stubs[lo] = stubs.back();
                stubs.pop_back();
                paired = true;
            }
            if (!paired) {
                stuck = true;
                for (std::size_t i = 0; i < stubs.size() && stuck; ++i) {
                    for (std::size_t j = i + 1; j < stubs.size(); ++j) {
                        if (admissible(stubs[i], stubs[j])) {
                            stuck = false;
                            break;
                        }
                    }
                }
            }
        }
        if (!stuck) {
            return Graph(n, std::move(edges));
        }
    }
    throw Error("random_regular(" + std::to_string(n) + ", " +
                std::to_string(d) + "): pairing rejected " +
                std::to_string(max_attempts) + " times");
}

std::size_t tree_like_vertex_count(std::size_t d, std::size_t p) {
    std::size_t total = 0;
    std::size_t layer = 1;
    for (std::size_t i = 0; i <= p; ++i) {
        total += layer;
        layer *= d - 1;
    }
    return 2 * total;
}

Graph tree_like_graph(std::size_t d, std::size_t p) {
    if (d < 2 || p < 1) {
        throw Infeasible("tree_like_graph requires d >= 2 and p >= 1");
    }
    std::vector<Edge> edges{{0, 1, 1.0}};
    std::vector<Vertex> frontier{0, 1};
    Vertex next = 2;
    for (std::size_t depth = 0; depth < p; ++depth) {
        std::vector<Vertex> grown;
        for (const Vertex parent : frontier) {
            for (std::size_t c = 0; c + 1 < d; ++c) {
                edges.push_back({parent, next, 1.0});
                grown.push_back(next++);
            }
        }
        frontier = std::move(grown);
    }
    return Graph(next, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        edges.push_back({static_cast<Vertex>(i),
                         static_cast<Vertex>((i + 1) % n), 1.0});
    }
    return Graph(n, std::move(edges));
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i) {
        for (Vertex j = i + 1; j < n; ++j) {
            edges.push_back({i, j, 1.0});
        }
    }
    return Graph(n, std::move(edges));
}

Graph petersen_graph() {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 5; ++i) {
        edges.push_back({i, (i + 1) % 5, 1.0});
        edges.push_back({i, i + 5, 1.0});
        edges.push_back({i + 5, (i + 2) % 5 + 5, 1.0});
    }
    return Graph(10, std::move(edges));
}

Graph kneser_graph(std::size_t n, std::size_t k) {
    std::vector<std::uint64_t> subsets;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) == k) {
            subsets.push_back(mask);
        }
    }
    // Lexicographic order of the sorted element lists.
    std::sort(subsets.begin(), subsets.end(),
              [](std::uint64_t a, std::uint64_t b) {
                  while (a != 0 && b != 0) {
                      const int x = std::countr_zero(a);
                      const int y = std::countr_zero(b);
                      if (x != y) {
                          return x < y;
                      }
                      a &= a - 1;
                      b &= b - 1;
                  }
                  return a == 0 && b != 0;
              });
    std::vector<Edge> edges;
    for (Vertex i = 0; i < subsets.size(); ++i) {
        for (Vertex j = i + 1; j < subsets.size(); ++j) {
            if ((subsets[i] & subsets[j]) == 0) {
                edges.push_back({i, j, 1.0});
            }
        }
    }
    return Graph(subsets.size(), std::move(edges));
}

Graph disjoint_union(const Graph &a, const Graph &b) {
    std::vector<Edge> edges = a.edges();
    const auto shift = static_cast<Vertex>(a.num_vertices());
    for (const auto &e : b.edges()) {
        edges.push_back({e.u + shift, e.v + shift, e.w});
    }
    return Graph(a.num_vertices() + b.num_vertices(), std::move(edges));
}

Graph permute(const Graph &g, std::span<const Vertex> perm) {
    if (perm.size() != g.num_vertices()) {
        throw InvalidGraph("permutation size does not match vertex count");
    }
    std::vector<Edge> edges;
    edges.reserve(g.num_edges());
    for (const auto &e : g.edges()) {
        edges.push_back({perm[e.u], perm[e.v], e.w});
    }
    return Graph(g.num_vertices(), std::move(edges));
}

Graph induced_subgraph(const Graph &g, std::span<const Vertex> vertices) {
    std::vector<std::int64_t> local(g.num_vertices(), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        local[vertices[i]] = static_cast<std::int64_t>(i);
    }
    std::vector<Edge> edges;
    for (const auto &e : g.edges()) {
        if (local[e.u] >= 0 && local[e.v] >= 0) {
            edges.push_back({static_cast<Vertex>(local[e.u]),
                             static_cast<Vertex>(local[e.v]), e.w});
        }
    }
    return Graph(vertices.size(), std::move(edges));
}

std::optional<std::size_t> girth(const Graph &g) {
    const auto n = g.num_vertices();
    std::size_t best = SIZE_MAX;
    std::vector<int> dist(n);
    std::vector<std::int64_t> parent(n);
    std::vector<Vertex> queue;
    for (Vertex s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.assign(1, s);
        dist[s] = 0;
        parent[s] = -1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const Vertex x = queue[head];
            if (2 * static_cast<std::size_t>(dist[x]) + 1 >= best) {
                break;
            }
            for (const auto &nb : g.neighbors(x)) {
                if (dist[nb.vertex] < 0) {
                    dist[nb.vertex] = dist[x] + 1;
                    parent[nb.vertex] = x;
                    queue.push_back(nb.vertex);
                } else if (parent[x] != static_cast<std::int64_t>(nb.vertex)) {
                    best = std::min<std::size_t>(
                        best, static_cast<std::size_t>(dist[x] +
                                                       dist[nb.vertex] + 1));
                }
            }
        }
    }
    if (best == SIZE_MAX) {
        return std::nullopt;
    }
    return best;
}

std::size_t triangle_count(const Graph &g) {
    std::size_t count = 0;
    for (const auto &e : g.edges()) {
        const auto a = g.neighbors(e.u);
        const auto b = g.neighbors(e.v);
        // Both lists are sorted; count common neighbors above v.
        auto i = a.begin();
        auto j = b.begin();
        while (i != a.end() && j != b.end()) {
            if (i->vertex < j->vertex) {
                ++i;
            } else if (j->vertex < i->vertex) {
                ++j;
            } else {
                if (i->vertex > e.v) {
                    ++count;
                }
                ++i;
                ++j;
            }
        }
    }
    return count;
}

bool is_connected(const Graph &g) {
    if (g.num_vertices() == 0) {
        return true;
    }
    const Vertex src = 0;
    const auto dist = multi_source_distances(g, {&src, 1},
                                             static_cast<int>(g.num_vertices()));
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

bool is_bipartite(const Graph &g) {
    std::vector<int> side(g.num_vertices(), -1);
    std::vector<Vertex> queue;
    for (Vertex s = 0; s < g.num_vertices(); ++s) {
        if (side[s] >= 0) {
            continue;
        }
        side[s] = 0;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const Vertex x = queue[head];
            for (const auto &nb : g.neighbors(x)) {
                if (side[nb.vertex] < 0) {
                    side[nb.vertex] = 1 - side[x];
                    queue.push_back(nb.vertex);
                } else if (side[nb.vertex] == side[x]) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<int> multi_source_distances(const Graph &g,
                                        std::span<const Vertex> sources,
                                        int max_distance) {
    std::vector<int> dist(g.num_vertices(), -1);
    std::vector<Vertex> queue;
    for (const Vertex s : sources) {
        if (dist[s] < 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex x = queue[head];
        if (dist[x] >= max_distance) {
            continue;
        }
        for (const auto &nb : g.neighbors(x)) {
            if (dist[nb.vertex] < 0) {
                dist[nb.vertex] = dist[x] + 1;
                queue.push_back(nb.vertex);
            }
        }
    }
    return dist;
}

Neighborhood neighborhood(const Graph &g, EdgeId e, int r) {
    if (e >= g.num_edges()) {
        throw InvalidGraph("edge id " + std::to_string(e) + " out of range");
    }
    if (r < 0) {
        throw InvalidGraph("neighborhood radius must be >= 0");
    }
    const Edge &root = g.edge(e);
    const Vertex sources[2] = {root.u, root.v};
    const auto dist = multi_source_distances(g, sources, r);

    Neighborhood out;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (dist[v] >= 0) {
            out.vertices.push_back(v);
        }
    }
    std::stable_sort(out.vertices.begin(), out.vertices.end(),
                     [&](Vertex a, Vertex b) { return dist[a] < dist[b]; });
    for (const Vertex v : out.vertices) {
        out.distance.push_back(dist[v]);
    }
    for (EdgeId id = 0; id < g.num_edges(); ++id) {
        const auto &x = g.edge(id);
        const int du = dist[x.u];
        const int dv = dist[x.v];
        const bool inner = (du >= 0 && du <= r - 1) || (dv >= 0 && dv <= r - 1);
        if (inner || id == e) {
            out.edges.push_back(id);
        }
    }
    return out;
}

SwapResult edge_swap_step(const Graph &g, Rng &rng, int max_attempts) {
    if (!g.is_unweighted()) {
        throw InvalidGraph("edge_swap_step requires an unweighted graph");
    }
    const auto m = g.num_edges();
    if (m < 2) {
        throw InvalidGraph("edge_swap_step requires at least two edges");
    }
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const auto i = uniform_index(rng, m);
        const auto j = uniform_index(rng, m);
        const bool cross = uniform_index(rng, 2) == 1;
        if (i == j) {
            continue;
        }
        const Edge a = g.edge(static_cast<EdgeId>(i));
        const Edge b = g.edge(static_cast<EdgeId>(j));
        if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v) {
            continue;
        }
        // The two alternative pairings of {a.u, a.v, b.u, b.v}.
        const Edge x = cross ? Edge{a.u, b.v, 1.0} : Edge{a.u, b.u, 1.0};
        const Edge y = cross ? Edge{a.v, b.u, 1.0} : Edge{a.v, b.v, 1.0};
        if (g.has_edge(x.u, x.v) || g.has_edge(y.u, y.v)) {
            continue;
        }
        std::vector<Edge> edges;
        edges.reserve(m);
        for (std::size_t k = 0; k < m; ++k) {
            if (k != i && k != j) {
                edges.push_back(g.edges()[k]);
            }
        }
        edges.push_back(x);
        edges.push_back(y);
        return {Graph(g.num_vertices(), std::move(edges)), SwapStatus::moved};
    }
    return {g, SwapStatus::no_move};
}

namespace {

class IsoSearch {
  public:
    IsoSearch(const Graph &a, const Graph &b) : n_(a.num_vertices()) {
        adj_a_ = masks(a);
        adj_b_ = masks(b);
        deg_a_ = a.degree_sequence();
        deg_b_ = b.degree_sequence();
        // Map vertices of `a` in BFS order so each new vertex is constrained
        // by already-mapped neighbors.
        std::vector<bool> seen(n_, false);
        for (Vertex s = 0; s < n_; ++s) {
            if (seen[s]) {
                continue;
            }
            std::deque<Vertex> queue{s};
            seen[s] = true;
            while (!queue.empty()) {
                const Vertex x = queue.front();
                queue.pop_front();
                order_.push_back(x);
                for (const auto &nb : a.neighbors(x)) {
                    if (!seen[nb.vertex]) {
                        seen[nb.vertex] = true;
                        queue.push_back(nb.vertex);
                    }
                }
            }
        }
        map_.assign(n_, 0);
    }

    bool run() { return extend(0, 0); }

  private:
    static std::vector<std::uint64_t> masks(const Graph &g) {
        std::vector<std::uint64_t> out(g.num_vertices(), 0);
        for (const auto &e : g.edges()) {
            out[e.u] |= std::uint64_t{1} << e.v;
            out[e.v] |= std::uint64_t{1} << e.u;
        }
        return out;
    }

    bool extend(std::size_t depth, std::uint64_t used) {
        if (depth == n_) {
            return true;
        }
        const Vertex x = order_[depth];
        for (Vertex y = 0; y < n_; ++y) {
            if ((used >> y) & 1U || deg_a_[x] != deg_b_[y]) {
                continue;
            }
            bool ok = true;
            for (std::size_t k = 0; k < depth && ok; ++k) {
                const Vertex px = order_[k];
                const bool ea = (adj_a_[x] >> px) & 1U;
                const bool eb = (adj_b_[y] >> map_[px]) & 1U;
                ok = ea == eb;
            }
            if (!ok) {
                continue;
            }
            map_[x] = y;
            if (extend(depth + 1, used | (std::uint64_t{1} << y))) {
                return true;
            }
        }
        return false;
    }

    std::size_t n_;
    std::vector<std::uint64_t> adj_a_, adj_b_;
    std::vector<std::size_t> deg_a_, deg_b_;
    std::vector<Vertex> order_;
    std::vector<Vertex> map_;
};

} // namespace

bool are_isomorphic(const Graph &a, const Graph &b,
                    std::size_t max_vertices) {
    if (!a.is_unweighted() || !b.is_unweighted()) {
        throw InvalidGraph("are_isomorphic requires unweighted graphs");
    }
    const auto limit = std::min<std::size_t>(max_vertices, 64);
    if (a.num_vertices() > limit || b.num_vertices() > limit) {
        throw LimitExceeded("are_isomorphic is limited to " +
                            std::to_string(limit) + " vertices");
    }
    if (a.num_vertices() != b.num_vertices() ||
        a.num_edges() != b.num_edges()) {
        return false;
    }
    auto da = a.degree_sequence();
    auto db = b.degree_sequence();
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) {
        return false;
    }
    return IsoSearch(a, b).run();
}

} // namespace qlc
