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
#include "qlc/canonical.hpp"

#include <algorithm>
#include <bit>
#include <tuple>

namespace qlc {

namespace {

class Canonizer {
  public:
    Canonizer(const ColoredGraph &g, std::size_t max_leaves)
        : g_(g), max_leaves_(max_leaves), adj_(g.n) {
        for (const auto &e : g.edges) {
            adj_[e.u].push_back({e.v, e.color});
            adj_[e.v].push_back({e.u, e.color});
        }
    }

    std::optional<std::vector<std::uint64_t>> run() {
        // Initial cells ordered by the input vertex colors.
        std::vector<std::uint64_t> distinct = g_.vertex_color;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()),
                       distinct.end());
        std::vector<std::uint32_t> colors(g_.n);
        for (std::size_t v = 0; v < g_.n; ++v) {
            colors[v] = static_cast<std::uint32_t>(
                std::lower_bound(distinct.begin(), distinct.end(),
                                 g_.vertex_color[v]) -
                distinct.begin());
        }
        if (!search(std::move(colors))) {
            return std::nullopt;
        }
        return best_;
    }

  private:
    struct Arc {
        Vertex to;
        std::uint64_t color;
    };

    // Equitable refinement: recolor by (own color, multiset of neighbor
    // colors and edge colors) until the number of cells stops growing.
    // Ranks of sorted signatures keep the coloring isomorphism-invariant.
    void refine(std::vector<std::uint32_t> &colors) const {
        using Signature =
            std::pair<std::uint32_t,
                      std::vector<std::pair<std::uint32_t, std::uint64_t>>>;
        std::size_t cells = count_cells(colors);
        for (;;) {
            std::vector<Signature> sigs(g_.n);
            for (std::size_t v = 0; v < g_.n; ++v) {
                sigs[v].first = colors[v];
                for (const auto &arc : adj_[v]) {
                    sigs[v].second.emplace_back(colors[arc.to], arc.color);
                }
                std::sort(sigs[v].second.begin(), sigs[v].second.end());
            }
            std::vector<const Signature *> order(g_.n);
            for (std::size_t v = 0; v < g_.n; ++v) {
                order[v] = &sigs[v];
            }
            std::sort(order.begin(), order.end(),
                      [](const Signature *a, const Signature *b) {
                          return *a < *b;
                      });
            std::vector<std::uint32_t> next(g_.n);
            for (std::size_t v = 0; v < g_.n; ++v) {
                next[v] = static_cast<std::uint32_t>(
                    std::lower_bound(order.begin(), order.end(), &sigs[v],
                                     [](const Signature *a, const Signature *b) {
                                         return *a < *b;
                                     }) -
                    order.begin());
            }
            // Ranks with gaps: compress so colors stay dense.
            std::vector<std::uint32_t> keys(next);
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            for (auto &c : next) {
                c = static_cast<std::uint32_t>(
                    std::lower_bound(keys.begin(), keys.end(), c) -
                    keys.begin());
            }
            const std::size_t refined = keys.size();
            colors = std::move(next);
            if (refined == cells) {
                return;
            }
            cells = refined;
        }
    }

    static std::size_t count_cells(const std::vector<std::uint32_t> &colors) {
        std::vector<std::uint32_t> keys(colors);
        std::sort(keys.begin(), keys.end());
        return static_cast<std::size_t>(
            std::unique(keys.begin(), keys.end()) - keys.begin());
    }

    std::vector<std::uint64_t>
    certificate(const std::vector<std::uint32_t> &label) const {
        std::vector<std::uint64_t> out;
        out.reserve(1 + g_.n + 3 * g_.edges.size());
        out.push_back(g_.n);
        std::vector<std::uint64_t> by_label(g_.n);
        for (std::size_t v = 0; v < g_.n; ++v) {
            by_label[label[v]] = g_.vertex_color[v];
        }
        out.insert(out.end(), by_label.begin(), by_label.end());
        std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>>
            edges;
        edges.reserve(g_.edges.size());
        for (const auto &e : g_.edges) {
            const auto a = label[e.u];
            const auto b = label[e.v];
            edges.emplace_back(std::min(a, b), std::max(a, b), e.color);
        }
        std::sort(edges.begin(), edges.end());
        for (const auto &[a, b, c] : edges) {
            out.push_back(a);
            out.push_back(b);
            out.push_back(c);
        }
        return out;
    }

    bool search(std::vector<std::uint32_t> colors) {
        refine(colors);
        if (count_cells(colors) == g_.n) {
            if (++leaves_ > max_leaves_) {
                return false;
            }
            auto cert = certificate(colors);
            if (best_.empty() || cert < best_) {
                best_ = std::move(cert);
                best_label_ = colors;
            } else if (cert == best_) {
                record_automorphism(colors);
            }
            return true;
        }
        // Target cell: the smallest color with more than one member.
        std::vector<std::uint32_t> size(g_.n, 0);
        for (const auto c : colors) {
            ++size[c];
        }
        std::uint32_t target = 0;
        while (size[target] < 2) {
            ++target;
        }
        std::vector<Vertex> explored;
        for (std::size_t v = 0; v < g_.n; ++v) {
            if (colors[v] != target) {
                continue;
            }
            if (!explored.empty()) {
                // Children in one orbit of the automorphisms fixing the
                // current prefix root isomorphic subtrees.
                auto orbit = stabilizer_orbits();
                const auto root = find(orbit, static_cast<Vertex>(v));
                if (std::any_of(explored.begin(), explored.end(),
                                [&](Vertex u) { return find(orbit, u) == root; })) {
                    continue;
                }
            }
            explored.push_back(static_cast<Vertex>(v));
            std::vector<std::uint32_t> child(g_.n);
            for (std::size_t w = 0; w < g_.n; ++w) {
                child[w] = 2 * colors[w] +
                           ((colors[w] == target && w != v) ? 1U : 0U);
            }
            prefix_.push_back(static_cast<Vertex>(v));
            const bool ok = search(std::move(child));
            prefix_.pop_back();
            if (!ok) {
                return false;
            }
        }
        return true;
    }

    // Leaf labelings with equal certificates differ by an automorphism.
    void record_automorphism(const std::vector<std::uint32_t> &label) {
        std::vector<Vertex> inverse(g_.n);
        for (std::size_t v = 0; v < g_.n; ++v) {
            inverse[best_label_[v]] = static_cast<Vertex>(v);
        }
        std::vector<Vertex> perm(g_.n);
        bool identity = true;
        for (std::size_t v = 0; v < g_.n; ++v) {
            perm[v] = inverse[label[v]];
            identity = identity && perm[v] == v;
        }
        if (!identity && automorphisms_.size() < 256) {
            automorphisms_.push_back(std::move(perm));
        }
    }

    static Vertex find(std::vector<Vertex> &parent, Vertex v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }

    std::vector<Vertex> stabilizer_orbits() const {
        std::vector<Vertex> parent(g_.n);
        for (std::size_t v = 0; v < g_.n; ++v) {
            parent[v] = static_cast<Vertex>(v);
        }
        for (const auto &perm : automorphisms_) {
            const bool fixes = std::all_of(prefix_.begin(), prefix_.end(),
                                           [&](Vertex u) { return perm[u] == u; });
            if (!fixes) {
                continue;
            }
            for (std::size_t v = 0; v < g_.n; ++v) {
                const auto a = find(parent, static_cast<Vertex>(v));
                const auto b = find(parent, perm[v]);
                if (a != b) {
                    parent[std::max(a, b)] = std::min(a, b);
                }
            }
        }
        return parent;
    }

    const ColoredGraph &g_;
    std::size_t max_leaves_;
    std::vector<std::vector<Arc>> adj_;
    std::size_t leaves_ = 0;
    std::vector<std::uint64_t> best_;
    std::vector<std::uint32_t> best_label_;
    std::vector<Vertex> prefix_;
    std::vector<std::vector<Vertex>> automorphisms_;
};

} // namespace

std::optional<std::vector<std::uint64_t>>
canonical_certificate(const ColoredGraph &g, std::size_t max_leaves) {
    return Canonizer(g, max_leaves).run();
}

std::optional<std::vector<std::uint64_t>>
canonical_certificate(const Graph &g, std::size_t max_leaves) {
    ColoredGraph cg;
    cg.n = g.num_vertices();
    cg.vertex_color.assign(cg.n, 0);
    for (const auto &e : g.edges()) {
        cg.edges.push_back({e.u, e.v, std::bit_cast<std::uint64_t>(e.w)});
    }
    return canonical_certificate(cg, max_leaves);
}

} // namespace qlc
