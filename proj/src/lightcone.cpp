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
#include "qlc/lightcone.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>

#include "qlc/canonical.hpp"
#include "qlc/error.hpp"

namespace qlc {

namespace {

constexpr std::size_t max_labeled_cone = 64;

std::string weight_token(double w) {
    if (w == 1.0) {
        return "";
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(w)));
    return buf;
}

// AHU encoding of the subtree hanging below `v`.
std::string tree_code(const std::vector<std::vector<std::pair<std::uint32_t, double>>> &adj,
                      std::uint32_t v, std::uint32_t parent, double parent_w) {
    std::vector<std::string> children;
    for (const auto &[to, w] : adj[v]) {
        if (to != parent) {
            children.push_back(tree_code(adj, to, v, w));
        }
    }
    std::sort(children.begin(), children.end());
    std::string out = "(" + weight_token(parent_w);
    for (const auto &c : children) {
        out += c;
    }
    out += ")";
    return out;
}

std::string structure_key(const LightconeTemplate &t) {
    const std::size_t q = t.vertices.size();
    const std::string prefix = "p" + std::to_string(t.p) + ":";
    if (t.edges.size() + 1 == q) {
        std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(q);
        for (const auto &e : t.edges) {
            adj[e.a].push_back({e.b, e.weight});
            adj[e.b].push_back({e.a, e.weight});
        }
        const auto &root = t.edges[t.root];
        auto left = tree_code(adj, root.a, root.b, 1.0);
        auto right = tree_code(adj, root.b, root.a, 1.0);
        if (right < left) {
            std::swap(left, right);
        }
        return prefix + "T" + weight_token(root.weight) + "|" + left + right;
    }
    if (q <= max_labeled_cone) {
        ColoredGraph cg;
        cg.n = q;
        for (const int d : t.distance) {
            cg.vertex_color.push_back(static_cast<std::uint64_t>(d));
        }
        for (const auto &e : t.edges) {
            cg.edges.push_back({e.a, e.b, std::bit_cast<std::uint64_t>(e.weight)});
        }
        if (const auto cert = canonical_certificate(cg)) {
            std::string out = prefix + "G";
            for (const auto x : *cert) {
                out += std::to_string(x);
                out += ',';
            }
            return out;
        }
    }
    return prefix + "U" + std::to_string(t.edge);
}

} // namespace

LightconeTemplate lightcone(const Graph &g, EdgeId e, std::size_t p) {
    if (e >= g.num_edges()) {
        throw Error("edge id " + std::to_string(e) + " out of range");
    }
    if (p == 0) {
        throw Error("depth p must be at least 1");
    }
    const int depth = static_cast<int>(p);
    const Neighborhood nb = neighborhood(g, e, depth);

    LightconeTemplate t;
    t.edge = e;
    t.p = p;
    t.vertices = nb.vertices;
    t.distance = nb.distance;
    std::map<Vertex, std::uint32_t> local;
    for (std::uint32_t i = 0; i < t.vertices.size(); ++i) {
        local[t.vertices[i]] = i;
    }
    for (const auto id : nb.edges) {
        const Edge &ge = g.edge(id);
        const auto a = local.at(ge.u);
        const auto b = local.at(ge.v);
        const int near = std::min(t.distance[a], t.distance[b]);
        if (id == e) {
            t.root = t.edges.size();
        }
        t.edges.push_back(
            {id, a, b, ge.w, static_cast<std::uint32_t>(depth - near)});
    }

    // Variable j of qubit i; j == p - d is the shared one.
    IndexId next = 0;
    std::vector<std::uint32_t> base(t.vertices.size());
    std::vector<std::uint32_t> span_of(t.vertices.size());
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
        span_of[i] = static_cast<std::uint32_t>(depth - t.distance[i]);
        base[i] = next;
        next += 2 * span_of[i] + 1;
    }
    auto var = [&](std::uint32_t i, std::uint32_t j, bool bra) -> IndexId {
        if (j == span_of[i]) {
            return base[i] + 2 * span_of[i];
        }
        return base[i] + 2 * j + (bra ? 1 : 0);
    };

    auto add_phases = [&](std::uint32_t l, bool bra) {
        for (std::uint32_t k = 0; k < t.edges.size(); ++k) {
            const auto &ce = t.edges[k];
            if (ce.layers >= l) {
                t.wiring.push_back({var(ce.a, l - 1, bra), var(ce.b, l - 1, bra)});
                t.slots.push_back({SlotKind::phase, bra, l, k});
            }
        }
    };
    auto add_mixers = [&](std::uint32_t l, bool bra) {
        for (std::uint32_t i = 0; i < t.vertices.size(); ++i) {
            if (span_of[i] >= l) {
                t.wiring.push_back({var(i, l - 1, bra), var(i, l, bra)});
                t.slots.push_back({SlotKind::mixer, bra, l, i});
            }
        }
    };
    // Circuit order: the ket forward, the observable, the bra backward. The
    // sequential planner candidate relies on this order.
    for (std::uint32_t l = 1; l <= p; ++l) {
        add_phases(l, false);
        add_mixers(l, false);
    }
    const auto &root = t.edges[t.root];
    t.wiring.push_back({var(root.a, span_of[root.a], false),
                        var(root.b, span_of[root.b], false)});
    t.slots.push_back({SlotKind::observable, false, 0,
                       static_cast<std::uint32_t>(t.root)});
    for (auto l = static_cast<std::uint32_t>(p); l >= 1; --l) {
        add_mixers(l, true);
        add_phases(l, true);
    }

    t.structure_key = structure_key(t);
    return t;
}

std::vector<std::vector<Complex>> tensor_values(const LightconeTemplate &t,
                                                const AngleSequence &a,
                                                std::span<const double> weights) {
    if (a.depth() != t.p) {
        throw Error("angle depth " + std::to_string(a.depth()) +
                    " does not match lightcone depth " + std::to_string(t.p));
    }
    if (weights.size() != t.edges.size()) {
        throw Error("expected one weight per cone edge");
    }
    std::vector<std::vector<Complex>> values;
    values.reserve(t.slots.size());
    for (const auto &slot : t.slots) {
        const double sign = slot.conjugate ? -1.0 : 1.0;
        switch (slot.kind) {
        case SlotKind::phase: {
            const double theta = a.gamma()[slot.layer - 1] * weights[slot.target];
            const Complex ph = std::polar(1.0, -sign * theta);
            values.push_back({1.0, ph, ph, 1.0});
            break;
        }
        case SlotKind::mixer: {
            const double beta = a.beta()[slot.layer - 1];
            const Complex c{std::cos(beta), 0.0};
            const Complex s{0.0, -sign * std::sin(beta)};
            values.push_back({c, s, s, c});
            break;
        }
        case SlotKind::observable: {
            const Complex w{weights[slot.target], 0.0};
            values.push_back({0.0, w, w, 0.0});
            break;
        }
        }
    }
    return values;
}

std::vector<std::vector<Complex>> tensor_values(const LightconeTemplate &t,
                                                const AngleSequence &a) {
    std::vector<double> weights;
    weights.reserve(t.edges.size());
    for (const auto &e : t.edges) {
        weights.push_back(e.weight);
    }
    return tensor_values(t, a, weights);
}

namespace {

TensorNetwork assemble(const LightconeTemplate &t,
                       std::vector<std::vector<Complex>> values) {
    std::vector<Tensor> tensors;
    tensors.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        tensors.emplace_back(t.wiring[i], std::move(values[i]));
    }
    return TensorNetwork(std::move(tensors));
}

} // namespace

TensorNetwork instantiate(const LightconeTemplate &t, const AngleSequence &a) {
    return assemble(t, tensor_values(t, a));
}

TensorNetwork instantiate(const LightconeTemplate &t, const AngleSequence &a,
                          std::span<const double> weights) {
    return assemble(t, tensor_values(t, a, weights));
}

double normalization(const LightconeTemplate &t) {
    return std::ldexp(1.0, -static_cast<int>(t.vertices.size()));
}

Graph cone_graph(const LightconeTemplate &t) {
    std::vector<Edge> edges;
    edges.reserve(t.edges.size());
    for (const auto &e : t.edges) {
        edges.push_back({e.a, e.b, e.weight});
    }
    return Graph(t.vertices.size(), std::move(edges));
}

std::vector<std::vector<EdgeId>>
dedupe(std::span<const LightconeTemplate> templates) {
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<EdgeId>> groups;
    for (const auto &t : templates) {
        const auto [it, inserted] = index.emplace(t.structure_key, groups.size());
        if (inserted) {
            groups.emplace_back();
        }
        groups[it->second].push_back(t.edge);
    }
    for (auto &g : groups) {
        std::sort(g.begin(), g.end());
    }
    std::sort(groups.begin(), groups.end());
    return groups;
}

} // namespace qlc
