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
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "qlc/error.hpp"
#include "qlc/graph.hpp"

using namespace qlc;

namespace {

std::size_t brute_triangles(const Graph &g) {
    std::size_t count = 0;
    const auto n = static_cast<Vertex>(g.num_vertices());
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) {
            for (Vertex c = b + 1; c < n; ++c) {
                count += g.has_edge(a, b) && g.has_edge(b, c) &&
                         g.has_edge(a, c);
            }
        }
    }
    return count;
}

Graph two_triangles() {
    return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

} // namespace

TEST_CASE("graph construction normalizes and validates") {
    const Graph g(3, {{2, 1, 0.5}, {0, 1}});
    REQUIRE(g.num_edges() == 2);
    CHECK(g.edge(0) == Edge{0, 1, 1.0});
    CHECK(g.edge(1) == Edge{1, 2, 0.5});
    CHECK(g.find_edge(2, 1) == EdgeId{1});
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK(g.total_weight() == doctest::Approx(1.5));
    CHECK_FALSE(g.is_unweighted());
    CHECK_THROWS_AS(Graph(2, {{0, 0}}), InvalidGraph);
    CHECK_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), InvalidGraph);
    CHECK_THROWS_AS(Graph(2, {{0, 2}}), InvalidGraph);
}

TEST_CASE("random_regular") {
    SUBCASE("K4 is the only cubic graph on four vertices") {
        CHECK(random_regular(4, 3, 7) == complete_graph(4));
    }
    SUBCASE("n=10 d=3 degree count") {
        const Graph g = random_regular(10, 3, 1);
        CHECK(g.num_edges() == 15);
        for (Vertex v = 0; v < 10; ++v) {
            CHECK(g.degree(v) == 3);
        }
    }
    SUBCASE("infeasible") {
        CHECK_THROWS_AS(random_regular(5, 3, 0), Infeasible);
        CHECK_THROWS_AS(random_regular(4, 4, 0), Infeasible);
    }
    SUBCASE("reproducible and regular across seeds") {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const std::size_t d = 2 + seed % 5;
            const std::size_t n = 2 * (d + 1 + seed % 7);
            const Graph a = random_regular(n, d, seed);
            CHECK(a == random_regular(n, d, seed));
            const auto degrees = a.degree_sequence();
            CHECK(std::all_of(degrees.begin(), degrees.end(),
                              [&](std::size_t x) { return x == d; }));
        }
    }
}

TEST_CASE("tree_like_graph vertex counts and shape") {
    const std::vector<std::vector<std::size_t>> table = {
        {6, 14, 30, 62, 126}, {8, 26, 80, 242}, {10, 42, 170, 682},
        {12, 62, 312},        {14, 86, 518}};
    for (std::size_t d = 3; d <= 7; ++d) {
        for (std::size_t p = 1; p <= table[d - 3].size(); ++p) {
            CHECK(tree_like_graph(d, p).num_vertices() == table[d - 3][p - 1]);
        }
    }
    for (std::size_t d = 2; d <= 7; ++d) {
        for (std::size_t p = 1; p <= 5; ++p) {
            std::size_t expect = 0, power = 1;
            for (std::size_t i = 0; i <= p; ++i, power *= d - 1) {
                expect += 2 * power;
            }
            CHECK(tree_like_vertex_count(d, p) == expect);
            if (expect > 20000) {
                continue;
            }
            const Graph g = tree_like_graph(d, p);
            CHECK(g.num_vertices() == expect);
            CHECK(g.num_edges() == expect - 1);
            CHECK(g.edge(0) == Edge{0, 1, 1.0});
            CHECK(is_bipartite(g));
            CHECK_FALSE(girth(g).has_value());
            const Vertex root[] = {0, 1};
            const auto dist = multi_source_distances(g, root, 1 << 20);
            for (Vertex v = 0; v < g.num_vertices(); ++v) {
                const auto want = dist[v] < static_cast<int>(p) ? d : 1;
                CHECK(g.degree(v) == want);
            }
        }
    }
    const Graph path = tree_like_graph(2, 1);
    CHECK(path.num_vertices() == 4);
    CHECK(path.num_edges() == 3);
}

TEST_CASE("girth and triangles") {
    CHECK(girth(complete_graph(4)) == std::size_t{3});
    CHECK(girth(cycle_graph(5)) == std::size_t{5});
    CHECK(girth(petersen_graph()) == std::size_t{5});
    CHECK_FALSE(girth(tree_like_graph(3, 2)).has_value());
    CHECK(triangle_count(complete_graph(4)) == 4);
    CHECK(triangle_count(cycle_graph(6)) == 0);
    CHECK(triangle_count(petersen_graph()) == brute_triangles(petersen_graph()));
    CHECK(triangle_count(petersen_graph()) == 0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = random_regular(12, 4, seed);
        CHECK(triangle_count(g) == brute_triangles(g));
    }
}

TEST_CASE("neighborhood") {
    const Graph k2(2, {{0, 1}});
    auto nb = neighborhood(k2, 0, 1);
    CHECK(nb.vertices.size() == 2);
    CHECK(nb.edges.size() == 1);

    const Graph c6 = cycle_graph(6);
    for (EdgeId e = 0; e < 6; ++e) {
        nb = neighborhood(c6, e, 1);
        CHECK(nb.vertices.size() == 4);
        CHECK(nb.edges.size() == 3);
    }
    nb = neighborhood(tree_like_graph(3, 2), 0, 2);
    CHECK(nb.vertices.size() == 14);
    CHECK(nb.edges.size() == 13);
    nb = neighborhood(c6, 0, 0);
    CHECK(nb.vertices.size() == 2);
    CHECK(nb.edges == std::vector<EdgeId>{0});
}

TEST_CASE("high girth implies tree-like neighborhoods") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 200 && checked < 20; ++seed) {
        const Graph g = random_regular(40, 3, seed);
        const auto gi = girth(g);
        for (int p = 1; p <= 3; ++p) {
            if (gi && *gi < static_cast<std::size_t>(2 * p + 2)) {
                continue;
            }
            ++checked;
            for (EdgeId e = 0; e < g.num_edges(); e += 7) {
                const auto nb = neighborhood(g, e, p);
                std::vector<Edge> cone;
                std::vector<Vertex> index(g.num_vertices(), 0);
                for (std::size_t i = 0; i < nb.vertices.size(); ++i) {
                    index[nb.vertices[i]] = static_cast<Vertex>(i);
                }
                for (const auto id : nb.edges) {
                    cone.push_back({index[g.edge(id).u], index[g.edge(id).v]});
                }
                const Graph tree(nb.vertices.size(), std::move(cone));
                CHECK(tree.num_edges() + 1 == tree.num_vertices());
                CHECK(is_connected(tree));
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("edge_swap_step") {
    SUBCASE("4-cycle has one valid rewiring") {
        const Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
        Rng rng(3);
        for (int i = 0; i < 20; ++i) {
            const auto r = edge_swap_step(c4, rng);
            REQUIRE(r.status == SwapStatus::moved);
            const auto &g = r.graph;
            CHECK(g.num_edges() == 4);
            CHECK(g.degree_sequence() == c4.degree_sequence());
            int differing = 0;
            for (const auto &e : g.edges()) {
                differing += !c4.has_edge(e.u, e.v);
            }
            CHECK(differing == 2);
            CHECK((g.has_edge(0, 2) && g.has_edge(1, 3)));
        }
    }
    SUBCASE("K4 never moves") {
        Rng rng(1);
        const auto r = edge_swap_step(complete_graph(4), rng, 50);
        CHECK(r.status == SwapStatus::no_move);
        CHECK(r.graph == complete_graph(4));
    }
    SUBCASE("weighted input rejected") {
        Rng rng(1);
        CHECK_THROWS_AS(edge_swap_step(Graph(4, {{0, 1, 2.0}, {2, 3}}), rng),
                        InvalidGraph);
    }
    SUBCASE("long walk preserves degrees and simpleness") {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            Rng rng(seed);
            Graph g = random_regular(16, 3 + seed % 2 * 2, seed);
            const auto degrees = g.degree_sequence();
            for (int step = 0; step < 2500; ++step) {
                auto r = edge_swap_step(g, rng);
                if (r.status == SwapStatus::moved) {
                    int differing = 0;
                    for (const auto &e : r.graph.edges()) {
                        differing += !g.has_edge(e.u, e.v);
                    }
                    REQUIRE(differing == 2);
                }
                g = std::move(r.graph);
                REQUIRE(g.degree_sequence() == degrees);
            }
        }
    }
}

TEST_CASE("are_isomorphic") {
    const Graph c5 = cycle_graph(5);
    const std::vector<Vertex> perm = {3, 0, 4, 1, 2};
    CHECK(are_isomorphic(c5, permute(c5, perm)));
    CHECK_FALSE(are_isomorphic(cycle_graph(6), two_triangles()));
    CHECK(are_isomorphic(petersen_graph(), kneser_graph(5, 2)));
    const Graph prism(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},
                           {5, 6}, {6, 7}, {7, 8}, {8, 9}, {5, 9},
                           {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}});
    CHECK_FALSE(are_isomorphic(petersen_graph(), prism));
    CHECK_THROWS_AS(are_isomorphic(cycle_graph(40), cycle_graph(40)),
                    LimitExceeded);

    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const Graph g = random_regular(14, 3, static_cast<std::uint64_t>(t));
        std::vector<Vertex> p(14);
        std::iota(p.begin(), p.end(), 0);
        shuffle(p.begin(), p.end(), rng);
        CHECK(are_isomorphic(g, permute(g, p)));
    }
}

TEST_CASE("disjoint union and induced subgraph") {
    const Graph u = disjoint_union(cycle_graph(3), cycle_graph(3));
    CHECK(u == two_triangles());
    CHECK_FALSE(is_connected(u));
    const std::vector<Vertex> keep = {4, 3, 5};
    const Graph s = induced_subgraph(u, keep);
    CHECK(s == cycle_graph(3));
}
