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
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qlc/discover.hpp"
#include "qlc/error.hpp"
#include "support/oracles.hpp"

using namespace qlc;

namespace {

Graph relabeled(const Graph &g, Rng &rng) {
    std::vector<Vertex> perm(g.num_vertices());
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    return permute(g, perm);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

TEST_CASE("random angles") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_angles(3, rng);
        REQUIRE(a.depth() == 3);
        for (const double x : a.flat()) {
            CHECK(x >= 0.0);
            CHECK(x < 2.0 * std::numbers::pi);
        }
    }
}

TEST_CASE("distinguish isomorphic and non-isomorphic pairs") {
    Rng rng(11);
    const Graph g = petersen_graph();
    const auto same = distinguish(g, relabeled(g, rng), 2, rng);
    CHECK_FALSE(same.separated);
    CHECK_FALSE(same.degenerate);
    CHECK(same.trials.size() == 8);
    CHECK(same.epsilon == doctest::Approx(15e-9));
    for (const auto &t : same.trials) {
        CHECK(t.difference <= same.epsilon);
    }

    DistinguishOptions opts;
    opts.trials = 3;
    const Graph two_triangles = disjoint_union(cycle_graph(3), cycle_graph(3));
    const auto diff = distinguish(cycle_graph(6), two_triangles, 1, rng, opts);
    CHECK(diff.separated);
    REQUIRE_FALSE(diff.trials.empty());
    CHECK(diff.trials.size() <= 3);
    // Early stop: only the last trial separates.
    for (std::size_t i = 0; i + 1 < diff.trials.size(); ++i) {
        CHECK(diff.trials[i].difference <= diff.epsilon);
    }
    CHECK(diff.trials.back().difference > diff.epsilon);
    const auto &t = diff.trials.back();
    CHECK(t.e1 == doctest::Approx(testing::p1_energy(cycle_graph(6), t.angles.gamma()[0],
                                                     t.angles.beta()[0]))
                      .epsilon(1e-10));
    CHECK(t.e2 == doctest::Approx(testing::p1_energy(two_triangles, t.angles.gamma()[0],
                                                     t.angles.beta()[0]))
                      .epsilon(1e-10));

    const auto degenerate = distinguish(cycle_graph(6), cycle_graph(7), 1, rng);
    CHECK(degenerate.separated);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.trials.empty());

    Graph weighted(2, {{0, 1, 2.0}});
    CHECK_THROWS_AS(distinguish(weighted, complete_graph(2), 1, rng), InvalidGraph);
}

TEST_CASE("distinguish replays from the recorded angles") {
    Rng rng(2024);
    const auto graphs = testing::connected_cubic_graphs(10);
    for (std::size_t i = 0; i + 1 < graphs.size(); i += 3) {
        const auto v = distinguish(graphs[i], graphs[i + 1], 2, rng);
        const auto again = replay_verdict(graphs[i], graphs[i + 1], v);
        REQUIRE(again.trials.size() == v.trials.size());
        CHECK(again.separated == v.separated);
        for (std::size_t j = 0; j < v.trials.size(); ++j) {
            CHECK(std::abs(again.trials[j].e1 - v.trials[j].e1) <= 1e-12);
            CHECK(std::abs(again.trials[j].e2 - v.trials[j].e2) <= 1e-12);
        }
        const auto parsed = verdict_from_json(verdict_to_json(v));
        CHECK(parsed.separated == v.separated);
        CHECK(parsed.epsilon == v.epsilon);
        REQUIRE(parsed.trials.size() == v.trials.size());
        for (std::size_t j = 0; j < v.trials.size(); ++j) {
            CHECK(parsed.trials[j].e1 == v.trials[j].e1);
            CHECK(parsed.trials[j].angles == v.trials[j].angles);
        }
    }
}

TEST_CASE("landscape basics") {
    Rng rng(7);
    const Graph g = random_regular(12, 3, 9);
    const auto l = landscape({g}, {"g"}, 2, 2, rng);
    REQUIRE(l.matrix.size() == 1);
    REQUIRE(l.matrix[0].size() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        const auto direct = energy_query(g, l.angles[j]);
        CHECK(l.matrix[0][j] == doctest::Approx(direct.ratio).epsilon(1e-12));
    }

    LandscapeOptions total;
    total.normalization = Normalization::total;
    const auto dup = landscape({g, g}, {}, l.angles, total);
    CHECK(dup.graphs == std::vector<std::string>{"0", "1"});
    CHECK(dup.matrix[0] == dup.matrix[1]);
    CHECK(dup.matrix[0][0] == doctest::Approx(l.matrix[0][0] * 18).epsilon(1e-12));

    std::ostringstream csv;
    write_landscape_csv(csv, l);
    CHECK(csv.str().rfind("graph_id,angles_1,angles_2\ng,", 0) == 0);
    const auto doc = landscape_to_json(l, 7);
    CHECK(doc.at("seed") == 7);
    CHECK(doc.at("normalization") == "per-edge");

    Rng again(7);
    CHECK(landscape({g}, {"g"}, 2, 2, again).matrix == l.matrix);
    CHECK_THROWS_AS(landscape({g}, {"g"}, 0, 1, rng), Error);
    CHECK_THROWS_AS(landscape({g}, {"a", "b"}, 1, 1, rng), Error);
}

TEST_CASE("fingerprints are isomorphism invariant") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 3 + trial % 2;
        const std::size_t n = 8 + 2 * (trial % 5);
        const Graph g = random_regular(n, d, 1000 + trial);
        const auto l = landscape({g, relabeled(g, rng)}, {}, 3, 1 + trial % 2, rng);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(l.matrix[0][j] - l.matrix[1][j]) <= 1e-10);
        }
    }
}

TEST_CASE("depth-one energy of cubic graphs depends only on triangles") {
    Rng rng(31);
    const auto graphs = testing::connected_cubic_graphs(10);
    REQUIRE(graphs.size() == 19);
    LandscapeOptions opts;
    opts.normalization = Normalization::total;
    const auto l = landscape(graphs, {}, 20, 1, rng, opts);
    std::size_t equal_pairs = 0, unequal_pairs = 0;
    for (std::size_t a = 0; a < graphs.size(); ++a) {
        for (std::size_t b = a + 1; b < graphs.size(); ++b) {
            std::size_t separated = 0;
            for (std::size_t j = 0; j < 20; ++j) {
                const double diff = std::abs(l.matrix[a][j] - l.matrix[b][j]);
                if (triangle_count(graphs[a]) == triangle_count(graphs[b])) {
                    CHECK(diff <= 1e-9);
                } else {
                    separated += diff > 1e-9;
                }
            }
            if (triangle_count(graphs[a]) == triangle_count(graphs[b])) {
                ++equal_pairs;
            } else {
                ++unequal_pairs;
                CHECK(separated >= 19);
            }
        }
    }
    CHECK(equal_pairs > 0);
    CHECK(unequal_pairs > 0);
}

TEST_CASE("edge-swap walk") {
    Rng rng(3);
    const Graph g = random_regular(12, 3, 4);
    const auto still = walk_experiment(g, 0, 3, 1, rng);
    REQUIRE(still.rows.size() == 1);
    CHECK(still.rows[0].distance == 0.0);
    CHECK(still.rows[0].graph == g);

    const auto w = walk_experiment(g, 30, 3, 1, rng);
    REQUIRE(w.rows.size() == 31);
    for (const auto &row : w.rows) {
        CHECK(row.graph.degree_sequence() == g.degree_sequence());
        CHECK(row.graph.num_edges() == g.num_edges());
        const auto direct = landscape({row.graph}, {}, w.angles);
        CHECK(direct.matrix[0] == row.fingerprint);
    }
    std::ostringstream csv;
    write_walk_csv(csv, w);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "step,moved,f_1,f_2,f_3,distance");
    std::size_t count = 0;
    for (std::string line; std::getline(lines, line);) {
        ++count;
    }
    CHECK(count == 31);

    const Graph path(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(walk_experiment(path, 1, 1, 1, rng), InvalidGraph);
}

// A few minutes of state-vector work; registered as its own ctest entry.
TEST_CASE("walk distance grows with the number of swaps" * doctest::skip()) {
    Rng rng(17);
    const Graph g = random_regular(20, 5, 17);
    LandscapeOptions opts;
    opts.energy.method = Method::state_vector;
    const auto w = walk_experiment(g, 200, 3, 3, rng, opts);
    std::vector<double> first, last;
    for (std::size_t s = 1; s <= 50; ++s) {
        first.push_back(w.rows[s].distance);
        last.push_back(w.rows[w.rows.size() - s].distance);
    }
    CHECK(median(last) > median(first));
}
