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

#include <sstream>

#include "qlc/error.hpp"
#include "qlc/graph_io.hpp"
#include "support/oracles.hpp"

using namespace qlc;

namespace {

GraphFile parse_edges(const std::string &text) {
    std::istringstream in(text);
    return read_edge_list(in);
}

std::vector<std::pair<std::size_t, std::size_t>> pairs_of(const Graph &g) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto &e : g.edges()) {
        out.emplace_back(e.u, e.v);
    }
    return out;
}

} // namespace

TEST_CASE("edge list parsing") {
    const auto f = parse_edges("0 1\n1 2\n");
    CHECK(f.graph == Graph(3, {{0, 1}, {1, 2}}));
    CHECK_FALSE(f.root_edge.has_value());

    const auto w = parse_edges("# comment\n0 2 0.25  # trailing\n\n1 2\n");
    CHECK(w.graph.edge(0).w == doctest::Approx(0.25));

    const auto sized = parse_edges("# n: 5\n# root-edge: 1\n0 1\n3 4\n");
    CHECK(sized.graph.num_vertices() == 5);
    CHECK(sized.root_edge == EdgeId{1});

    const auto labeled = parse_edges("a b\nb c\n");
    CHECK(labeled.graph == Graph(3, {{0, 1}, {1, 2}}));
    CHECK(labeled.labels == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("edge list errors carry positions") {
    CHECK_THROWS_AS(parse_edges("0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edges("0 1\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edges("# n: 2\n0 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edges("0 1 x\n"), ParseError);
    try {
        parse_edges("0 1\n1 2\n2 2\n");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.position() == 3);
    }
}

TEST_CASE("graph6 against the reference decoder") {
    const auto raw = testing::graph6_reference_decode("D?{");
    const Graph g = graph6_decode("D?{");
    CHECK(g.num_vertices() == raw.n);
    CHECK(pairs_of(g) == raw.edges);
    CHECK(raw.n == 5);
    CHECK(graph6_encode(g) == "D?{");

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 4 + 2 * (seed % 40);
        const Graph r = random_regular(n, 3, seed);
        const auto text = graph6_encode(r);
        const auto ref = testing::graph6_reference_decode(text);
        CHECK(ref.n == n);
        CHECK(pairs_of(r) == ref.edges);
        CHECK(graph6_decode(text) == r);
    }
    const Graph big = random_regular(100, 3, 9);
    CHECK(graph6_decode(graph6_encode(big)) == big);
    CHECK(graph6_decode(">>graph6<<" + graph6_encode(big)) == big);
    CHECK_THROWS_AS(graph6_encode(Graph(2, {{0, 1, 2.0}})), InvalidGraph);
    CHECK_THROWS_AS(graph6_decode("D?"), ParseError);
}

TEST_CASE("json and round trips") {
    const auto doc = nlohmann::json::parse(
        R"({"n": 4, "edges": [[0, 1, 2.5], [2, 3]], "root_edge": 0})");
    const auto f = graph_from_json(doc);
    CHECK(f.graph == Graph(4, {{0, 1, 2.5}, {2, 3}}));
    CHECK(f.root_edge == EdgeId{0});

    GraphFile file{tree_like_graph(3, 2), {}, EdgeId{0}};
    for (auto fmt : {GraphFormat::edge_list, GraphFormat::json,
                     GraphFormat::graph6}) {
        std::stringstream buf;
        save_graph(buf, file, fmt);
        const auto back = load_graph(buf, fmt);
        CHECK(back.graph == file.graph);
        if (fmt != GraphFormat::graph6) {
            CHECK(back.root_edge == file.root_edge);
        }
    }
    GraphFile weighted{Graph(3, {{0, 1, 0.1}, {1, 2, 1.0 / 3.0}}), {}, {}};
    std::stringstream buf;
    save_graph(buf, weighted, GraphFormat::edge_list);
    CHECK(load_graph(buf, GraphFormat::edge_list).graph == weighted.graph);
    CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(
                        R"({"n": 2, "edges": [[0, 0]]})")),
                    ParseError);
}
