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

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include "qlc/energy.hpp"
#include "qlc/error.hpp"
#include "qlc/lightcone.hpp"
#include "qlc/statevec.hpp"
#include "support/oracles.hpp"

using namespace qlc;

namespace {

constexpr double pi = std::numbers::pi;

AngleSequence random_angles(std::size_t p, Rng &rng) {
    std::vector<double> g(p), b(p);
    for (std::size_t i = 0; i < p; ++i) {
        g[i] = uniform(rng, 0.0, 2.0 * pi);
        b[i] = uniform(rng, 0.0, 2.0 * pi);
    }
    return {g, b};
}

EnergyOptions tn_only() {
    EnergyOptions o;
    o.method = Method::tensor_network;
    o.threads = 1;
    return o;
}

Graph random_weighted(std::size_t n, double density, Rng &rng) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (uniform01(rng) < density) {
                edges.push_back({u, v, uniform(rng, 0.1, 2.0)});
            }
        }
    }
    if (edges.empty()) {
        edges.push_back({0, 1, 1.0});
    }
    return Graph(n, std::move(edges));
}

} // namespace

TEST_CASE("angle sequences") {
    const AngleSequence a({-0.5, 7.0}, {2.0 * pi, 1.0});
    CHECK(a.depth() == 2);
    CHECK(a.gamma()[0] == doctest::Approx(2.0 * pi - 0.5));
    CHECK(a.gamma()[1] == doctest::Approx(7.0 - 2.0 * pi));
    CHECK(a.beta()[0] == 0.0);
    CHECK(angles_from_json(angles_to_json(a)) == a);
    CHECK(AngleSequence::from_flat(a.flat()) == a);
    CHECK_THROWS_AS(AngleSequence({}, {}), Error);
    CHECK_THROWS_AS(AngleSequence({1.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(angles_from_json(nlohmann::json::parse("[[1],[\"x\"]]")), Error);
    CHECK(angle_symmetries(a).size() == 4);
}

TEST_CASE("lightcone shapes") {
    const Graph k2(2, {{0, 1}});
    auto t = lightcone(k2, 0, 1);
    CHECK(t.num_qubits() == 2);
    CHECK(t.edges.size() == 1);
    std::size_t phases = 0, mixers = 0;
    for (const auto &s : t.slots) {
        phases += s.kind == SlotKind::phase;
        mixers += s.kind == SlotKind::mixer;
    }
    CHECK(phases == 2);
    CHECK(mixers == 4);

    CHECK(lightcone(tree_like_graph(3, 4), 0, 4).num_qubits() == 62);
    t = lightcone(cycle_graph(6), 2, 1);
    CHECK(t.num_qubits() == 4);
    CHECK(t.edges.size() == 3);
    CHECK_THROWS_AS(lightcone(k2, 1, 1), Error);
    CHECK_THROWS_AS(lightcone(k2, 0, 0), Error);
}

TEST_CASE("single edge closed form") {
    const Graph k2(2, {{0, 1}});
    CHECK(energy_query(k2, {{0.0}, {0.0}}, tn_only()).total ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(energy_query(k2, {{pi / 2}, {pi / 8}}, tn_only()).total ==
          doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const double g = uniform(rng, 0.0, 2 * pi);
        const double b = uniform(rng, 0.0, 2 * pi);
        const double want = testing::k2_energy(g, b);
        CHECK(std::abs(energy_query(k2, {{g}, {b}}, tn_only()).total - want) < 1e-12);
        CHECK(std::abs(energy_sv(k2, {{g}, {b}}).total - want) < 1e-12);
    }
}

TEST_CASE("depth-one closed form on random graphs") {
    Rng rng(2);
    for (int i = 0; i < 30; ++i) {
        const std::size_t n = 6 + 2 * uniform_index(rng, 6);
        const std::size_t d = 2 + uniform_index(rng, 3);
        const Graph g = random_regular(n, d, static_cast<std::uint64_t>(i));
        const double gamma = uniform(rng, 0.0, 2 * pi);
        const double beta = uniform(rng, 0.0, 2 * pi);
        const double want = testing::p1_energy(g, gamma, beta);
        CHECK(std::abs(energy_query(g, {{gamma}, {beta}}, tn_only()).total - want) <
              1e-10);
    }
}

TEST_CASE("tensor network matches the state vector") {
    Rng rng(3);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 3 + uniform_index(rng, 8);
        const Graph g = random_weighted(n, uniform(rng, 0.2, 0.7), rng);
        const std::size_t p = 1 + uniform_index(rng, 3);
        const auto a = random_angles(p, rng);
        const auto tn = energy_query(g, a, tn_only());
        const auto sv = energy_sv(g, a);
        CHECK(tn.method == Method::tensor_network);
        CHECK(sv.method == Method::state_vector);
        REQUIRE(tn.per_edge.size() == sv.per_edge.size());
        for (std::size_t j = 0; j < tn.per_edge.size(); ++j) {
            CHECK(std::abs(tn.per_edge[j] - sv.per_edge[j]) < 1e-10);
        }
        EnergyOptions automatic;
        automatic.threads = 1;
        const auto au = energy_query(g, a, automatic);
        CHECK(std::abs(au.total - sv.total) < 1e-9 * static_cast<double>(g.num_edges()));
    }
}

TEST_CASE("zero angles cut half the weight") {
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const Graph g = random_weighted(4 + uniform_index(rng, 12), 0.3, rng);
        const std::size_t p = 1 + uniform_index(rng, 3);
        const AngleSequence zero(std::vector<double>(p, 0.0),
                                 std::vector<double>(p, 0.0));
        const auto r = energy_query(g, zero);
        CHECK(std::abs(r.total - g.total_weight() / 2) < 1e-12);
    }
}

TEST_CASE("integer weights give 2 pi periodic energies") {
    Rng rng(5);
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < 8; ++v) {
        edges.push_back({v, v + 1, static_cast<double>(1 + v % 3)});
    }
    edges.push_back({0, 7, 2.0});
    const Graph g(8, edges);
    for (int i = 0; i < 10; ++i) {
        const auto a = random_angles(2, rng);
        const auto t = lightcone(g, 3, 2);
        std::vector<double> shifted_gamma = a.gamma();
        shifted_gamma[0] += 2 * pi;
        shifted_gamma[1] -= 4 * pi;
        // Raw values bypass the reduction done by AngleSequence.
        auto raw = tensor_values(t, a);
        std::size_t k = 0;
        for (const auto &slot : t.slots) {
            if (slot.kind == SlotKind::phase) {
                const double theta =
                    shifted_gamma[slot.layer - 1] * t.edges[slot.target].weight;
                const Complex ph =
                    std::polar(1.0, (slot.conjugate ? 1.0 : -1.0) * theta);
                raw[k] = {1.0, ph, ph, 1.0};
            }
            ++k;
        }
        std::vector<Tensor> b_tensors;
        const auto reference = instantiate(t, a);
        for (std::size_t j = 0; j < raw.size(); ++j) {
            b_tensors.emplace_back(t.wiring[j], raw[j]);
        }
        const TensorNetwork shifted(std::move(b_tensors));
        const auto plan = plan_contraction(reference);
        const double x = contract(reference, plan).data[0].real();
        const double y = contract(shifted, plan).data[0].real();
        CHECK(std::abs(x - y) * normalization(t) < 1e-9);
    }
}

TEST_CASE("lightcone sufficiency") {
    Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        const Graph g = random_regular(16, 3, static_cast<std::uint64_t>(100 + i));
        const std::size_t p = 1 + uniform_index(rng, 2);
        const auto a = random_angles(p, rng);
        const EdgeId e = static_cast<EdgeId>(uniform_index(rng, g.num_edges()));
        const auto nb = neighborhood(g, e, static_cast<int>(p));
        const Graph sub = induced_subgraph(g, nb.vertices);
        const Edge &ge = g.edge(e);
        const auto pos = [&](Vertex v) {
            return static_cast<Vertex>(
                std::find(nb.vertices.begin(), nb.vertices.end(), v) -
                nb.vertices.begin());
        };
        const EdgeId se = *sub.find_edge(pos(ge.u), pos(ge.v));
        const auto full = energy_sv(g, a).per_edge[e];
        const auto local = energy_sv(sub, a).per_edge[se];
        CHECK(std::abs(full - local) < 1e-9);
        auto opts = tn_only();
        opts.edges = std::vector<EdgeId>{e};
        CHECK(std::abs(energy_query(g, a, opts).total - full) < 1e-9);
    }
}

TEST_CASE("dedupe") {
    auto templates_of = [](const Graph &g, std::size_t p) {
        std::vector<LightconeTemplate> ts;
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
            ts.push_back(lightcone(g, e, p));
        }
        return ts;
    };
    auto groups = dedupe(templates_of(cycle_graph(6), 1));
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].size() == 6);

    const Graph tree = tree_like_graph(3, 2);
    groups = dedupe(templates_of(tree, 2));
    CHECK(groups.size() > 1);
    CHECK(groups[0].front() == 0);
    const auto t0 = lightcone(tree, 0, 2);
    for (const auto &grp : groups) {
        for (const auto e : grp) {
            const auto te = lightcone(tree, e, 2);
            CHECK((te.num_qubits() == t0.num_qubits()) == (grp == groups[0]));
        }
    }

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Graph g = random_regular(30, 3, seed);
        if (girth(g).value_or(100) >= 6) {
            CHECK(dedupe(templates_of(g, 2)).size() == 1);
            break;
        }
    }
    CHECK(dedupe(templates_of(petersen_graph(), 2)).size() == 1);
    CHECK(dedupe(templates_of(complete_graph(5), 1)).size() == 1);
}

TEST_CASE("dedupe on and off agree") {
    Rng rng(7);
    for (int i = 0; i < 15; ++i) {
        const Graph g = random_regular(20, 3, static_cast<std::uint64_t>(i));
        const std::size_t p = 1 + uniform_index(rng, 2);
        const auto a = random_angles(p, rng);
        auto on = tn_only();
        auto off = tn_only();
        off.dedupe = false;
        const auto x = energy_query(g, a, on);
        const auto y = energy_query(g, a, off);
        CHECK(std::abs(x.total - y.total) < 1e-12);
        double sum = 0.0;
        for (const double v : x.per_edge) {
            sum += v;
        }
        CHECK(sum == x.total);
    }
}

TEST_CASE("queries are bit-stable across thread counts") {
    const Graph g = random_regular(40, 3, 11);
    Rng rng(8);
    const auto a = random_angles(2, rng);
    EnergyOptions o;
    o.method = Method::tensor_network;
    o.threads = 1;
    const auto one = energy_query(g, a, o);
    for (unsigned t : {2u, 4u, 8u}) {
        o.threads = t;
        const auto r = energy_query(g, a, o);
        CHECK(r.total == one.total);
        CHECK(r.per_edge == one.per_edge);
    }
}

TEST_CASE("plan cache round trip") {
    const auto path = std::filesystem::temp_directory_path() / "qlc_test_cache.json";
    std::filesystem::remove(path);
    const Graph g = random_regular(16, 3, 4);
    EnergyOptions o = tn_only();
    o.cache_path = path;
    const Engine first(g, 2, o);
    CHECK(first.cached_plans() == 0);
    CHECK(std::filesystem::exists(path));
    const Engine second(g, 2, o);
    CHECK(second.cached_plans() == second.num_groups());
    const AngleSequence a({0.3, 1.1}, {0.7, 0.2});
    CHECK(first.query(a).total == second.query(a).total);

    const Engine other(random_regular(16, 3, 5), 2, o);
    CHECK(other.cached_plans() == 0);
    std::filesystem::remove(path);
}

TEST_CASE("engine errors") {
    const Graph big = random_regular(40, 3, 1);
    EnergyOptions sv;
    sv.method = Method::state_vector;
    CHECK_THROWS_AS(Engine(big, 1, sv), LimitExceeded);
    EnergyOptions tight = tn_only();
    tight.plan.rank_cap = 2;
    CHECK_THROWS_AS(Engine(complete_graph(8), 2, tight), RankCapExceeded);
    const Engine e(cycle_graph(5), 2, tn_only());
    CHECK_THROWS_AS(e.query({{0.1}, {0.1}}), Error);
}

TEST_CASE("state vector properties") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const Graph g = random_weighted(2 + uniform_index(rng, 9), 0.5, rng);
        const auto a = random_angles(1 + uniform_index(rng, 3), rng);
        const auto s = evolve(g, a);
        double norm = 0.0;
        for (const auto &x : s.amplitudes) {
            norm += std::norm(x);
        }
        CHECK(std::abs(norm - 1.0) < 1e-10);
        const std::size_t mask = s.amplitudes.size() - 1;
        for (std::size_t z = 0; z < s.amplitudes.size(); ++z) {
            CHECK(std::abs(std::norm(s.amplitudes[z]) -
                           std::norm(s.amplitudes[z ^ mask])) < 1e-10);
        }
    }
    const Graph k2(2, {{0, 1}});
    const auto s = evolve(k2, {{pi / 2}, {pi / 8}});
    CHECK(std::norm(s.amplitudes[1]) + std::norm(s.amplitudes[2]) ==
          doctest::Approx(1.0).epsilon(1e-10));
    const auto u = evolve(cycle_graph(5), {{0.0}, {0.0}});
    for (const auto &x : u.amplitudes) {
        CHECK(std::abs(x - std::complex<double>(std::pow(2.0, -2.5), 0.0)) < 1e-15);
    }
    StatevecOptions limit;
    limit.qubit_limit = 10;
    CHECK_THROWS_AS(evolve(cycle_graph(11), {{0.0}, {0.0}}, limit), LimitExceeded);
}

TEST_CASE("phase layers keep moduli") {
    const Graph g = random_regular(8, 3, 3);
    const auto plain = evolve(g, {{0.0, 0.0}, {0.4, 0.0}});
    const auto phased = evolve(g, {{0.0, 1.3}, {0.4, 0.0}});
    for (std::size_t z = 0; z < plain.amplitudes.size(); ++z) {
        CHECK(std::abs(std::abs(plain.amplitudes[z]) - std::abs(phased.amplitudes[z])) <
              1e-12);
    }
}

TEST_CASE("sampling") {
    StateVector basis;
    basis.n_qubits = 4;
    basis.amplitudes.assign(16, 0.0);
    basis.amplitudes[0b0110] = 1.0;
    Rng rng(10);
    for (const auto z : sample(basis, 100, rng)) {
        CHECK(z == 0b0110);
    }

    const auto uniform_state = evolve(cycle_graph(6), {{0.0}, {0.0}});
    const auto shots = sample(uniform_state, 100000, rng);
    for (std::size_t q = 0; q < 6; ++q) {
        double ones = 0.0;
        for (const auto z : shots) {
            ones += static_cast<double>((z >> q) & 1U);
        }
        const double frac = ones / static_cast<double>(shots.size());
        CHECK(frac > 0.49);
        CHECK(frac < 0.51);
    }

    const Graph g = random_regular(10, 3, 2);
    const AngleSequence a({0.6, 1.9}, {0.3, 0.8});
    const auto s = evolve(g, a);
    std::vector<double> probs;
    for (const auto &x : s.amplitudes) {
        probs.push_back(std::norm(x));
    }
    const double mean = testing::cut_expectation(g, probs);
    double second = 0.0;
    for (std::size_t z = 0; z < probs.size(); ++z) {
        double c = 0.0;
        for (const auto &e : g.edges()) {
            c += ((z >> e.u) ^ (z >> e.v)) & 1U ? e.w : 0.0;
        }
        second += probs[z] * c * c;
    }
    const double sigma = std::sqrt((second - mean * mean) / 100000.0);
    const auto draws = sample(s, 100000, rng);
    double total = 0.0;
    for (const auto z : draws) {
        for (const auto &e : g.edges()) {
            total += ((z >> e.u) ^ (z >> e.v)) & 1U ? e.w : 0.0;
        }
    }
    CHECK(std::abs(total / 100000.0 - mean) < 3.0 * sigma);
    CHECK(std::abs(energy_sv(g, a).total - mean) < 1e-10);
}
