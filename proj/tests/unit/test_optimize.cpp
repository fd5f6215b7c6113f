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
#include <memory>
#include <numbers>

#include "qlc/energy.hpp"
#include "qlc/error.hpp"
#include "qlc/optimize.hpp"
#include "support/oracles.hpp"

using namespace qlc;

namespace {

constexpr double pi = std::numbers::pi;

Objective k2_objective() {
    return {[](const AngleSequence &a) {
                return testing::k2_energy(a.gamma()[0], a.beta()[0]);
            },
            1.0};
}

// Root-edge energy of the tree-like instance at each depth.
std::function<Objective(std::size_t)> tree_family(std::size_t d) {
    return [d](std::size_t p) {
        EnergyOptions o;
        o.edges = std::vector<EdgeId>{0};
        o.threads = 1;
        auto engine = std::make_shared<Engine>(tree_like_graph(d, p), p, o);
        return Objective{[engine](const AngleSequence &a) {
                             return engine->query(a).total;
                         },
                         1.0};
    };
}

void check_trace(const OptimizeResult &r) {
    REQUIRE_FALSE(r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        CHECK(r.trace[i].value > r.trace[i - 1].value);
        CHECK(r.trace[i].query > r.trace[i - 1].query);
    }
    CHECK(r.trace.back().value == r.best_value);
    CHECK(r.trace.back().query <= r.queries_used);
}

} // namespace

TEST_CASE("grid search") {
    OptimizerConfig cfg;
    cfg.resolution = 8;
    cfg.top_k = 3;
    const auto top = grid_search(k2_objective(), 1, cfg);
    REQUIRE(top.size() == 3);
    double best = -1.0;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            best = std::max(best, testing::k2_energy(2 * pi * i / 8, 2 * pi * j / 8));
        }
    }
    CHECK(top[0].value == best);
    CHECK(top[0].value <= 1.0 + 1e-12);
    CHECK(top[0].value >= top[1].value);

    // The 8-point lattice only hits beta = k pi / 4, where sin 4 beta vanishes.
    CHECK(top[0].value == doctest::Approx(0.5).epsilon(1e-12));
    cfg.resolution = 16;
    const auto fine = grid_search(k2_objective(), 1, cfg);
    CHECK(fine[0].value >= 0.85);

    int calls = 0;
    const Objective counting{[&](const AngleSequence &) { return ++calls, 0.0; }, 1.0};
    cfg.resolution = 2;
    cfg.top_k = 100;
    const auto all = grid_search(counting, 1, cfg);
    CHECK(calls == 4);
    REQUIRE(all.size() == 4);
    for (std::size_t i = 1; i < all.size(); ++i) {
        CHECK(all[i - 1].angles < all[i].angles);
    }

    cfg.resolution = 8;
    cfg.budget = 63;
    CHECK_THROWS_AS(grid_search(k2_objective(), 1, cfg), LimitExceeded);
}

TEST_CASE("local search") {
    OptimizerConfig cfg;
    const AngleSequence optimum({pi / 2}, {pi / 8});
    auto r = local_search(k2_objective(), optimum, cfg);
    CHECK(r.best_value == doctest::Approx(1.0).epsilon(1e-6));
    check_trace(r);

    const Objective flat{[](const AngleSequence &) { return 0.25; }, 1.0};
    const AngleSequence start({0.1, 0.2}, {0.3, 0.4});
    r = local_search(flat, start, cfg);
    CHECK(r.best_angles == start);
    CHECK(r.queries_used == 5);

    const auto family = tree_family(3);
    const Objective f = family(1);
    cfg.resolution = 12;
    cfg.top_k = 1;
    const auto top = grid_search(f, 1, cfg);
    r = local_search(f, top[0].angles, cfg);
    CHECK(r.best_ratio >= 0.6920);
    CHECK(r.best_value >= top[0].value);
    CHECK(f.query(r.best_angles) == r.best_value);
}

TEST_CASE("differential evolution") {
    const auto family = tree_family(3);
    const Objective f = family(2);
    OptimizerConfig cfg;
    cfg.budget = 10000;
    cfg.seed = 3;
    const auto r = differential_evolution(f, 2, cfg);
    CHECK(r.best_ratio >= 0.7555);
    CHECK(r.queries_used <= 10000);
    check_trace(r);
    CHECK(std::abs(f.query(r.best_angles) - r.best_value) < 1e-12);

    cfg.budget = 2000;
    const auto a = differential_evolution(f, 2, cfg);
    const auto b = differential_evolution(f, 2, cfg);
    CHECK(a.best_value == b.best_value);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].query == b.trace[i].query);
        CHECK(a.trace[i].value == b.trace[i].value);
    }
    cfg.threads = 4;
    const auto c = differential_evolution(f, 2, cfg);
    CHECK(c.best_value == a.best_value);
    CHECK(c.best_angles == a.best_angles);

    cfg.threads = 1;
    cfg.budget = 500;
    const auto seeded = differential_evolution(f, 2, cfg, {r.best_angles});
    CHECK(seeded.best_value >= r.best_value);

    cfg.budget = 1;
    const auto single = differential_evolution(f, 2, cfg);
    CHECK(single.queries_used == 1);
    CHECK(single.trace.size() == 1);
}

TEST_CASE("procession follows the tree-like optimum") {
    OptimizerConfig cfg;
    cfg.seed = 1;
    const auto results = procession(tree_family(3), 3, cfg);
    REQUIRE(results.size() == 3);
    const double expected[] = {0.692, 0.756, 0.792};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(results[i].best_ratio - expected[i]) <= 0.005);
        CHECK(results[i].best_angles.depth() == i + 1);
        CHECK(results[i].best_ratio >= 0.5);
        check_trace(results[i]);
    }

    const auto single = procession(tree_family(3), 1, cfg);
    CHECK(single[0].best_value == results[0].best_value);
}

TEST_CASE("optimizer configs") {
    const auto doc = nlohmann::json::parse(
        R"({"kind": "de", "budget": 50, "population": 8, "crossover": 0.5})");
    const auto cfg = config_from_json(doc);
    CHECK(cfg.kind == OptimizerKind::differential_evolution);
    CHECK(cfg.budget == 50);
    CHECK(cfg.population == 8);
    CHECK(config_from_json(config_to_json(cfg)).crossover == 0.5);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"budget": 0})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"resolution": 1})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"population": 3})")), Error);
    CHECK_THROWS_AS(optimizer_from_name("fourier"), Error);

    OptimizerConfig one;
    one.kind = OptimizerKind::differential_evolution;
    one.budget = 1;
    CHECK(optimize(tree_family(3), 1, one).queries_used == 1);
}
