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
#include "qlc/energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "qlc/error.hpp"
#include "qlc/parallel.hpp"
#include "qlc/statevec.hpp"

namespace qlc {

namespace {

constexpr const char *cache_schema = "qlc.plan-cache/1";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::json cache_key(const Graph &g, std::size_t p,
                         const PlanOptions &plan) {
    return {{"schema", cache_schema},
            {"graph_hash", hex64(g.content_hash())},
            {"p", p},
            {"effort", plan.effort == PlanEffort::fast ? "fast" : "thorough"},
            {"rank_cap", plan.rank_cap},
            {"seed", plan.seed},
            {"restarts", plan.restarts}};
}

// Plans by representative edge, or empty on any mismatch.
std::map<EdgeId, nlohmann::json> read_cache(const std::filesystem::path &path,
                                            const nlohmann::json &key) {
    std::ifstream in(path);
    if (!in) {
        return {};
    }
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.at("key") != key) {
            return {};
        }
        std::map<EdgeId, nlohmann::json> out;
        for (const auto &entry : doc.at("plans")) {
            out.emplace(entry.at("edge").get<EdgeId>(), entry.at("plan"));
        }
        return out;
    } catch (const nlohmann::json::exception &) {
        return {};
    }
}

double sv_cost(std::size_t p, std::size_t qubits) {
    return 8.0 * static_cast<double>(p) *
           std::ldexp(1.0, static_cast<int>(qubits));
}

} // namespace

std::string method_name(Method m) {
    switch (m) {
    case Method::automatic:
        return "auto";
    case Method::tensor_network:
        return "tensor-network";
    case Method::state_vector:
        return "state-vector";
    }
    return "auto";
}

Method method_from_name(const std::string &name) {
    if (name == "auto") {
        return Method::automatic;
    }
    if (name == "tensor-network") {
        return Method::tensor_network;
    }
    if (name == "state-vector") {
        return Method::state_vector;
    }
    throw Error("unknown method '" + name +
                "' (expected auto, tensor-network or state-vector)");
}

struct Engine::Group {
    LightconeTemplate tmpl;
    Method method = Method::tensor_network;
    ContractionPlan plan;
    std::unique_ptr<CompiledContraction> compiled;
    Graph cone;
};

Engine::~Engine() = default;
Engine::Engine(Engine &&) noexcept = default;
Engine &Engine::operator=(Engine &&) noexcept = default;

std::size_t Engine::num_groups() const noexcept { return groups_.size(); }

int Engine::max_rank() const noexcept {
    int r = 0;
    for (const auto &g : groups_) {
        if (g.method == Method::tensor_network) {
            r = std::max(r, g.plan.est_max_intermediate_rank);
        }
    }
    return r;
}

double Engine::est_flops() const noexcept {
    double total = 0.0;
    for (const auto &g : groups_) {
        total += g.method == Method::tensor_network
                     ? g.plan.est_flops
                     : sv_cost(p_, g.tmpl.num_qubits());
    }
    return total;
}

Engine::Engine(Graph g, std::size_t p, EnergyOptions options)
    : graph_(std::move(g)), p_(p), options_(std::move(options)) {
    const auto start = Clock::now();
    if (p_ == 0) {
        throw Error("depth p must be at least 1");
    }
    if (graph_.num_edges() == 0) {
        throw InvalidGraph("graph has no edges");
    }
    if (options_.edges) {
        edges_ = *options_.edges;
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        if (edges_.empty() || edges_.back() >= graph_.num_edges()) {
            throw Error("selected edge ids must be nonempty and in range");
        }
    } else {
        edges_.resize(graph_.num_edges());
        for (EdgeId e = 0; e < edges_.size(); ++e) {
            edges_[e] = e;
        }
    }
    const unsigned threads = options_.threads == 0 ? default_thread_count()
                                                   : options_.threads;

    if (options_.method == Method::state_vector) {
        if (graph_.num_vertices() > options_.state_vector_limit) {
            throw LimitExceeded(
                "state vector needs " + std::to_string(graph_.num_vertices()) +
                " qubits, above the limit of " +
                std::to_string(options_.state_vector_limit));
        }
        whole_graph_ = true;
        method_ = Method::state_vector;
        preprocess_seconds_ = seconds_since(start);
        return;
    }

    std::vector<LightconeTemplate> templates(edges_.size());
    parallel_for(edges_.size(), threads, [&](std::size_t i) {
        templates[i] = lightcone(graph_, edges_[i], p_);
        if (!options_.dedupe) {
            templates[i].structure_key = "edge:" + std::to_string(edges_[i]);
        }
    });
    const auto grouped = dedupe(templates);
    std::map<EdgeId, std::size_t> position;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        position[edges_[i]] = i;
    }
    group_of_.assign(edges_.size(), 0);
    groups_.resize(grouped.size());
    for (std::size_t k = 0; k < grouped.size(); ++k) {
        for (const auto e : grouped[k]) {
            group_of_[position[e]] = k;
        }
        groups_[k].tmpl = std::move(templates[position[grouped[k].front()]]);
    }
    templates.clear();

    const auto key = cache_key(graph_, p_, options_.plan);
    std::map<EdgeId, nlohmann::json> cached;
    if (options_.cache_path) {
        cached = read_cache(*options_.cache_path, key);
    }

    std::vector<char> from_cache(groups_.size(), 0);
    std::vector<std::exception_ptr> failures(groups_.size());
    parallel_for(groups_.size(), threads, [&](std::size_t k) {
        Group &grp = groups_[k];
        const auto &t = grp.tmpl;
        const std::size_t q = t.num_qubits();
        const bool small = q <= auto_cone_qubit_limit;
        bool planned = false;
        if (const auto it = cached.find(t.edge); it != cached.end()) {
            try {
                grp.plan = plan_from_json(it->second);
                grp.compiled = std::make_unique<CompiledContraction>(
                    t.wiring, std::span<const IndexId>{}, grp.plan);
                planned = true;
                from_cache[k] = 1;
            } catch (const Error &) {
                grp.compiled.reset();
            }
        }
        if (!planned) {
            try {
                grp.plan = plan_contraction(t.wiring, {}, options_.plan);
                planned = true;
            } catch (const RankCapExceeded &e) {
                if (options_.method == Method::tensor_network || !small) {
                    failures[k] = std::make_exception_ptr(RankCapExceeded(
                        "edge " + std::to_string(t.edge) + " (lightcone of " +
                            std::to_string(q) + " qubits): " + e.what(),
                        e.rank(), e.cap()));
                    return;
                }
            }
        }
        const bool use_sv =
            options_.method == Method::automatic && small &&
            (!planned || grp.plan.est_flops > sv_cost(p_, q));
        if (use_sv) {
            grp.method = Method::state_vector;
            grp.cone = cone_graph(t);
            grp.compiled.reset();
        } else {
            grp.method = Method::tensor_network;
            if (!grp.compiled) {
                grp.compiled = std::make_unique<CompiledContraction>(
                    t.wiring, std::span<const IndexId>{}, grp.plan);
            }
        }
    });
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
    cached_plans_ = static_cast<std::size_t>(
        std::count(from_cache.begin(), from_cache.end(), 1));

    const bool all_sv = std::all_of(groups_.begin(), groups_.end(),
                                    [](const Group &grp) {
                                        return grp.method == Method::state_vector;
                                    });
    method_ = all_sv ? Method::state_vector : Method::tensor_network;
    if (options_.method == Method::automatic &&
        graph_.num_vertices() <= auto_graph_qubit_limit &&
        graph_.num_vertices() <= options_.state_vector_limit &&
        sv_cost(p_, graph_.num_vertices()) < est_flops()) {
        whole_graph_ = true;
        method_ = Method::state_vector;
    }

    if (options_.cache_path && cached_plans_ < groups_.size()) {
        nlohmann::json plans = nlohmann::json::array();
        for (const auto &grp : groups_) {
            if (grp.compiled) {
                plans.push_back(
                    {{"edge", grp.tmpl.edge}, {"plan", plan_to_json(grp.plan)}});
            }
        }
        std::ofstream out(*options_.cache_path);
        if (out) {
            out << nlohmann::json{{"key", key}, {"plans", plans}}.dump() << '\n';
        }
    }
    preprocess_seconds_ = seconds_since(start);
}

EnergyResult Engine::query(const AngleSequence &a) const {
    if (a.depth() != p_) {
        throw Error("angle depth " + std::to_string(a.depth()) +
                    " does not match the engine depth " + std::to_string(p_));
    }
    const auto start = Clock::now();
    const unsigned threads = options_.threads == 0 ? default_thread_count()
                                                   : options_.threads;
    EnergyResult r;
    r.method = method_;
    r.edges = edges_;
    r.per_edge.resize(edges_.size());

    if (whole_graph_) {
        StatevecOptions sv;
        sv.qubit_limit = options_.state_vector_limit;
        sv.threads = threads;
        const StateVector s = evolve(graph_, a, sv);
        parallel_for(edges_.size(), threads, [&](std::size_t i) {
            r.per_edge[i] = edge_expectation(s, graph_.edge(edges_[i]));
        });
    } else {
        std::vector<double> value(groups_.size());
        parallel_for(groups_.size(), threads, [&](std::size_t k) {
            const Group &grp = groups_[k];
            if (grp.method == Method::state_vector) {
                const StateVector s = evolve(grp.cone, a, {grp.cone.num_vertices(), 1});
                value[k] = edge_expectation(s, grp.cone.edge(0));
                return;
            }
            const auto values = tensor_values(grp.tmpl, a);
            const Tensor t = grp.compiled->run(values);
            const double scale = normalization(grp.tmpl);
            const Complex v = t.data[0] * scale;
            if (std::abs(v.imag()) >= 1e-9) {
                throw Error("edge " + std::to_string(grp.tmpl.edge) +
                            " has imaginary residue " + std::to_string(v.imag()));
            }
            value[k] = v.real();
        });
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            r.per_edge[i] = value[group_of_[i]];
        }
    }

    double weight = 0.0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        r.total += r.per_edge[i];
        weight += graph_.edge(edges_[i]).w;
    }
    r.ratio = weight != 0.0 ? r.total / weight : 0.0;
    r.query_seconds = seconds_since(start);
    return r;
}

EnergyResult energy_query(const Graph &g, const AngleSequence &a,
                          const EnergyOptions &options) {
    return Engine(g, a.depth(), options).query(a);
}

} // namespace qlc
