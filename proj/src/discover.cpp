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
#include "qlc/discover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "qlc/error.hpp"
#include "qlc/format.hpp"
#include "qlc/parallel.hpp"

namespace qlc {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_unweighted(const Graph &g, const std::string &what) {
    if (!g.is_unweighted()) {
        throw InvalidGraph(what + " must be unweighted");
    }
}

// Rethrows the active engine error with `context` prepended.
[[noreturn]] void rethrow_with(const std::string &context) {
    try {
        throw;
    } catch (const RankCapExceeded &e) {
        throw RankCapExceeded(context + ": " + e.what(), e.rank(), e.cap());
    } catch (const LimitExceeded &e) {
        throw LimitExceeded(context + ": " + e.what());
    } catch (const Mismatch &e) {
        throw Mismatch(context + ": " + e.what());
    } catch (const Error &e) {
        throw Error(context + ": " + e.what());
    }
}

Engine make_engine(const Graph &g, std::size_t p, const EnergyOptions &opts,
                   const std::string &name) {
    try {
        return Engine(g, p, opts);
    } catch (const Error &) {
        rethrow_with(name);
    }
}

double total_energy(const Engine &engine, const AngleSequence &a,
                    const std::string &name) {
    try {
        return engine.query(a).total;
    } catch (const Error &) {
        rethrow_with(name);
    }
}

SeparationTrial make_trial(const AngleSequence &a, double e1, double e2) {
    return {a, e1, e2, std::abs(e1 - e2)};
}

// Evaluates `angles` in order, stopping after the first separating trial
// when `stop_early` is set.
void run_trials(const Graph &g1, const Graph &g2,
                const std::vector<AngleSequence> &angles, bool stop_early,
                const EnergyOptions &energy, SeparationVerdict &v) {
    if (angles.empty()) {
        return;
    }
    const Engine a = make_engine(g1, v.depth, energy, "graph 1");
    const Engine b = make_engine(g2, v.depth, energy, "graph 2");
    for (const auto &ang : angles) {
        v.trials.push_back(make_trial(ang, total_energy(a, ang, "graph 1"),
                                      total_energy(b, ang, "graph 2")));
        if (v.trials.back().difference > v.epsilon) {
            v.separated = true;
            if (stop_early) {
                return;
            }
        }
    }
}

std::vector<double> normalized_row(const Engine &engine,
                                   const std::vector<AngleSequence> &angles,
                                   Normalization n, const std::string &name) {
    std::vector<double> row;
    row.reserve(angles.size());
    const double m = static_cast<double>(engine.graph().num_edges());
    for (const auto &a : angles) {
        const double e = total_energy(engine, a, name);
        row.push_back(n == Normalization::per_edge && m > 0 ? e / m : e);
    }
    return row;
}

} // namespace

AngleSequence random_angles(std::size_t p, Rng &rng) {
    std::vector<double> gamma(p), beta(p);
    for (auto &x : gamma) {
        x = uniform(rng, 0.0, two_pi);
    }
    for (auto &x : beta) {
        x = uniform(rng, 0.0, two_pi);
    }
    return {std::move(gamma), std::move(beta)};
}

SeparationVerdict distinguish(const Graph &g1, const Graph &g2, std::size_t p,
                              Rng &rng, const DistinguishOptions &options) {
    require_unweighted(g1, "graph 1");
    require_unweighted(g2, "graph 2");
    if (p == 0) {
        throw Error("depth must be at least 1");
    }
    SeparationVerdict v;
    v.depth = p;
    v.epsilon = options.epsilon.value_or(
        1e-9 * static_cast<double>(std::max(g1.num_edges(), g2.num_edges())));
    if (g1.num_vertices() != g2.num_vertices() ||
        g1.num_edges() != g2.num_edges()) {
        v.separated = true;
        v.degenerate = true;
        return v;
    }
    // All draws happen up front, so the generator state after the call does
    // not depend on where the run stopped.
    std::vector<AngleSequence> angles;
    angles.reserve(options.trials);
    for (std::size_t i = 0; i < options.trials; ++i) {
        angles.push_back(random_angles(p, rng));
    }
    run_trials(g1, g2, angles, true, options.energy, v);
    return v;
}

SeparationVerdict replay_verdict(const Graph &g1, const Graph &g2,
                                 const SeparationVerdict &verdict,
                                 const EnergyOptions &energy) {
    SeparationVerdict v;
    v.depth = verdict.depth;
    v.epsilon = verdict.epsilon;
    if (g1.num_vertices() != g2.num_vertices() ||
        g1.num_edges() != g2.num_edges()) {
        v.separated = true;
        v.degenerate = true;
        return v;
    }
    std::vector<AngleSequence> angles;
    for (const auto &t : verdict.trials) {
        angles.push_back(t.angles);
    }
    run_trials(g1, g2, angles, false, energy, v);
    return v;
}

nlohmann::json verdict_to_json(const SeparationVerdict &v) {
    auto trials = nlohmann::json::array();
    for (const auto &t : v.trials) {
        trials.push_back({{"angles", angles_to_json(t.angles)},
                          {"e1", t.e1},
                          {"e2", t.e2},
                          {"difference", t.difference}});
    }
    return {{"separated", v.separated},
            {"degenerate", v.degenerate},
            {"depth", v.depth},
            {"epsilon", v.epsilon},
            {"trials", trials}};
}

SeparationVerdict verdict_from_json(const nlohmann::json &doc) {
    try {
        SeparationVerdict v;
        v.separated = doc.at("separated").get<bool>();
        v.degenerate = doc.value("degenerate", false);
        v.depth = doc.at("depth").get<std::size_t>();
        v.epsilon = doc.at("epsilon").get<double>();
        for (const auto &t : doc.at("trials")) {
            v.trials.push_back(make_trial(angles_from_json(t.at("angles")),
                                          t.at("e1").get<double>(),
                                          t.at("e2").get<double>()));
        }
        return v;
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed verdict: ") + e.what());
    }
}

std::string normalization_name(Normalization n) {
    return n == Normalization::total ? "total" : "per-edge";
}

Normalization normalization_from_name(const std::string &name) {
    if (name == "total") {
        return Normalization::total;
    }
    if (name == "per-edge") {
        return Normalization::per_edge;
    }
    throw Error("unknown normalization '" + name + "'");
}

Landscape landscape(const std::vector<Graph> &graphs,
                    const std::vector<std::string> &ids, std::size_t k,
                    std::size_t p, Rng &rng, const LandscapeOptions &options) {
    if (k == 0) {
        throw Error("landscape needs at least one angle sequence");
    }
    if (p == 0) {
        throw Error("depth must be at least 1");
    }
    std::vector<AngleSequence> angles;
    for (std::size_t j = 0; j < k; ++j) {
        angles.push_back(random_angles(p, rng));
    }
    return landscape(graphs, ids, std::move(angles), options);
}

Landscape landscape(const std::vector<Graph> &graphs,
                    const std::vector<std::string> &ids,
                    std::vector<AngleSequence> angles,
                    const LandscapeOptions &options) {
    if (angles.empty()) {
        throw Error("landscape needs at least one angle sequence");
    }
    if (!ids.empty() && ids.size() != graphs.size()) {
        throw Error("landscape: " + std::to_string(ids.size()) + " ids for " +
                    std::to_string(graphs.size()) + " graphs");
    }
    const std::size_t p = angles.front().depth();
    for (const auto &a : angles) {
        if (a.depth() != p) {
            throw Mismatch("landscape angle sequences differ in depth");
        }
    }
    Landscape l;
    l.normalization = options.normalization;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        l.graphs.push_back(ids.empty() ? std::to_string(i) : ids[i]);
        require_unweighted(graphs[i], "graph " + l.graphs.back());
    }
    l.angles = std::move(angles);
    l.matrix.resize(graphs.size());
    // Rows are independent; each engine runs single-threaded and writes its
    // own slot.
    EnergyOptions energy = options.energy;
    energy.threads = 1;
    const unsigned threads =
        options.threads != 0 ? options.threads : default_thread_count();
    parallel_for(graphs.size(), threads, [&](std::size_t i) {
        const std::string name = "graph " + l.graphs[i];
        const Engine engine = make_engine(graphs[i], p, energy, name);
        l.matrix[i] = normalized_row(engine, l.angles, l.normalization, name);
    });
    return l;
}

void write_landscape_csv(std::ostream &out, const Landscape &l) {
    out << "graph_id";
    for (std::size_t j = 1; j <= l.angles.size(); ++j) {
        out << ",angles_" << j;
    }
    out << '\n';
    for (std::size_t i = 0; i < l.graphs.size(); ++i) {
        out << l.graphs[i];
        for (const double x : l.matrix[i]) {
            out << ',' << format_real(x);
        }
        out << '\n';
    }
}

nlohmann::json landscape_to_json(const Landscape &l,
                                 std::optional<std::uint64_t> seed) {
    auto angles = nlohmann::json::array();
    for (const auto &a : l.angles) {
        angles.push_back(angles_to_json(a));
    }
    nlohmann::json doc{{"graphs", l.graphs},
                       {"angles", angles},
                       {"normalization", normalization_name(l.normalization)},
                       {"matrix", l.matrix}};
    if (seed) {
        doc["seed"] = *seed;
    }
    return doc;
}

Walk walk_experiment(const Graph &g0, std::size_t steps, std::size_t k,
                     std::size_t p, Rng &rng, const LandscapeOptions &options) {
    require_unweighted(g0, "walk start");
    const auto degrees = g0.degree_sequence();
    for (const auto d : degrees) {
        if (d != degrees.front()) {
            throw InvalidGraph("walk start must be regular");
        }
    }
    if (k == 0 || p == 0) {
        throw Error("walk needs k >= 1 and p >= 1");
    }
    Walk w;
    for (std::size_t j = 0; j < k; ++j) {
        w.angles.push_back(random_angles(p, rng));
    }
    EnergyOptions energy = options.energy;
    if (energy.threads == 0) {
        energy.threads = options.threads;
    }
    Graph g = g0;
    bool moved = false;
    for (std::size_t step = 0; step <= steps; ++step) {
        if (step > 0) {
            auto next = edge_swap_step(g, rng);
            moved = next.status == SwapStatus::moved;
            g = std::move(next.graph);
        }
        const std::string name = "walk step " + std::to_string(step);
        WalkRow row;
        row.step = step;
        row.moved = moved;
        row.graph = g;
        // An unmoved step revisits the previous graph, so its fingerprint is
        // copied rather than recomputed.
        if (step > 0 && !moved) {
            row.fingerprint = w.rows.back().fingerprint;
        } else {
            const Engine engine = make_engine(g, p, energy, name);
            row.fingerprint =
                normalized_row(engine, w.angles, options.normalization, name);
        }
        double sq = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double d = row.fingerprint[j] -
                             (w.rows.empty() ? row.fingerprint[j]
                                             : w.rows.front().fingerprint[j]);
            sq += d * d;
        }
        row.distance = std::sqrt(sq);
        w.rows.push_back(std::move(row));
    }
    return w;
}

void write_walk_csv(std::ostream &out, const Walk &w) {
    out << "step,moved";
    for (std::size_t j = 1; j <= w.angles.size(); ++j) {
        out << ",f_" << j;
    }
    out << ",distance\n";
    for (const auto &r : w.rows) {
        out << r.step << ',' << (r.moved ? 1 : 0);
        for (const double x : r.fingerprint) {
            out << ',' << format_real(x);
        }
        out << ',' << format_real(r.distance) << '\n';
    }
}

} // namespace qlc
