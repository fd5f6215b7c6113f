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
#include "qlc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlc/discover.hpp"
#include "qlc/energy.hpp"
#include "qlc/error.hpp"
#include "qlc/format.hpp"
#include "qlc/graph_io.hpp"
#include "qlc/optimize.hpp"
#include "qlc/parallel.hpp"
#include "qlc/random.hpp"
#include "qlc/statevec.hpp"

namespace qlc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed4(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

// Durations span microseconds to minutes, so they keep four significant
// digits instead of four decimals.
std::string duration4(double seconds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", seconds);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

// Options shared by every result-producing subcommand.
struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out;
    std::string manifest;
};

// What a subcommand reports for its manifest.
struct Record {
    json config = json::object();
    json seeds = json::object();
    double preprocess_s = 0.0;
    double query_s = 0.0;
    // Outputs that contain timings cannot be replayed bit-for-bit.
    bool reproducible = true;
};

struct Context {
    Common common;
    std::ostream &out;
    std::ostream &err;
    Record record;
};

unsigned thread_count(const Common &c) {
    return c.threads != 0 ? c.threads : default_thread_count();
}

void require_file(const std::string &path) {
    if (!fs::is_regular_file(path)) {
        throw UsageError("no such file: " + path);
    }
}

GraphFile read_graph(const std::string &path) {
    require_file(path);
    return load_graph_file(path);
}

AngleSequence parse_angles(const std::string &text) {
    std::string body = text;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw UsageError("--angles is empty");
    }
    if (text[first] != '[' && text[first] != '{') {
        require_file(text);
        std::ifstream in(text);
        body.assign(std::istreambuf_iterator<char>(in), {});
    }
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception &e) {
        throw UsageError(std::string("--angles is not valid JSON: ") + e.what());
    }
    try {
        return angles_from_json(doc);
    } catch (const Error &e) {
        throw UsageError(std::string("--angles: ") + e.what());
    }
}

json read_json_arg(const std::string &text, const std::string &what) {
    std::string body = text;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
        require_file(text);
        std::ifstream in(text);
        body.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(body);
    } catch (const json::exception &e) {
        throw UsageError(what + " is not valid JSON: " + e.what());
    }
}

// Engine-related flags shared by query and optimize.
struct EngineFlags {
    std::string method = "auto";
    std::string cache;
    std::vector<EdgeId> edges;
    bool all_edges = false;
    std::string effort = "fast";
    int rank_cap = 30;
    std::size_t sv_limit = 26;
    bool no_dedupe = false;
};

// `selection` adds the edge-choice and plan-cache flags of the single-graph
// commands.
void add_engine_flags(CLI::App *sub, EngineFlags &f, bool selection) {
    sub->add_option("--method", f.method, "auto, tensor-network or state-vector")
        ->check(CLI::IsMember({"auto", "tensor-network", "state-vector"}))
        ->capture_default_str();
    if (selection) {
        sub->add_option("--cache", f.cache,
                        "Plan cache file (default: under $QLC_CACHE_DIR when set)");
        sub->add_option("--edge", f.edges, "Evaluate only these edge ids (repeatable)");
        sub->add_flag("--all-edges", f.all_edges,
                      "Evaluate every edge even when the file declares a root edge");
    }
    sub->add_option("--plan-effort", f.effort, "fast or thorough")
        ->check(CLI::IsMember({"fast", "thorough"}))
        ->capture_default_str();
    sub->add_option("--rank-cap", f.rank_cap, "Largest intermediate tensor rank")
        ->check(CLI::Range(1, 40))
        ->capture_default_str();
    sub->add_option("--sv-limit", f.sv_limit, "Qubit limit of the state-vector paths")
        ->check(CLI::Range(1, 34))
        ->capture_default_str();
    sub->add_flag("--no-dedupe", f.no_dedupe, "Contract every lightcone separately");
}

std::vector<EdgeId> selected_edges(const GraphFile &file, const EngineFlags &f) {
    if (!f.edges.empty() && f.all_edges) {
        throw UsageError("--edge and --all-edges are mutually exclusive");
    }
    std::vector<EdgeId> edges;
    if (!f.edges.empty()) {
        edges = f.edges;
    } else if (!f.all_edges && file.root_edge) {
        edges = {*file.root_edge};
    } else {
        edges.resize(file.graph.num_edges());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            edges[i] = static_cast<EdgeId>(i);
        }
        return edges;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const EdgeId e : edges) {
        if (e >= file.graph.num_edges()) {
            throw UsageError("edge " + std::to_string(e) + " out of range (graph has " +
                             std::to_string(file.graph.num_edges()) + " edges)");
        }
    }
    return edges;
}

EnergyOptions basic_options(const EngineFlags &f, unsigned threads) {
    EnergyOptions o;
    o.method = method_from_name(f.method);
    o.threads = threads;
    o.plan.effort = f.effort == "thorough" ? PlanEffort::thorough : PlanEffort::fast;
    o.plan.rank_cap = f.rank_cap;
    o.dedupe = !f.no_dedupe;
    o.state_vector_limit = f.sv_limit;
    return o;
}

EnergyOptions engine_options(const GraphFile &file, std::size_t p,
                             const EngineFlags &f, unsigned threads) {
    EnergyOptions o = basic_options(f, threads);
    o.edges = selected_edges(file, f);
    if (!f.cache.empty()) {
        o.cache_path = f.cache;
    } else if (const char *dir = std::getenv("QLC_CACHE_DIR"); dir && *dir) {
        fs::create_directories(dir);
        o.cache_path = fs::path(dir) / ("plans-" + hex64(file.graph.content_hash()) +
                                        "-p" + std::to_string(p) + ".json");
    }
    return o;
}

json engine_config(const EnergyOptions &o, const EngineFlags &f) {
    return {{"method", f.method},
            {"plan_effort", f.effort},
            {"rank_cap", f.rank_cap},
            {"state_vector_limit", f.sv_limit},
            {"dedupe", o.dedupe},
            {"edges", *o.edges},
            {"cache", o.cache_path ? o.cache_path->string() : ""}};
}

double edge_weight_sum(const Graph &g, const std::vector<EdgeId> &edges) {
    double w = 0.0;
    for (const EdgeId e : edges) {
        w += g.edge(e).w;
    }
    return w;
}

// ---------------------------------------------------------------- query

struct QueryArgs {
    std::string graph;
    std::string angles;
    std::size_t p = 0;
    std::size_t shots = 0;
    EngineFlags engine;
};

void cmd_query(const QueryArgs &a, Context &ctx) {
    const GraphFile file = read_graph(a.graph);
    const AngleSequence angles = parse_angles(a.angles);
    if (a.p != 0 && a.p != angles.depth()) {
        throw UsageError("--p " + std::to_string(a.p) + " does not match the " +
                         std::to_string(angles.depth()) + " angle pairs");
    }
    const std::size_t p = angles.depth();
    const auto opts = engine_options(file, p, a.engine, thread_count(ctx.common));
    ctx.record.config = engine_config(opts, a.engine);
    ctx.record.config["graph"] = a.graph;
    ctx.record.config["angles"] = angles_to_json(angles);

    const Engine engine(file.graph, p, opts);
    const EnergyResult r = engine.query(angles);
    ctx.record.preprocess_s = engine.preprocess_seconds();
    ctx.record.query_s = r.query_seconds;

    json doc{{"depth", p},
             {"angles", angles_to_json(angles)},
             {"method", method_name(r.method)},
             {"total", r.total},
             {"ratio", r.ratio},
             {"edges", r.edges},
             {"per_edge", r.per_edge}};
    if (a.shots > 0) {
        StatevecOptions sv;
        sv.qubit_limit = a.engine.sv_limit;
        sv.threads = thread_count(ctx.common);
        Rng rng(ctx.common.seed);
        doc["samples"] = sample(evolve(file.graph, angles, sv), a.shots, rng);
        doc["bit_order"] = "little-endian";
    }
    ctx.out << doc.dump(2) << '\n';
    ctx.err << "energy " << fixed4(r.total) << "  ratio " << fixed4(r.ratio)
            << "  (" << r.edges.size() << " edges, " << method_name(r.method)
            << ", preprocess " << duration4(engine.preprocess_seconds())
            << " s, query " << duration4(r.query_seconds) << " s)\n";
}

// ------------------------------------------------------------- optimize

struct OptimizeArgs {
    std::string graph;
    std::size_t p = 1;
    std::string config;
    std::string trace;
    std::string optimizer;
    std::size_t budget = 0;
    std::size_t resolution = 0;
    std::size_t top_k = 0;
    std::size_t population = 0;
    double crossover = 0.0;
    double differential_weight = 0.0;
    std::size_t generations = 0;
    std::size_t restarts = 0;
    std::size_t local_budget = 0;
    unsigned optimizer_threads = 0;
    EngineFlags engine;
    CLI::App *app = nullptr;
};

bool given(const CLI::App *app, const std::string &name) {
    return app->count(name) > 0;
}

OptimizerConfig optimizer_config(const OptimizeArgs &a, const Common &common,
                                 const CLI::App *app) {
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::differential_evolution;
    try {
        if (!a.config.empty()) {
            cfg = config_from_json(read_json_arg(a.config, "--config"), cfg);
        }
        if (given(app, "--optimizer")) {
            cfg.kind = optimizer_from_name(a.optimizer);
        }
    } catch (const Error &e) {
        throw UsageError(e.what());
    }
    if (given(app, "--seed")) {
        cfg.seed = common.seed;
    }
    if (given(app, "--budget")) {
        cfg.budget = a.budget;
    }
    if (given(app, "--resolution")) {
        cfg.resolution = a.resolution;
    }
    if (given(app, "--top-k")) {
        cfg.top_k = a.top_k;
    }
    if (given(app, "--population")) {
        cfg.population = a.population;
    }
    if (given(app, "--crossover")) {
        cfg.crossover = a.crossover;
    }
    if (given(app, "--differential-weight")) {
        cfg.differential_weight = a.differential_weight;
    }
    if (given(app, "--generations")) {
        cfg.generations = a.generations;
    }
    if (given(app, "--restarts")) {
        cfg.restarts = a.restarts;
    }
    if (given(app, "--local-budget")) {
        cfg.local_budget = a.local_budget;
    }
    if (given(app, "--optimizer-threads")) {
        cfg.threads = a.optimizer_threads;
    }
    if (cfg.budget < 1 || cfg.resolution < 2 || cfg.population < 4) {
        throw UsageError("optimizer config needs budget >= 1, resolution >= 2 "
                         "and population >= 4");
    }
    return cfg;
}

void write_trace(std::ostream &out, const std::vector<OptimizeResult> &levels) {
    out << "query_index,value\n";
    std::size_t offset = 0;
    for (const auto &r : levels) {
        for (const auto &t : r.trace) {
            out << offset + t.query << ',' << format_real(t.value) << '\n';
        }
        offset += r.queries_used;
    }
}

void cmd_optimize(const OptimizeArgs &a, Context &ctx) {
    const GraphFile file = read_graph(a.graph);
    const OptimizerConfig cfg = optimizer_config(a, ctx.common, a.app);
    // Concurrent optimizer evaluations each get a single-threaded engine.
    const unsigned engine_threads = cfg.threads > 1 ? 1 : thread_count(ctx.common);
    const auto base = engine_options(file, a.p, a.engine, engine_threads);
    const double weight = edge_weight_sum(file.graph, *base.edges);

    double preprocess = 0.0;
    const auto family = [&](std::size_t depth) {
        EnergyOptions o = base;
        if (o.cache_path && depth != a.p) {
            o.cache_path->replace_extension(".d" + std::to_string(depth) + ".json");
        }
        auto engine = std::make_shared<const Engine>(file.graph, depth, o);
        preprocess += engine->preprocess_seconds();
        return Objective{[engine](const AngleSequence &x) {
                             return engine->query(x).total;
                         },
                         weight};
    };

    ctx.record.config = engine_config(base, a.engine);
    ctx.record.config["graph"] = a.graph;
    ctx.record.config["depth"] = a.p;
    ctx.record.config["optimizer"] = config_to_json(cfg);
    ctx.record.seeds["optimizer"] = cfg.seed;

    const auto start = Clock::now();
    std::vector<OptimizeResult> levels;
    if (cfg.kind == OptimizerKind::procession) {
        levels = procession(family, a.p, cfg);
    } else {
        levels.push_back(optimize(family, a.p, cfg));
    }
    const double elapsed = seconds_since(start);
    const OptimizeResult &best = levels.back();
    std::size_t queries = 0;
    for (const auto &r : levels) {
        queries += r.queries_used;
    }
    ctx.record.preprocess_s = preprocess;
    ctx.record.query_s = queries > 0 ? (elapsed - preprocess) / static_cast<double>(queries) : 0.0;

    json doc = result_to_json(best);
    doc["depth"] = a.p;
    doc["optimizer"] = optimizer_name(cfg.kind);
    doc["config"] = config_to_json(cfg);
    if (cfg.kind == OptimizerKind::procession) {
        json lv = json::array();
        for (std::size_t i = 0; i < levels.size(); ++i) {
            json r = result_to_json(levels[i]);
            r["depth"] = i + 1;
            lv.push_back(std::move(r));
        }
        doc["levels"] = std::move(lv);
    }
    ctx.out << doc.dump(2) << '\n';

    if (!a.trace.empty()) {
        std::ofstream t(a.trace);
        if (!t) {
            throw Error("cannot write trace file '" + a.trace + "'");
        }
        write_trace(t, levels);
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::size_t depth = cfg.kind == OptimizerKind::procession ? i + 1 : a.p;
        const auto &r = levels[i];
        ctx.err << "p=" << depth << "  ratio " << fixed4(r.best_ratio) << "  energy "
                << fixed4(r.best_value) << "  gamma";
        for (const double g : r.best_angles.gamma()) {
            ctx.err << ' ' << fixed4(g);
        }
        ctx.err << "  beta";
        for (const double b : r.best_angles.beta()) {
            ctx.err << ' ' << fixed4(b);
        }
        ctx.err << "  (" << r.queries_used << " queries)\n";
    }
}

// ----------------------------------------------------------------- tree

struct TreeArgs {
    std::size_t d = 3;
    std::size_t p = 1;
    std::string format;
};

GraphFormat format_from_name(const std::string &name) {
    if (name == "edge-list") {
        return GraphFormat::edge_list;
    }
    if (name == "graph6") {
        return GraphFormat::graph6;
    }
    return GraphFormat::json;
}

void cmd_tree(const TreeArgs &a, Context &ctx) {
    if (a.d < 2) {
        throw UsageError("--d must be at least 2");
    }
    if (a.p < 1) {
        throw UsageError("--p must be at least 1");
    }
    GraphFile file{tree_like_graph(a.d, a.p), {}, EdgeId{0}};
    GraphFormat fmt = GraphFormat::edge_list;
    if (!a.format.empty()) {
        fmt = format_from_name(a.format);
    } else if (!ctx.common.out.empty()) {
        fmt = format_for_path(ctx.common.out);
    }
    ctx.record.config = {{"d", a.d}, {"p", a.p}};
    save_graph(ctx.out, file, fmt);
    ctx.err << "tree d=" << a.d << " p=" << a.p << ": "
            << file.graph.num_vertices() << " vertices, " << file.graph.num_edges()
            << " edges, root edge 0\n";
}

// ------------------------------------------------------------------ iso

struct IsoArgs {
    std::string first;
    std::string second;
    std::size_t p = 1;
    std::size_t trials = 8;
    double epsilon = -1.0;
    EngineFlags engine;
};

void cmd_iso(const IsoArgs &a, Context &ctx) {
    const GraphFile g1 = read_graph(a.first);
    const GraphFile g2 = read_graph(a.second);
    DistinguishOptions opts;
    opts.trials = a.trials;
    if (a.epsilon >= 0.0) {
        opts.epsilon = a.epsilon;
    }
    opts.energy = basic_options(a.engine, thread_count(ctx.common));
    Rng rng(ctx.common.seed);
    const auto start = Clock::now();
    const SeparationVerdict v = distinguish(g1.graph, g2.graph, a.p, rng, opts);
    ctx.record.query_s = seconds_since(start);
    ctx.record.config = {{"graphs", {a.first, a.second}},
                         {"depth", a.p},
                         {"trials", a.trials},
                         {"epsilon", v.epsilon},
                         {"method", a.engine.method}};
    json doc = verdict_to_json(v);
    doc["graphs"] = {a.first, a.second};
    ctx.out << doc.dump(2) << '\n';
    ctx.err << (v.separated ? "separated" : "not separated") << " at p=" << a.p
            << " after " << v.trials.size() << " trial(s)";
    if (v.degenerate) {
        ctx.err << " (vertex or edge counts differ)";
    }
    ctx.err << '\n';
}

// ------------------------------------------------------------ landscape

struct LandscapeArgs {
    std::vector<std::string> files;
    std::size_t k = 2;
    std::size_t p = 1;
    std::string normalization = "per-edge";
    std::string json_out;
    EngineFlags engine;
};

void cmd_landscape(const LandscapeArgs &a, Context &ctx) {
    std::vector<Graph> graphs;
    std::vector<std::string> ids;
    for (const auto &path : a.files) {
        require_file(path);
        auto collection = load_graph_collection(path);
        const std::string stem = fs::path(path).stem().string();
        for (std::size_t i = 0; i < collection.size(); ++i) {
            ids.push_back(collection.size() == 1 ? stem : stem + "#" + std::to_string(i));
            graphs.push_back(std::move(collection[i].graph));
        }
    }
    LandscapeOptions opts;
    opts.normalization = normalization_from_name(a.normalization);
    opts.threads = thread_count(ctx.common);
    opts.energy = basic_options(a.engine, 0);
    Rng rng(ctx.common.seed);
    const auto start = Clock::now();
    const Landscape l = landscape(graphs, ids, a.k, a.p, rng, opts);
    ctx.record.query_s = seconds_since(start);
    const json companion = landscape_to_json(l, ctx.common.seed);
    ctx.record.config = {{"files", a.files},
                         {"k", a.k},
                         {"depth", a.p},
                         {"normalization", a.normalization},
                         {"angles", companion.at("angles")}};
    write_landscape_csv(ctx.out, l);
    std::string json_path = a.json_out;
    if (json_path.empty() && !ctx.common.out.empty()) {
        json_path = ctx.common.out + ".json";
    }
    if (!json_path.empty()) {
        std::ofstream j(json_path);
        if (!j) {
            throw Error("cannot write '" + json_path + "'");
        }
        j << companion.dump(2) << '\n';
    }
    ctx.err << "landscape: " << graphs.size() << " graph(s) x " << a.k
            << " angle sequence(s) at p=" << a.p << '\n';
}

// ----------------------------------------------------------------- walk

struct WalkArgs {
    std::string graph;
    std::size_t steps = 100;
    std::size_t k = 4;
    std::size_t p = 1;
    std::string normalization = "per-edge";
    EngineFlags engine;
};

void cmd_walk(const WalkArgs &a, Context &ctx) {
    const GraphFile file = read_graph(a.graph);
    LandscapeOptions opts;
    opts.normalization = normalization_from_name(a.normalization);
    opts.threads = thread_count(ctx.common);
    opts.energy = basic_options(a.engine, 0);
    Rng rng(ctx.common.seed);
    const auto start = Clock::now();
    const Walk w = walk_experiment(file.graph, a.steps, a.k, a.p, rng, opts);
    ctx.record.query_s = seconds_since(start);
    json angles = json::array();
    for (const auto &x : w.angles) {
        angles.push_back(angles_to_json(x));
    }
    ctx.record.config = {{"graph", a.graph},
                         {"steps", a.steps},
                         {"k", a.k},
                         {"depth", a.p},
                         {"normalization", a.normalization},
                         {"angles", angles}};
    write_walk_csv(ctx.out, w);
    std::size_t moved = 0;
    for (const auto &r : w.rows) {
        moved += r.moved;
    }
    ctx.err << "walk: " << a.steps << " step(s), " << moved << " moved, final distance "
            << fixed4(w.rows.back().distance) << '\n';
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<std::size_t> n{10, 20, 30, 50, 100};
    std::vector<std::size_t> d{3};
    std::vector<std::size_t> p{1, 2};
    std::size_t reps = 5;
    std::size_t queries = 5;
    EngineFlags engine;
};

void cmd_bench(const BenchArgs &a, Context &ctx) {
    ctx.record.reproducible = false;
    ctx.record.config = {{"n", a.n}, {"d", a.d}, {"p", a.p},
                         {"reps", a.reps}, {"queries", a.queries},
                         {"method", a.engine.method}};
    ctx.out << "n,d,p,rep,preprocess_s,query_s\n";
    double total_pre = 0.0, total_query = 0.0;
    std::size_t total_runs = 0;
    for (const std::size_t n : a.n) {
        for (const std::size_t d : a.d) {
            if ((n * d) % 2 != 0 || d >= n || d == 0) {
                ctx.err << "skip n=" << n << " d=" << d << ": no simple " << d
                        << "-regular graph on " << n << " vertices\n";
                continue;
            }
            for (const std::size_t p : a.p) {
                std::vector<double> times;
                std::string failure;
                for (std::size_t rep = 0; rep < a.reps && failure.empty(); ++rep) {
                    std::seed_seq seq{ctx.common.seed, std::uint64_t{n}, std::uint64_t{d},
                                      std::uint64_t{p}, std::uint64_t{rep}};
                    Rng rng(seq);
                    try {
                        const Graph g = random_regular(n, d, rng());
                        const Engine engine(
                            g, p, basic_options(a.engine, thread_count(ctx.common)));
                        double q = 0.0;
                        for (std::size_t i = 0; i < a.queries; ++i) {
                            q += engine.query(random_angles(p, rng)).query_seconds;
                        }
                        q /= static_cast<double>(std::max<std::size_t>(a.queries, 1));
                        times.push_back(q);
                        total_pre += engine.preprocess_seconds();
                        total_query += q;
                        ++total_runs;
                        ctx.out << n << ',' << d << ',' << p << ',' << rep << ','
                                << format_real(engine.preprocess_seconds()) << ','
                                << format_real(q) << '\n';
                    } catch (const Error &e) {
                        failure = e.what();
                    }
                }
                if (!failure.empty()) {
                    ctx.err << "skip n=" << n << " d=" << d << " p=" << p << ": "
                            << failure << '\n';
                }
                if (!times.empty()) {
                    const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
                    double mean = 0.0;
                    for (const double t : times) {
                        mean += t;
                    }
                    mean /= static_cast<double>(times.size());
                    ctx.err << "n=" << n << " d=" << d << " p=" << p << ": query mean "
                            << duration4(mean) << " s, min " << duration4(*lo) << " s, max "
                            << duration4(*hi) << " s\n";
                }
            }
        }
    }
    ctx.record.preprocess_s = total_pre;
    ctx.record.query_s = total_runs > 0 ? total_query / static_cast<double>(total_runs) : 0.0;
}

// --------------------------------------------------------------- replay

struct ReplayArgs {
    std::string manifest;
    unsigned threads = 0;
};

// Removes `--name value` and `--name=value` for each name.
std::vector<std::string> strip_options(const std::vector<std::string> &args,
                                       const std::vector<std::string> &names) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        bool skip = false;
        for (const auto &name : names) {
            if (args[i] == name) {
                ++i;
                skip = true;
                break;
            }
            if (args[i].rfind(name + "=", 0) == 0) {
                skip = true;
                break;
            }
        }
        if (!skip) {
            out.push_back(args[i]);
        }
    }
    return out;
}

int execute(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            std::string *capture);

int cmd_replay(const ReplayArgs &a, std::ostream &out, std::ostream &err) {
    require_file(a.manifest);
    std::ifstream in(a.manifest);
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception &e) {
        throw UsageError("manifest is not valid JSON: " + std::string(e.what()));
    }
    if (m.value("schema", "") != "qlc.manifest/1") {
        throw UsageError("not a qlc run manifest: " + a.manifest);
    }
    if (!m.at("output").at("reproducible").get<bool>()) {
        throw UsageError("the '" + m.at("command").get<std::string>() +
                         "' output contains timings and cannot be replayed");
    }
    auto args = strip_options(m.at("args").get<std::vector<std::string>>(),
                              {"--out", "--manifest", "--threads", "--trace", "--json"});
    const unsigned threads = a.threads != 0 ? a.threads : m.at("threads").get<unsigned>();
    args.push_back("--threads");
    args.push_back(std::to_string(threads));

    const fs::path cwd = m.value("cwd", "");
    const fs::path here = fs::current_path();
    if (!cwd.empty() && fs::is_directory(cwd)) {
        fs::current_path(cwd);
    }
    std::string captured;
    std::ostringstream sink;
    int code = exit_runtime;
    try {
        code = execute(args, sink, sink, &captured);
    } catch (...) {
        fs::current_path(here);
        throw;
    }
    fs::current_path(here);
    if (code != exit_ok) {
        err << sink.str();
        throw Error("replayed command failed with exit code " + std::to_string(code));
    }
    const std::string expected = m.at("output").at("fnv1a64").get<std::string>();
    const std::string actual = output_digest(captured);
    const bool identical = expected == actual;
    const json doc{{"identical", identical},
                   {"command", m.at("command")},
                   {"threads", threads},
                   {"expected", expected},
                   {"actual", actual},
                   {"bytes", captured.size()}};
    out << doc.dump(2) << '\n';
    err << (identical ? "replay identical" : "replay DIFFERS") << " with " << threads
        << " thread(s)\n";
    return identical ? exit_ok : exit_runtime;
}

// ------------------------------------------------------------- dispatch

void add_common(CLI::App *sub, Common &c) {
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", c.threads,
                    "Worker threads (default: $QLC_THREADS or all cores)");
    sub->add_option("--out", c.out, "Write the primary output to this file");
    sub->add_option("--manifest", c.manifest,
                    "Run manifest path (default: <out>.manifest.json, else stderr)");
}

void write_manifest(const Context &ctx, const std::string &command,
                    const std::vector<std::string> &args, const std::string &output,
                    double total_s) {
    json seeds = ctx.record.seeds;
    seeds["seed"] = ctx.common.seed;
    const json m{{"schema", "qlc.manifest/1"},
                 {"command", command},
                 {"args", args},
                 {"cwd", fs::current_path().string()},
                 {"config", ctx.record.config},
                 {"seeds", seeds},
                 {"threads", thread_count(ctx.common)},
                 {"version", QLC_VERSION},
                 {"timestamp", utc_timestamp()},
                 {"timings",
                  {{"preprocess_s", ctx.record.preprocess_s},
                   {"query_s", ctx.record.query_s},
                   {"total_s", total_s}}},
                 {"output",
                  {{"bytes", output.size()},
                   {"fnv1a64", output_digest(output)},
                   {"reproducible", ctx.record.reproducible}}}};
    std::string path = ctx.common.manifest;
    if (path.empty() && !ctx.common.out.empty()) {
        path = ctx.common.out + ".manifest.json";
    }
    if (path.empty()) {
        ctx.err << "manifest " << m.dump() << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw Error("cannot write manifest '" + path + "'");
    }
    f << m.dump(2) << '\n';
}

int execute(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            std::string *capture) {
    CLI::App app{"QAOA MAX-CUT energy evaluation and optimization by lightcone "
                 "tensor-network contraction",
                 "qlc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QLC_VERSION);

    Common common;
    QueryArgs qa;
    auto *query = app.add_subcommand("query", "Energy of a graph at given angles");
    query->add_option("graph", qa.graph, "Graph file")->required();
    query->add_option("--angles", qa.angles, "[[gamma...],[beta...]] or a JSON file")
        ->required();
    query->add_option("--p", qa.p, "Depth (checked against the angles)");
    query->add_option("--shots", qa.shots,
                      "Also sample this many basis states from the whole-graph state "
                      "vector (qubit i is bit i)");
    add_engine_flags(query, qa.engine, true);
    add_common(query, common);

    OptimizeArgs oa;
    auto *opt = app.add_subcommand("optimize", "Maximize the energy over the angles");
    oa.app = opt;
    opt->add_option("graph", oa.graph, "Graph file")->required();
    opt->add_option("--p", oa.p, "Depth (p_max for procession)")->required()
        ->check(CLI::PositiveNumber);
    opt->add_option("--config", oa.config, "Optimizer config JSON (text or file)");
    opt->add_option("--optimizer", oa.optimizer, "grid, grid-local, de, local or procession");
    opt->add_option("--budget", oa.budget, "Query budget");
    opt->add_option("--resolution", oa.resolution, "Grid points per axis");
    opt->add_option("--top-k", oa.top_k, "Grid points refined by grid-local");
    opt->add_option("--population", oa.population, "DE population");
    opt->add_option("--crossover", oa.crossover, "DE crossover rate");
    opt->add_option("--differential-weight", oa.differential_weight, "DE weight");
    opt->add_option("--generations", oa.generations, "DE generation limit");
    opt->add_option("--restarts", oa.restarts, "Procession starts per depth");
    opt->add_option("--local-budget", oa.local_budget, "Queries per local search");
    opt->add_option("--optimizer-threads", oa.optimizer_threads,
                    "Concurrent evaluations within one optimizer batch");
    opt->add_option("--trace", oa.trace, "Write the improvement trace as CSV");
    add_engine_flags(opt, oa.engine, true);
    add_common(opt, common);

    TreeArgs ta;
    auto *tree = app.add_subcommand("tree", "Write the tree-like instance of degree d, depth p");
    tree->add_option("--d", ta.d, "Degree")->required();
    tree->add_option("--p", ta.p, "Depth")->required();
    tree->add_option("--format", ta.format, "edge-list, graph6 or json")
        ->check(CLI::IsMember({"edge-list", "graph6", "json"}));
    add_common(tree, common);

    IsoArgs ia;
    auto *iso = app.add_subcommand("iso", "Try to separate two graphs by their energies");
    iso->add_option("first", ia.first, "First graph file")->required();
    iso->add_option("second", ia.second, "Second graph file")->required();
    iso->add_option("--p", ia.p, "Depth")->capture_default_str()->check(CLI::PositiveNumber);
    iso->add_option("--trials", ia.trials, "Random angle draws")->capture_default_str();
    iso->add_option("--epsilon", ia.epsilon, "Separation threshold (default 1e-9 |E|)");
    add_engine_flags(iso, ia.engine, false);
    add_common(iso, common);

    LandscapeArgs la;
    auto *land = app.add_subcommand("landscape", "Energy fingerprints of graphs at k random angle sequences");
    land->add_option("files", la.files, "Graph files (graph6 files may hold many graphs)")
        ->required();
    land->add_option("--k", la.k, "Angle sequences")->capture_default_str()
        ->check(CLI::PositiveNumber);
    land->add_option("--p", la.p, "Depth")->capture_default_str()->check(CLI::PositiveNumber);
    land->add_option("--normalization", la.normalization, "per-edge or total")
        ->check(CLI::IsMember({"per-edge", "total"}))
        ->capture_default_str();
    land->add_option("--json", la.json_out, "Companion JSON (default: <out>.json)");
    add_engine_flags(land, la.engine, false);
    add_common(land, common);

    WalkArgs wa;
    auto *walk = app.add_subcommand("walk", "Fingerprints along a degree-preserving edge-swap walk");
    walk->add_option("graph", wa.graph, "Regular graph file")->required();
    walk->add_option("--steps", wa.steps, "Swap steps")->capture_default_str();
    walk->add_option("--k", wa.k, "Angle sequences")->capture_default_str()
        ->check(CLI::PositiveNumber);
    walk->add_option("--p", wa.p, "Depth")->capture_default_str()->check(CLI::PositiveNumber);
    walk->add_option("--normalization", wa.normalization, "per-edge or total")
        ->check(CLI::IsMember({"per-edge", "total"}))
        ->capture_default_str();
    add_engine_flags(walk, wa.engine, false);
    add_common(walk, common);

    BenchArgs ba;
    auto *bench = app.add_subcommand("bench", "Per-query timings on random regular graphs");
    bench->add_option("--n", ba.n, "Vertex counts")->capture_default_str();
    bench->add_option("--d", ba.d, "Degrees")->capture_default_str();
    bench->add_option("--p", ba.p, "Depths")->capture_default_str();
    bench->add_option("--reps", ba.reps, "Instances per (n, d, p)")->capture_default_str();
    bench->add_option("--queries", ba.queries, "Queries per instance")->capture_default_str();
    add_engine_flags(bench, ba.engine, false);
    add_common(bench, common);

    auto *fourier = app.add_subcommand("fourier", "Reserved");
    fourier->allow_extras();

    ReplayArgs ra;
    auto *replay = app.add_subcommand("replay", "Rerun a manifest and compare its output");
    replay->add_option("manifest", ra.manifest, "Run manifest")->required();
    replay->add_option("--threads", ra.threads, "Thread count for the rerun");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (fourier->parsed()) {
        throw Error("fourier: not implemented");
    }
    if (replay->parsed()) {
        return cmd_replay(ra, out, err);
    }

    std::ostringstream primary;
    Context ctx{common, primary, err, {}};
    std::string command;
    const auto start = Clock::now();
    if (query->parsed()) {
        command = "query";
        cmd_query(qa, ctx);
    } else if (opt->parsed()) {
        command = "optimize";
        cmd_optimize(oa, ctx);
    } else if (tree->parsed()) {
        command = "tree";
        cmd_tree(ta, ctx);
    } else if (iso->parsed()) {
        command = "iso";
        cmd_iso(ia, ctx);
    } else if (land->parsed()) {
        command = "landscape";
        cmd_landscape(la, ctx);
    } else if (walk->parsed()) {
        command = "walk";
        cmd_walk(wa, ctx);
    } else {
        command = "bench";
        cmd_bench(ba, ctx);
    }
    const double total = seconds_since(start);
    const std::string output = primary.str();
    if (capture != nullptr) {
        *capture = output;
        return exit_ok;
    }
    if (common.out.empty()) {
        out << output << std::flush;
    } else {
        std::ofstream f(common.out, std::ios::binary);
        if (!f || !(f << output)) {
            throw Error("cannot write '" + common.out + "'");
        }
    }
    write_manifest(ctx, command, args, output, total);
    return exit_ok;
}

} // namespace

std::string output_digest(const std::string &bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return hex64(h);
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    try {
        return execute(args, out, err, nullptr);
    } catch (const UsageError &e) {
        err << "qlc: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        err << "qlc: " << e.what() << '\n';
        return exit_runtime;
    }
}

} // namespace qlc::cli
