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
#include "qlc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "qlc/error.hpp"
#include "qlc/parallel.hpp"
#include "qlc/random.hpp"

namespace qlc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
using Point = std::vector<double>;

// Counts queries against a budget and keeps the best point. Batches are
// evaluated concurrently and recorded in submission order.
class Tracker {
  public:
    Tracker(const Objective &f, std::size_t budget, unsigned threads)
        : f_(f), budget_(budget), threads_(threads) {}

    std::size_t used() const noexcept { return count_; }
    std::size_t remaining(std::size_t stop_at) const noexcept {
        const std::size_t end = std::min(budget_, stop_at);
        return end > count_ ? end - count_ : 0;
    }

    // Evaluates a prefix of `points` that fits the budget.
    std::vector<double>
    evaluate(const std::vector<Point> &points,
             std::size_t stop_at = std::numeric_limits<std::size_t>::max()) {
        const std::size_t n = std::min(points.size(), remaining(stop_at));
        std::vector<AngleSequence> angles;
        angles.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            angles.push_back(AngleSequence::from_flat(points[i]));
        }
        std::vector<double> values(n);
        parallel_for(n, threads_,
                     [&](std::size_t i) { values[i] = f_.query(angles[i]); });
        for (std::size_t i = 0; i < n; ++i) {
            record(angles[i], values[i]);
        }
        return values;
    }

    std::optional<double>
    evaluate(const Point &x,
             std::size_t stop_at = std::numeric_limits<std::size_t>::max()) {
        if (remaining(stop_at) == 0) {
            return std::nullopt;
        }
        const AngleSequence a = AngleSequence::from_flat(x);
        const double v = f_.query(a);
        record(a, v);
        return v;
    }

    void record(const AngleSequence &a, double v) {
        ++count_;
        if (!has_best_ || v > best_value_) {
            has_best_ = true;
            best_value_ = v;
            best_ = a;
            trace_.push_back({count_, v});
        }
    }

    OptimizeResult result() const {
        if (!has_best_) {
            throw Error("optimizer made no queries");
        }
        OptimizeResult r;
        r.best_angles = best_;
        r.best_value = best_value_;
        r.best_ratio = f_.weight != 0.0 ? best_value_ / f_.weight : 0.0;
        r.queries_used = count_;
        r.trace = trace_;
        return r;
    }

  private:
    const Objective &f_;
    std::size_t budget_;
    unsigned threads_;
    std::size_t count_ = 0;
    bool has_best_ = false;
    double best_value_ = 0.0;
    AngleSequence best_;
    std::vector<TracePoint> trace_;
};

void validate(const OptimizerConfig &cfg) {
    if (cfg.budget < 1) {
        throw Error("optimizer budget must be at least 1");
    }
    if (cfg.resolution < 2) {
        throw Error("grid resolution must be at least 2");
    }
    if (cfg.population < 4) {
        throw Error("differential evolution needs a population of at least 4");
    }
}

std::vector<GridPoint> grid_impl(Tracker &tracker, std::size_t p,
                                 const OptimizerConfig &cfg) {
    const std::size_t dims = 2 * p;
    const double lattice_size =
        std::pow(static_cast<double>(cfg.resolution), static_cast<double>(dims));
    if (lattice_size > static_cast<double>(tracker.remaining(
                           std::numeric_limits<std::size_t>::max()))) {
        throw LimitExceeded("grid of " + std::to_string(lattice_size) +
                            " points exceeds the query budget");
    }
    const auto total = static_cast<std::size_t>(lattice_size);
    auto point_of = [&](std::size_t index) {
        Point x(dims);
        for (std::size_t k = dims; k-- > 0;) {
            x[k] = two_pi * static_cast<double>(index % cfg.resolution) /
                   static_cast<double>(cfg.resolution);
            index /= cfg.resolution;
        }
        return x;
    };
    std::vector<double> values;
    values.reserve(total);
    constexpr std::size_t batch = 4096;
    for (std::size_t start = 0; start < total; start += batch) {
        std::vector<Point> points;
        for (std::size_t i = start; i < std::min(total, start + batch); ++i) {
            points.push_back(point_of(i));
        }
        const auto v = tracker.evaluate(points);
        values.insert(values.end(), v.begin(), v.end());
    }
    // Lattice index order is the lexicographic order of the angles.
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) {
        order[i] = i;
    }
    const std::size_t k = std::min(cfg.top_k, total);
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                      order.end(), [&](std::size_t a, std::size_t b) {
                          return values[a] != values[b] ? values[a] > values[b]
                                                        : a < b;
                      });
    std::vector<GridPoint> out;
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back({AngleSequence::from_flat(point_of(order[i])), values[order[i]]});
    }
    return out;
}

void nelder_mead(Tracker &tracker, const Point &start,
                 const OptimizerConfig &cfg, std::size_t stop_at) {
    const std::size_t n = start.size();
    std::vector<Point> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += cfg.simplex_scale;
    }
    auto values = tracker.evaluate(simplex, stop_at);
    if (values.size() < simplex.size()) {
        return;
    }
    std::vector<std::size_t> order(n + 1);
    for (;;) {
        for (std::size_t i = 0; i <= n; ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return values[a] > values[b];
        });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n - 1];
        double diameter = 0.0;
        for (const auto &x : simplex) {
            for (std::size_t j = 0; j < n; ++j) {
                diameter = std::max(diameter, std::abs(x[j] - simplex[best][j]));
            }
        }
        if (values[best] - values[worst] < cfg.value_tolerance ||
            diameter < cfg.diameter_tolerance || tracker.remaining(stop_at) == 0) {
            return;
        }

        Point centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                centroid[j] += simplex[i][j] / static_cast<double>(n);
            }
        }
        auto along = [&](double t) {
            Point x(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
            }
            return x;
        };

        const Point xr = along(-1.0);
        const auto fr = tracker.evaluate(xr, stop_at);
        if (!fr) {
            return;
        }
        if (*fr > values[best]) {
            const Point xe = along(-2.0);
            const auto fe = tracker.evaluate(xe, stop_at);
            if (fe && *fe > *fr) {
                simplex[worst] = xe;
                values[worst] = *fe;
            } else {
                simplex[worst] = xr;
                values[worst] = *fr;
            }
            continue;
        }
        if (*fr > values[second_worst]) {
            simplex[worst] = xr;
            values[worst] = *fr;
            continue;
        }
        const bool outside = *fr > values[worst];
        const Point xc = along(outside ? -0.5 : 0.5);
        const auto fc = tracker.evaluate(xc, stop_at);
        if (!fc) {
            return;
        }
        if (outside ? *fc >= *fr : *fc > values[worst]) {
            simplex[worst] = xc;
            values[worst] = *fc;
            continue;
        }
        std::vector<Point> shrunk;
        std::vector<std::size_t> which;
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            Point x(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            shrunk.push_back(std::move(x));
            which.push_back(i);
        }
        const auto fs = tracker.evaluate(shrunk, stop_at);
        for (std::size_t k = 0; k < fs.size(); ++k) {
            simplex[which[k]] = shrunk[k];
            values[which[k]] = fs[k];
        }
        if (fs.size() < shrunk.size()) {
            return;
        }
    }
}

double reflect(double v) {
    if (v < 0.0) {
        v = -v;
    }
    if (v > two_pi) {
        v = 2.0 * two_pi - v;
    }
    return std::clamp(v, 0.0, two_pi);
}

} // namespace

std::string optimizer_name(OptimizerKind k) {
    switch (k) {
    case OptimizerKind::grid:
        return "grid";
    case OptimizerKind::grid_local:
        return "grid-local";
    case OptimizerKind::differential_evolution:
        return "de";
    case OptimizerKind::local:
        return "local";
    case OptimizerKind::procession:
        return "procession";
    }
    return "local";
}

OptimizerKind optimizer_from_name(const std::string &name) {
    if (name == "differential-evolution") {
        return OptimizerKind::differential_evolution;
    }
    for (const auto k : {OptimizerKind::grid, OptimizerKind::grid_local,
                         OptimizerKind::differential_evolution,
                         OptimizerKind::local, OptimizerKind::procession}) {
        if (optimizer_name(k) == name) {
            return k;
        }
    }
    throw Error("unknown optimizer '" + name +
                "' (expected grid, grid-local, de, local or procession)");
}

OptimizerConfig config_from_json(const nlohmann::json &doc, OptimizerConfig c) {
    if (!doc.is_object()) {
        throw Error("optimizer config must be a JSON object");
    }
    try {
        for (const auto &[key, value] : doc.items()) {
            if (key == "kind") {
                c.kind = optimizer_from_name(value.get<std::string>());
            } else if (key == "budget") {
                c.budget = value.get<std::size_t>();
            } else if (key == "seed") {
                c.seed = value.get<std::uint64_t>();
            } else if (key == "threads") {
                c.threads = value.get<unsigned>();
            } else if (key == "resolution") {
                c.resolution = value.get<std::size_t>();
            } else if (key == "top_k") {
                c.top_k = value.get<std::size_t>();
            } else if (key == "population") {
                c.population = value.get<std::size_t>();
            } else if (key == "crossover") {
                c.crossover = value.get<double>();
            } else if (key == "differential_weight") {
                c.differential_weight = value.get<double>();
            } else if (key == "generations") {
                c.generations = value.get<std::size_t>();
            } else if (key == "dither") {
                c.dither = value.get<bool>();
            } else if (key == "polish") {
                c.polish = value.get<bool>();
            } else if (key == "simplex_scale") {
                c.simplex_scale = value.get<double>();
            } else if (key == "value_tolerance") {
                c.value_tolerance = value.get<double>();
            } else if (key == "diameter_tolerance") {
                c.diameter_tolerance = value.get<double>();
            } else if (key == "p1_starts") {
                c.p1_starts = value.get<std::size_t>();
            } else if (key == "restarts") {
                c.restarts = value.get<std::size_t>();
            } else if (key == "jitter") {
                c.jitter = value.get<double>();
            } else if (key == "local_budget") {
                c.local_budget = value.get<std::size_t>();
            } else {
                throw Error("unknown optimizer config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("bad optimizer config value: ") + e.what());
    }
    validate(c);
    return c;
}

nlohmann::json config_to_json(const OptimizerConfig &c) {
    return {{"kind", optimizer_name(c.kind)},
            {"budget", c.budget},
            {"seed", c.seed},
            {"threads", c.threads},
            {"resolution", c.resolution},
            {"top_k", c.top_k},
            {"population", c.population},
            {"crossover", c.crossover},
            {"differential_weight", c.differential_weight},
            {"generations", c.generations},
            {"dither", c.dither},
            {"polish", c.polish},
            {"simplex_scale", c.simplex_scale},
            {"value_tolerance", c.value_tolerance},
            {"diameter_tolerance", c.diameter_tolerance},
            {"p1_starts", c.p1_starts},
            {"restarts", c.restarts},
            {"jitter", c.jitter},
            {"local_budget", c.local_budget}};
}

nlohmann::json result_to_json(const OptimizeResult &r) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto &t : r.trace) {
        trace.push_back({t.query, t.value});
    }
    return {{"best_angles", angles_to_json(r.best_angles)},
            {"best_value", r.best_value},
            {"best_ratio", r.best_ratio},
            {"queries_used", r.queries_used},
            {"trace", trace}};
}

std::vector<GridPoint> grid_search(const Objective &f, std::size_t p,
                                   const OptimizerConfig &cfg) {
    validate(cfg);
    Tracker tracker(f, cfg.budget, cfg.threads);
    return grid_impl(tracker, p, cfg);
}

OptimizeResult local_search(const Objective &f, const AngleSequence &start,
                            const OptimizerConfig &cfg) {
    validate(cfg);
    Tracker tracker(f, cfg.budget, cfg.threads);
    nelder_mead(tracker, start.flat(), cfg, cfg.budget);
    return tracker.result();
}

OptimizeResult differential_evolution(const Objective &f, std::size_t p,
                                      const OptimizerConfig &cfg,
                                      const std::vector<AngleSequence> &seeds) {
    validate(cfg);
    Tracker tracker(f, cfg.budget, cfg.threads);
    Rng rng(cfg.seed);
    const std::size_t dims = 2 * p;
    const std::size_t np = std::max(cfg.population, seeds.size());
    std::vector<Point> pop;
    for (const auto &s : seeds) {
        if (s.depth() != p) {
            throw Error("seed angle depth does not match p");
        }
        pop.push_back(s.flat());
    }
    while (pop.size() < np) {
        Point x(dims);
        for (auto &v : x) {
            v = uniform(rng, 0.0, two_pi);
        }
        pop.push_back(std::move(x));
    }
    auto values = tracker.evaluate(pop);
    if (values.size() < pop.size()) {
        return tracker.result();
    }
    // The polishing run gets its share of the budget up front.
    const std::size_t evolve_end =
        cfg.polish && cfg.budget > np + cfg.local_budget / 4
            ? cfg.budget - std::min(cfg.local_budget, (cfg.budget - np) / 4)
            : cfg.budget;
    for (std::size_t gen = 0; cfg.generations == 0 || gen < cfg.generations; ++gen) {
        if (tracker.remaining(evolve_end) == 0) {
            break;
        }
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        if (*hi - *lo < 1e-13) {
            break;
        }
        const double weight = cfg.dither ? uniform(rng, cfg.differential_weight, 1.0)
                                         : cfg.differential_weight;
        std::vector<Point> trials(np);
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r[3];
            for (std::size_t k = 0; k < 3; ++k) {
                do {
                    r[k] = uniform_index(rng, np);
                } while (r[k] == i || (k > 0 && r[k] == r[0]) ||
                         (k > 1 && r[k] == r[1]));
            }
            const std::size_t forced = uniform_index(rng, dims);
            trials[i] = pop[i];
            for (std::size_t j = 0; j < dims; ++j) {
                if (j == forced || uniform01(rng) < cfg.crossover) {
                    trials[i][j] =
                        reflect(pop[r[0]][j] + weight * (pop[r[1]][j] - pop[r[2]][j]));
                }
            }
        }
        const auto tv = tracker.evaluate(trials, evolve_end);
        for (std::size_t i = 0; i < tv.size(); ++i) {
            if (tv[i] >= values[i]) {
                pop[i] = std::move(trials[i]);
                values[i] = tv[i];
            }
        }
        if (tv.size() < np) {
            break;
        }
    }
    if (cfg.polish) {
        const auto best = static_cast<std::size_t>(
            std::max_element(values.begin(), values.end()) - values.begin());
        nelder_mead(tracker, pop[best], cfg, cfg.budget);
    }
    return tracker.result();
}

OptimizeResult grid_then_local(const Objective &f, std::size_t p,
                               const OptimizerConfig &cfg) {
    validate(cfg);
    const std::size_t lattice = static_cast<std::size_t>(std::pow(
        static_cast<double>(cfg.resolution), static_cast<double>(2 * p)));
    if (lattice > cfg.budget) {
        throw LimitExceeded("grid of " + std::to_string(lattice) +
                            " points exceeds the query budget");
    }
    Tracker tracker(f, lattice + cfg.top_k * cfg.local_budget, cfg.threads);
    const auto top = grid_impl(tracker, p, cfg);
    for (const auto &pt : top) {
        nelder_mead(tracker, pt.angles.flat(), cfg, tracker.used() + cfg.local_budget);
    }
    return tracker.result();
}

std::vector<OptimizeResult>
procession(const std::function<Objective(std::size_t)> &family,
           std::size_t p_max, const OptimizerConfig &cfg) {
    validate(cfg);
    Rng rng(cfg.seed);
    std::vector<OptimizeResult> out;
    for (std::size_t p = 1; p <= p_max; ++p) {
        const Objective f = family(p);
        Tracker tracker(f, cfg.budget, cfg.threads);
        std::vector<Point> starts;
        if (p == 1) {
            for (std::size_t s = 0; s < std::max<std::size_t>(1, cfg.p1_starts); ++s) {
                starts.push_back({uniform(rng, 0.0, two_pi), uniform(rng, 0.0, two_pi)});
            }
        } else {
            const auto &prev = out.back().best_angles;
            std::vector<double> g = prev.gamma(), b = prev.beta();
            g.push_back(g.back());
            b.push_back(b.back());
            Point base = g;
            base.insert(base.end(), b.begin(), b.end());
            for (std::size_t r = 0; r < std::max<std::size_t>(1, cfg.restarts); ++r) {
                Point x = base;
                if (r > 0) {
                    for (auto &v : x) {
                        v += uniform(rng, -cfg.jitter, cfg.jitter);
                    }
                }
                starts.push_back(std::move(x));
            }
        }
        for (const auto &s : starts) {
            nelder_mead(tracker, s, cfg, tracker.used() + cfg.local_budget);
        }
        out.push_back(tracker.result());
    }
    return out;
}

OptimizeResult optimize(const std::function<Objective(std::size_t)> &family,
                        std::size_t p, const OptimizerConfig &cfg) {
    switch (cfg.kind) {
    case OptimizerKind::grid: {
        validate(cfg);
        const Objective f = family(p);
        Tracker tracker(f, cfg.budget, cfg.threads);
        grid_impl(tracker, p, cfg);
        return tracker.result();
    }
    case OptimizerKind::grid_local:
        return grid_then_local(family(p), p, cfg);
    case OptimizerKind::differential_evolution:
        return differential_evolution(family(p), p, cfg);
    case OptimizerKind::local: {
        validate(cfg);
        Rng rng(cfg.seed);
        Point x(2 * p);
        for (auto &v : x) {
            v = uniform(rng, 0.0, two_pi);
        }
        return local_search(family(p), AngleSequence::from_flat(x), cfg);
    }
    case OptimizerKind::procession:
        return procession(family, p, cfg).back();
    }
    throw Error("unknown optimizer kind");
}

} // namespace qlc
