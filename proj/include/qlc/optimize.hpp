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
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlc/angles.hpp"

namespace qlc {

/// Energy as a function of the angles. Must be safe to call concurrently
/// when an optimizer runs with threads > 1.
using Query = std::function<double(const AngleSequence &)>;

struct Objective {
    Query query;
    /// Divisor turning a value into a ratio (the summed weight of the
    /// evaluated edges).
    double weight = 1.0;
};

enum class OptimizerKind { grid, grid_local, differential_evolution, local, procession };

std::string optimizer_name(OptimizerKind k);
/// Accepts "grid", "grid-local", "de" (or "differential-evolution"),
/// "local" and "procession".
OptimizerKind optimizer_from_name(const std::string &name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::local;
    /// Query budget of one optimizer run (per depth for procession).
    std::size_t budget = 10000;
    std::uint64_t seed = 0;
    /// Concurrent evaluations within one batch.
    unsigned threads = 1;

    // Grid: lattice k * 2 pi / resolution per axis.
    std::size_t resolution = 8;
    std::size_t top_k = 4;

    // Differential evolution.
    std::size_t population = 20;
    double crossover = 0.7;
    double differential_weight = 0.5;
    /// 0 means no generation limit.
    std::size_t generations = 0;
    /// Draw the differential weight per generation from
    /// [differential_weight, 1) instead of keeping it fixed.
    bool dither = true;
    /// Spend what is left of the budget (at most local_budget queries) on a
    /// Nelder-Mead run from the best member.
    bool polish = true;

    // Nelder-Mead.
    double simplex_scale = std::numbers::pi / 10.0;
    /// Stop when the simplex values spread less than this.
    double value_tolerance = 1e-7;
    /// Stop when every vertex lies this close to the best one.
    double diameter_tolerance = 1e-10;

    // Procession.
    std::size_t p1_starts = 16;
    std::size_t restarts = 8;
    double jitter = 0.05;
    std::size_t local_budget = 2000;
};

/// Fields present in `doc` override `base`; unknown keys are an Error.
OptimizerConfig config_from_json(const nlohmann::json &doc,
                                 OptimizerConfig base = {});
nlohmann::json config_to_json(const OptimizerConfig &cfg);

struct TracePoint {
    std::size_t query;
    double value;
};

struct OptimizeResult {
    AngleSequence best_angles;
    double best_value = 0.0;
    double best_ratio = 0.0;
    std::size_t queries_used = 0;
    /// Strict improvements of the best value, with 1-based query numbers.
    std::vector<TracePoint> trace;
};

nlohmann::json result_to_json(const OptimizeResult &r);

struct GridPoint {
    AngleSequence angles;
    double value;
};

/// Evaluates the whole lattice and returns its top_k points, ordered by
/// value descending and then by angles ascending. Throws LimitExceeded
/// when resolution^(2p) exceeds the budget.
std::vector<GridPoint> grid_search(const Objective &f, std::size_t p,
                                   const OptimizerConfig &cfg);

/// Nelder-Mead maximization from `start`.
OptimizeResult local_search(const Objective &f, const AngleSequence &start,
                            const OptimizerConfig &cfg);

/// DE/rand/1/bin over [0, 2 pi]^(2p) with reflection at the bounds, followed
/// by the optional polishing run. `seeds` are placed into the initial
/// population before the random points.
OptimizeResult differential_evolution(const Objective &f, std::size_t p,
                                      const OptimizerConfig &cfg,
                                      const std::vector<AngleSequence> &seeds = {});

/// Grid search followed by a local search from each of the top_k points.
OptimizeResult grid_then_local(const Objective &f, std::size_t p,
                               const OptimizerConfig &cfg);

/// Layer-by-layer optimization. Depth 1 runs local searches from p1_starts
/// random points. Depth p + 1 starts from the depth-p optimum with its last
/// (gamma, beta) pair appended, once as is and restarts - 1 more times with
/// every angle jittered uniformly by up to `jitter`.
std::vector<OptimizeResult>
procession(const std::function<Objective(std::size_t)> &family,
           std::size_t p_max, const OptimizerConfig &cfg);

/// Dispatches on cfg.kind; procession returns its depth-p result.
OptimizeResult optimize(const std::function<Objective(std::size_t)> &family,
                        std::size_t p, const OptimizerConfig &cfg);

} // namespace qlc
