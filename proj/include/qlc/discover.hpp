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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlc/angles.hpp"
#include "qlc/energy.hpp"
#include "qlc/graph.hpp"
#include "qlc/random.hpp"

namespace qlc {

/// Angles drawn uniformly from [0, 2 pi)^(2p): gamma_1..gamma_p first, then
/// beta_1..beta_p.
AngleSequence random_angles(std::size_t p, Rng &rng);

struct SeparationTrial {
    AngleSequence angles;
    double e1 = 0.0;
    double e2 = 0.0;
    double difference = 0.0;
};

/// Outcome of the randomized energy comparison of two graphs. `separated`
/// holds exactly when some trial differs by more than epsilon, or when the
/// graphs already differ in vertex or edge count (then `trials` is empty and
/// `degenerate` is set).
struct SeparationVerdict {
    bool separated = false;
    bool degenerate = false;
    std::vector<SeparationTrial> trials;
    std::size_t depth = 0;
    double epsilon = 0.0;
};

struct DistinguishOptions {
    std::size_t trials = 8;
    /// Defaults to 1e-9 times the edge count.
    std::optional<double> epsilon;
    EnergyOptions energy;
};

/// Compares the depth-p energies of two unweighted graphs at random angles,
/// stopping at the first trial that separates them. Throws InvalidGraph for
/// weighted input; engine errors name the graph and edge.
SeparationVerdict distinguish(const Graph &g1, const Graph &g2, std::size_t p,
                              Rng &rng, const DistinguishOptions &options = {});

/// Re-evaluates the verdict's recorded angles; the result carries every
/// recorded trial, without early stopping.
SeparationVerdict replay_verdict(const Graph &g1, const Graph &g2,
                                 const SeparationVerdict &verdict,
                                 const EnergyOptions &energy = {});

nlohmann::json verdict_to_json(const SeparationVerdict &v);
SeparationVerdict verdict_from_json(const nlohmann::json &doc);

enum class Normalization { total, per_edge };

std::string normalization_name(Normalization n);
/// Accepts "total" and "per-edge".
Normalization normalization_from_name(const std::string &name);

/// matrix[i][j] is the energy of graphs[i] at angles[j], divided by the edge
/// count under per-edge normalization.
struct Landscape {
    std::vector<std::string> graphs;
    std::vector<AngleSequence> angles;
    std::vector<std::vector<double>> matrix;
    Normalization normalization = Normalization::per_edge;
};

struct LandscapeOptions {
    Normalization normalization = Normalization::per_edge;
    /// Graphs evaluated concurrently; 0 means default_thread_count().
    unsigned threads = 0;
    EnergyOptions energy;
};

/// Draws k angle sequences and evaluates every graph at each. `ids` names
/// the rows; when empty the rows are named by index. Throws Error when
/// k == 0, the id count is wrong, or a graph is weighted.
Landscape landscape(const std::vector<Graph> &graphs,
                    const std::vector<std::string> &ids, std::size_t k,
                    std::size_t p, Rng &rng,
                    const LandscapeOptions &options = {});

/// Fixed angles instead of random draws.
Landscape landscape(const std::vector<Graph> &graphs,
                    const std::vector<std::string> &ids,
                    std::vector<AngleSequence> angles,
                    const LandscapeOptions &options = {});

/// `graph_id,angles_1..angles_k`, one row per graph.
void write_landscape_csv(std::ostream &out, const Landscape &l);
/// Angles, normalization and the seed when given.
nlohmann::json landscape_to_json(const Landscape &l,
                                 std::optional<std::uint64_t> seed = {});

struct WalkRow {
    std::size_t step = 0;
    bool moved = false;
    /// Graph visited at this step.
    Graph graph;
    std::vector<double> fingerprint;
    /// Euclidean distance from the step-0 fingerprint.
    double distance = 0.0;
};

struct Walk {
    std::vector<AngleSequence> angles;
    std::vector<WalkRow> rows;
};

/// Degree-preserving edge-swap walk of `steps` steps from g0, recording the
/// k-entry fingerprint of every visited graph (steps + 1 rows). The angles
/// are drawn first, then the swaps use the same generator. Throws
/// InvalidGraph unless g0 is regular and unweighted.
Walk walk_experiment(const Graph &g0, std::size_t steps, std::size_t k,
                     std::size_t p, Rng &rng,
                     const LandscapeOptions &options = {});

/// `step,moved,f_1..f_k,distance`.
void write_walk_csv(std::ostream &out, const Walk &w);

} // namespace qlc
