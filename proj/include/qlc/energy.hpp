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
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "qlc/angles.hpp"
#include "qlc/contraction.hpp"
#include "qlc/graph.hpp"
#include "qlc/lightcone.hpp"
#include "qlc/result.hpp"

namespace qlc {

struct EnergyOptions {
    Method method = Method::automatic;
    /// Work-pool size; 0 means default_thread_count().
    unsigned threads = 0;
    PlanOptions plan;
    /// Share one contraction among edges with isomorphic lightcones.
    bool dedupe = true;
    /// Plan cache file, read when it matches and written after planning.
    std::optional<std::filesystem::path> cache_path;
    /// Edges to evaluate; all edges when unset.
    std::optional<std::vector<EdgeId>> edges;
    /// Qubit limit of the state-vector paths.
    std::size_t state_vector_limit = 26;
};

/// Cone size and cost thresholds of the automatic method choice.
inline constexpr std::size_t auto_cone_qubit_limit = 20;
inline constexpr std::size_t auto_graph_qubit_limit = 20;

/// Preprocessed energy evaluator for one graph and depth. Construction
/// builds every lightcone, groups isomorphic ones, plans each group and
/// picks its evaluation method; query() is then read-only and may be called
/// from several threads.
///
/// Under Method::automatic a cone of at most 20 qubits is evolved as a state
/// vector when its plan costs more than 8 p 2^q multiply-adds, and the whole
/// graph is evolved instead when it has at most 20 qubits and that is cheaper
/// than the summed per-cone cost.
class Engine {
  public:
    /// Throws RankCapExceeded naming the edge and cone size when a cone
    /// cannot be planned under the cap and no state-vector path applies.
    Engine(Graph g, std::size_t p, EnergyOptions options = {});
    ~Engine();
    Engine(Engine &&) noexcept;
    Engine &operator=(Engine &&) noexcept;

    /// Throws Error on a depth mismatch.
    EnergyResult query(const AngleSequence &a) const;

    const Graph &graph() const noexcept { return graph_; }
    std::size_t depth() const noexcept { return p_; }
    const std::vector<EdgeId> &edges() const noexcept { return edges_; }
    double preprocess_seconds() const noexcept { return preprocess_seconds_; }
    std::size_t num_groups() const noexcept;
    /// Method reported by query(): state_vector when every group (or the
    /// whole graph) is evolved directly.
    Method method() const noexcept { return method_; }
    /// Groups whose plan came from the cache file.
    std::size_t cached_plans() const noexcept { return cached_plans_; }
    /// Largest planned intermediate rank and summed estimated cost.
    int max_rank() const noexcept;
    double est_flops() const noexcept;

  private:
    struct Group;

    Graph graph_;
    std::size_t p_;
    EnergyOptions options_;
    std::vector<EdgeId> edges_;
    std::vector<Group> groups_;
    // Group of edges_[i].
    std::vector<std::size_t> group_of_;
    bool whole_graph_ = false;
    Method method_ = Method::tensor_network;
    double preprocess_seconds_ = 0.0;
    std::size_t cached_plans_ = 0;
};

/// One-shot query: preprocessing plus a single evaluation.
EnergyResult energy_query(const Graph &g, const AngleSequence &a,
                          const EnergyOptions &options = {});

} // namespace qlc
