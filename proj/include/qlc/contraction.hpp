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
#include <span>
#include <vector>

#include <json.hpp>

#include "qlc/tensor.hpp"

namespace qlc {

enum class PlanEffort { fast, thorough };

struct PlanOptions {
    PlanEffort effort = PlanEffort::fast;
    /// Largest admissible intermediate rank (2^cap entries).
    int rank_cap = 30;
    /// Seed for the randomized restarts of PlanEffort::thorough.
    std::uint64_t seed = 0;
    int restarts = 16;
};

/// Merge of slots a and b. Slots 0..num_tensors-1 hold the network's tensors;
/// step k writes its result to slot num_tensors + k.
struct ContractionStep {
    std::uint32_t a;
    std::uint32_t b;

    friend bool operator==(const ContractionStep &,
                           const ContractionStep &) = default;
};

struct ContractionPlan {
    std::size_t num_tensors = 0;
    std::vector<ContractionStep> steps;
    /// Complex multiply-adds the plan performs.
    double est_flops = 0.0;
    /// Largest rank among step results.
    int est_max_intermediate_rank = 0;
    /// Wiring hash of the network the plan was made for.
    std::uint64_t structure_hash = 0;

    friend bool operator==(const ContractionPlan &,
                           const ContractionPlan &) = default;
};

/// Greedy planner. At every step it merges the pair of live tensors sharing
/// an index whose result has the smallest rank, breaking ties by the rank of
/// the merged index set and then by slot order; indices held by no other live
/// tensor and not open are summed in the merge. Unconnected components are
/// joined last, smallest first. PlanEffort::thorough adds seeded randomized
/// restarts and keeps the plan with the lowest est_flops.
/// Throws RankCapExceeded when every candidate plan exceeds the rank cap.
ContractionPlan plan_contraction(const TensorNetwork &net,
                                 const PlanOptions &options = {});

/// Plan for a wiring without tensor values.
ContractionPlan plan_contraction(std::span<const std::vector<IndexId>> wiring,
                                 std::span<const IndexId> open_indices,
                                 const PlanOptions &options = {});

struct ContractStats {
    double multiplies = 0.0;
};

/// A plan lowered to offset tables for a fixed wiring. Build once, run many
/// times with fresh tensor values. Immutable after construction and safe to
/// share between threads.
class CompiledContraction {
  public:
    CompiledContraction() = default;
    CompiledContraction(std::span<const std::vector<IndexId>> wiring,
                        std::span<const IndexId> open_indices,
                        const ContractionPlan &plan);

    /// Runs on values laid out like the wiring: values[i] has 2^rank(i)
    /// entries. Throws Mismatch on a size mismatch.
    Tensor run(std::span<const std::vector<Complex>> values,
               ContractStats *stats = nullptr) const;

    std::size_t num_tensors() const noexcept { return input_sizes_.size(); }

  private:
    struct OffsetTable {
        unsigned low_bits = 0;
        std::vector<std::size_t> low;
        std::vector<std::size_t> high;
    };
    struct Step {
        std::uint32_t a, b;
        std::size_t out_size = 1;
        std::size_t sum_size = 1;
        OffsetTable out_a, out_b, sum_a, sum_b;
    };

    static OffsetTable make_table(std::span<const std::size_t> strides);

    std::vector<std::size_t> input_sizes_;
    std::vector<Step> steps_;
    std::vector<IndexId> final_indices_;
    std::vector<IndexId> open_;
    // Final permutation/summation onto the open indices.
    Step finish_;
    bool needs_finish_ = false;
};

/// Contracts `net` following `plan`. Throws Mismatch when the plan was made
/// for a different wiring.
Tensor contract(const TensorNetwork &net, const ContractionPlan &plan,
                ContractStats *stats = nullptr);

nlohmann::json plan_to_json(const ContractionPlan &plan);
ContractionPlan plan_from_json(const nlohmann::json &doc);

} // namespace qlc
