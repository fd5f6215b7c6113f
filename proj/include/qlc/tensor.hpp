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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace qlc {

using Complex = std::complex<double>;

/// Identifier of a binary summation variable. Every index has dimension 2.
using IndexId = std::uint32_t;

/// Dense complex tensor over binary indices. `data` is row-major in index
/// order: the first index is the most significant bit of the offset.
struct Tensor {
    std::vector<IndexId> indices;
    std::vector<Complex> data;

    Tensor() : data{Complex{1.0, 0.0}} {}
    /// Throws Error if the data length is not 2^rank or an index repeats.
    Tensor(std::vector<IndexId> indices, std::vector<Complex> data);

    static Tensor scalar(Complex value) { return Tensor({}, {value}); }

    std::size_t rank() const noexcept { return indices.size(); }
    std::size_t size() const noexcept { return data.size(); }
};

/// A hypergraph of tensors: an index shared by k tensors is one summation
/// variable, for any k >= 1. `open_indices` survive contraction, in the
/// declared order.
class TensorNetwork {
  public:
    TensorNetwork() = default;
    TensorNetwork(std::vector<Tensor> tensors,
                  std::vector<IndexId> open_indices = {});

    const std::vector<Tensor> &tensors() const noexcept { return tensors_; }
    const std::vector<IndexId> &open_indices() const noexcept {
        return open_;
    }
    std::size_t size() const noexcept { return tensors_.size(); }

    /// Number of tensors carrying each index.
    std::map<IndexId, std::size_t> index_multiplicity() const;

    /// Distinct indices across all tensors, ascending.
    std::vector<IndexId> distinct_indices() const;

    /// Hash of the wiring (tensor index lists and open indices) but not of
    /// the values; a plan is reusable on any network with the same hash.
    std::uint64_t structure_hash() const { return structure_hash_; }

  private:
    std::vector<Tensor> tensors_;
    std::vector<IndexId> open_;
    std::uint64_t structure_hash_ = 0;
};

/// Hash of a wiring given as per-tensor index lists plus open indices.
std::uint64_t wiring_hash(std::span<const std::vector<IndexId>> tensor_indices,
                          std::span<const IndexId> open_indices);

/// Exact result by enumerating every assignment of every index. Throws
/// LimitExceeded above `max_indices` distinct indices.
Tensor brute_force_contract(const TensorNetwork &net,
                            std::size_t max_indices = 24);

} // namespace qlc
