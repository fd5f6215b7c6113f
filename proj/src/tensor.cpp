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
#include "qlc/tensor.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "qlc/error.hpp"

namespace qlc {

Tensor::Tensor(std::vector<IndexId> idx, std::vector<Complex> values)
    : indices(std::move(idx)), data(std::move(values)) {
    if (indices.size() >= 63 ||
        data.size() != (std::size_t{1} << indices.size())) {
        throw Error("tensor data length " + std::to_string(data.size()) +
                    " does not match rank " + std::to_string(indices.size()));
    }
    auto sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error("tensor index ids must be unique");
    }
}

std::uint64_t wiring_hash(std::span<const std::vector<IndexId>> tensor_indices,
                          std::span<const IndexId> open_indices) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 1099511628211ULL;
    };
    mix(tensor_indices.size());
    for (const auto &idx : tensor_indices) {
        mix(idx.size());
        for (const auto i : idx) {
            mix(i);
        }
    }
    mix(open_indices.size());
    for (const auto i : open_indices) {
        mix(i);
    }
    return h;
}

TensorNetwork::TensorNetwork(std::vector<Tensor> tensors,
                             std::vector<IndexId> open_indices)
    : tensors_(std::move(tensors)), open_(std::move(open_indices)) {
    const auto mult = index_multiplicity();
    auto sorted = open_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error("open indices must be unique");
    }
    for (const auto i : open_) {
        if (mult.find(i) == mult.end()) {
            throw Error("open index " + std::to_string(i) +
                        " does not appear in any tensor");
        }
    }
    std::vector<std::vector<IndexId>> wiring;
    wiring.reserve(tensors_.size());
    for (const auto &t : tensors_) {
        wiring.push_back(t.indices);
    }
    structure_hash_ = wiring_hash(wiring, open_);
}

std::map<IndexId, std::size_t> TensorNetwork::index_multiplicity() const {
    std::map<IndexId, std::size_t> out;
    for (const auto &t : tensors_) {
        for (const auto i : t.indices) {
            ++out[i];
        }
    }
    return out;
}

std::vector<IndexId> TensorNetwork::distinct_indices() const {
    std::vector<IndexId> out;
    for (const auto &t : tensors_) {
        out.insert(out.end(), t.indices.begin(), t.indices.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Tensor brute_force_contract(const TensorNetwork &net,
                            std::size_t max_indices) {
    const auto ids = net.distinct_indices();
    if (ids.size() > max_indices) {
        throw LimitExceeded("brute force limited to " +
                            std::to_string(max_indices) + " indices, got " +
                            std::to_string(ids.size()));
    }
    std::unordered_map<IndexId, std::size_t> bit;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        bit[ids[k]] = k;
    }
    const auto &open = net.open_indices();
    std::vector<Complex> out(std::size_t{1} << open.size(), Complex{0, 0});
    const std::size_t total = std::size_t{1} << ids.size();
    for (std::size_t assignment = 0; assignment < total; ++assignment) {
        Complex product{1.0, 0.0};
        for (const auto &t : net.tensors()) {
            std::size_t offset = 0;
            for (const auto i : t.indices) {
                offset = (offset << 1) | ((assignment >> bit[i]) & 1U);
            }
            product *= t.data[offset];
        }
        std::size_t slot = 0;
        for (const auto i : open) {
            slot = (slot << 1) | ((assignment >> bit[i]) & 1U);
        }
        out[slot] += product;
    }
    return Tensor(open, std::move(out));
}

} // namespace qlc
