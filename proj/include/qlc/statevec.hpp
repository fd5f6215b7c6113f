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
#include <vector>

#include "qlc/angles.hpp"
#include "qlc/graph.hpp"
#include "qlc/random.hpp"
#include "qlc/result.hpp"

namespace qlc {

/// Dense state over n qubits; basis index bit i is qubit i.
struct StateVector {
    std::size_t n_qubits = 0;
    std::vector<std::complex<double>> amplitudes;
};

struct StatevecOptions {
    std::size_t qubit_limit = 26;
    /// Worker threads for the layer updates; 0 means default_thread_count().
    unsigned threads = 1;
};

/// Prepares the depth-p state: the gamma_1 phase layer, the beta_1 mixing
/// layer, and so on, starting from the uniform superposition. Throws
/// LimitExceeded above the qubit limit.
StateVector evolve(const Graph &g, const AngleSequence &a,
                   const StatevecOptions &options = {});

/// Expectation of w_e * (z_u xor z_v).
double edge_expectation(const StateVector &s, const Edge &e);

/// Per-edge expectations of every edge of g.
EnergyResult energy_sv(const Graph &g, const AngleSequence &a,
                       const StatevecOptions &options = {});

/// I.i.d. basis-state samples from |amplitude|^2.
std::vector<std::uint64_t> sample(const StateVector &s, std::size_t shots,
                                  Rng &rng);

} // namespace qlc
