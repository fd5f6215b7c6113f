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
#include "qlc/statevec.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "qlc/error.hpp"
#include "qlc/parallel.hpp"

namespace qlc {

namespace {

// Fixed chunking keeps the per-element arithmetic identical for every
// thread count.
constexpr std::size_t chunk_bits = 14;

void for_chunks(std::size_t size, unsigned threads,
                const std::function<void(std::size_t, std::size_t)> &fn) {
    const std::size_t chunk = std::size_t{1} << chunk_bits;
    const std::size_t count = (size + chunk - 1) / chunk;
    parallel_for(count, threads, [&](std::size_t c) {
        fn(c * chunk, std::min(size, (c + 1) * chunk));
    });
}

// Plain product, without the inf/nan recovery of operator*.
std::complex<double> mul(std::complex<double> x, std::complex<double> y) {
    return {x.real() * y.real() - x.imag() * y.imag(),
            x.real() * y.imag() + x.imag() * y.real()};
}

} // namespace

StateVector evolve(const Graph &g, const AngleSequence &a,
                   const StatevecOptions &options) {
    const std::size_t n = g.num_vertices();
    if (n > options.qubit_limit) {
        throw LimitExceeded("state vector needs " + std::to_string(n) +
                            " qubits, above the limit of " +
                            std::to_string(options.qubit_limit));
    }
    const unsigned threads =
        options.threads == 0 ? default_thread_count() : options.threads;
    const std::size_t size = std::size_t{1} << n;

    // cut[z] for z in [2^h, 2^(h+1)) extends cut[z - 2^h] by setting bit h:
    // edges to higher vertices become cut, edges to lower ones flip.
    std::vector<double> cut(size, 0.0);
    for (std::size_t h = 0; h < n; ++h) {
        const std::size_t bit = std::size_t{1} << h;
        double up = 0.0;
        std::vector<std::pair<std::size_t, double>> down;
        for (const auto &nb : g.neighbors(static_cast<Vertex>(h))) {
            const double w = g.edge(nb.edge).w;
            if (nb.vertex > h) {
                up += w;
            } else {
                down.emplace_back(nb.vertex, w);
            }
        }
        for_chunks(bit, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t z = lo; z < hi; ++z) {
                double c = cut[z] + up;
                for (const auto &[v, w] : down) {
                    c += (z >> v) & 1U ? -w : w;
                }
                cut[z | bit] = c;
            }
        });
    }

    // Small non-negative integer weights make every cut an index into a
    // per-layer phase table.
    bool integral = true;
    double weight_sum = 0.0;
    for (const auto &e : g.edges()) {
        integral = integral && e.w >= 0.0 && e.w == std::floor(e.w);
        weight_sum += e.w;
    }
    integral = integral && weight_sum <= 65536.0;
    const auto max_cut = static_cast<std::size_t>(integral ? weight_sum : 0.0);

    StateVector s;
    s.n_qubits = n;
    s.amplitudes.assign(
        size, std::complex<double>(1.0 / std::sqrt(static_cast<double>(size)),
                                   0.0));
    auto &amp = s.amplitudes;
    for (std::size_t layer = 0; layer < a.depth(); ++layer) {
        const double gamma = a.gamma()[layer];
        std::vector<std::complex<double>> table;
        if (integral) {
            table.resize(max_cut + 1);
            for (std::size_t v = 0; v <= max_cut; ++v) {
                table[v] = std::polar(1.0, -gamma * static_cast<double>(v));
            }
        }
        const double c = std::cos(a.beta()[layer]);
        const double sn = std::sin(a.beta()[layer]);
        // c x - i s y and c y - i s x.
        const auto rotate = [c, sn](std::complex<double> &x,
                                    std::complex<double> &y) {
            const auto x0 = x;
            x = {c * x.real() + sn * y.imag(), c * x.imag() - sn * y.real()};
            y = {c * y.real() + sn * x0.imag(), c * y.imag() - sn * x0.real()};
        };
        // The phase and the mixers on qubits below chunk_bits act within one
        // chunk, so they share a single pass over memory.
        const std::size_t local = std::min(n, chunk_bits);
        for_chunks(size, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t z = lo; z < hi; ++z) {
                const auto f = integral
                                   ? table[static_cast<std::size_t>(cut[z])]
                                   : std::polar(1.0, -gamma * cut[z]);
                amp[z] = mul(amp[z], f);
            }
            for (std::size_t q = 0; q < local; ++q) {
                const std::size_t bit = std::size_t{1} << q;
                for (std::size_t base = lo; base < hi; base += 2 * bit) {
                    for (std::size_t z = base; z < base + bit; ++z) {
                        rotate(amp[z], amp[z | bit]);
                    }
                }
            }
        });
        for (std::size_t q = local; q < n; ++q) {
            const std::size_t bit = std::size_t{1} << q;
            // Pair index k enumerates basis states with bit q clear.
            for_chunks(size / 2, threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t k = lo; k < hi; ++k) {
                    const std::size_t z0 = ((k >> q) << (q + 1)) | (k & (bit - 1));
                    rotate(amp[z0], amp[z0 | bit]);
                }
            });
        }
    }
    return s;
}

double edge_expectation(const StateVector &s, const Edge &e) {
    double total = 0.0;
    // Branch-free: uncut states add an exact zero.
    for (std::size_t z = 0; z < s.amplitudes.size(); ++z) {
        const auto &x = s.amplitudes[z];
        total += (x.real() * x.real() + x.imag() * x.imag()) *
                 static_cast<double>(((z >> e.u) ^ (z >> e.v)) & 1U);
    }
    return e.w * total;
}

EnergyResult energy_sv(const Graph &g, const AngleSequence &a,
                       const StatevecOptions &options) {
    const auto start = std::chrono::steady_clock::now();
    const StateVector s = evolve(g, a, options);
    EnergyResult r;
    r.method = Method::state_vector;
    r.edges.resize(g.num_edges());
    r.per_edge.resize(g.num_edges());
    const unsigned threads =
        options.threads == 0 ? default_thread_count() : options.threads;
    parallel_for(g.num_edges(), threads, [&](std::size_t i) {
        r.edges[i] = static_cast<EdgeId>(i);
        r.per_edge[i] = edge_expectation(s, g.edge(static_cast<EdgeId>(i)));
    });
    for (const double x : r.per_edge) {
        r.total += x;
    }
    const double w = g.total_weight();
    r.ratio = w != 0.0 ? r.total / w : 0.0;
    r.query_seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return r;
}

std::vector<std::uint64_t> sample(const StateVector &s, std::size_t shots,
                                  Rng &rng) {
    if (shots == 0) {
        throw Error("shots must be at least 1");
    }
    std::vector<double> cumulative(s.amplitudes.size());
    double acc = 0.0;
    for (std::size_t z = 0; z < s.amplitudes.size(); ++z) {
        acc += std::norm(s.amplitudes[z]);
        cumulative[z] = acc;
    }
    std::vector<std::uint64_t> out;
    out.reserve(shots);
    for (std::size_t i = 0; i < shots; ++i) {
        const double u = uniform01(rng) * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            --it;
        }
        out.push_back(static_cast<std::uint64_t>(it - cumulative.begin()));
    }
    return out;
}

} // namespace qlc
