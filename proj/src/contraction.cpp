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
#include "qlc/contraction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>

#include "qlc/error.hpp"
#include "qlc/random.hpp"

namespace qlc {

namespace {

struct CompactWiring {
    std::vector<std::vector<std::uint32_t>> tensors; // sorted compact ids
    std::vector<char> open;                          // per compact id
};

CompactWiring compact(std::span<const std::vector<IndexId>> wiring,
                      std::span<const IndexId> open_indices) {
    std::unordered_map<IndexId, std::uint32_t> ids;
    CompactWiring out;
    out.tensors.reserve(wiring.size());
    auto id_of = [&](IndexId i) {
        auto [it, inserted] =
            ids.emplace(i, static_cast<std::uint32_t>(ids.size()));
        if (inserted) {
            out.open.push_back(0);
        }
        return it->second;
    };
    for (const auto &t : wiring) {
        std::vector<std::uint32_t> c;
        c.reserve(t.size());
        for (const auto i : t) {
            c.push_back(id_of(i));
        }
        std::sort(c.begin(), c.end());
        out.tensors.push_back(std::move(c));
    }
    for (const auto i : open_indices) {
        const auto it = ids.find(i);
        if (it == ids.end()) {
            throw Error("open index " + std::to_string(i) +
                        " does not appear in any tensor");
        }
        out.open[it->second] = 1;
    }
    return out;
}

// result_rank: smallest merged tensor first. size_delta: largest reduction
// in total stored entries first, which favors absorbing small factors.
enum class Objective { result_rank, size_delta };

struct MergeShape {
    std::vector<std::uint32_t> result; // sorted
    std::size_t union_rank = 0;
};

class GreedyPlanner {
  public:
    GreedyPlanner(const CompactWiring &w, int rank_cap)
        : open_(w.open), rank_cap_(rank_cap) {
        slots_ = w.tensors;
        alive_.assign(slots_.size(), 1);
        holders_.resize(open_.size());
        for (std::uint32_t s = 0; s < slots_.size(); ++s) {
            for (const auto i : slots_[s]) {
                holders_[i].push_back(s);
            }
        }
    }

    // Returns the plan, or the offending rank when the cap is exceeded.
    std::pair<std::optional<ContractionPlan>, int>
    run(Objective objective, double temperature, Rng *rng) {
        using Cand = std::tuple<double, std::size_t, std::uint32_t,
                                std::uint32_t>;
        std::priority_queue<Cand, std::vector<Cand>, std::greater<>> queue;
        auto push = [&](std::uint32_t a, std::uint32_t b) {
            if (a > b) {
                std::swap(a, b);
            }
            const auto shape = merge_shape(a, b);
            double key = static_cast<double>(shape.result.size());
            if (objective == Objective::size_delta) {
                key = std::ldexp(1.0, static_cast<int>(shape.result.size())) -
                      std::ldexp(1.0, static_cast<int>(slots_[a].size())) -
                      std::ldexp(1.0, static_cast<int>(slots_[b].size()));
            }
            if (temperature > 0.0) {
                const double u = std::max(uniform01(*rng), 1e-300);
                const double gumbel = -std::log(-std::log1p(-u) + 1e-300);
                const double scale =
                    objective == Objective::size_delta ? std::max(1.0, std::abs(key))
                                                       : 1.0;
                key -= temperature * scale * gumbel;
            }
            queue.emplace(key, shape.union_rank, a, b);
        };
        for (const auto &h : holders_) {
            for (std::size_t x = 0; x < h.size(); ++x) {
                for (std::size_t y = x + 1; y < h.size(); ++y) {
                    push(h[x], h[y]);
                }
            }
        }

        ContractionPlan plan;
        plan.num_tensors = slots_.size();
        std::size_t live = slots_.size();
        while (live > 1) {
            std::uint32_t a = 0, b = 0;
            bool found = false;
            while (!queue.empty()) {
                const auto [key, ur, x, y] = queue.top();
                queue.pop();
                if (alive_[x] && alive_[y]) {
                    a = x;
                    b = y;
                    found = true;
                    break;
                }
            }
            if (!found) {
                // Disconnected pieces: join the two smallest.
                std::vector<std::pair<std::size_t, std::uint32_t>> order;
                for (std::uint32_t s = 0; s < slots_.size(); ++s) {
                    if (alive_[s]) {
                        order.emplace_back(slots_[s].size(), s);
                    }
                }
                std::partial_sort(order.begin(), order.begin() + 2,
                                  order.end());
                a = std::min(order[0].second, order[1].second);
                b = std::max(order[0].second, order[1].second);
            }
            const auto merged = merge(a, b, plan);
            if (!merged) {
                return {std::nullopt, failed_rank_};
            }
            const auto c = *merged;
            --live;

            std::vector<std::uint32_t> partners;
            for (const auto i : slots_[c]) {
                for (const auto t : holders_[i]) {
                    if (t != c) {
                        partners.push_back(t);
                    }
                }
            }
            std::sort(partners.begin(), partners.end());
            partners.erase(std::unique(partners.begin(), partners.end()),
                           partners.end());
            for (const auto t : partners) {
                push(t, c);
            }
        }
        finish(plan);
        return {plan, 0};
    }

    // Merges in the given order: tensor 0 absorbs tensor 1, the result
    // absorbs tensor 2, and so on.
    std::pair<std::optional<ContractionPlan>, int> run_sequential() {
        ContractionPlan plan;
        plan.num_tensors = slots_.size();
        std::uint32_t acc = 0;
        const auto count = static_cast<std::uint32_t>(slots_.size());
        for (std::uint32_t i = 1; i < count; ++i) {
            const auto merged = merge(acc, i, plan);
            if (!merged) {
                return {std::nullopt, failed_rank_};
            }
            acc = *merged;
        }
        finish(plan);
        return {plan, 0};
    }

  private:
    std::optional<std::uint32_t> merge(std::uint32_t a, std::uint32_t b,
                                       ContractionPlan &plan) {
        auto shape = merge_shape(a, b);
        const int rank = static_cast<int>(shape.result.size());
        if (rank > rank_cap_) {
            failed_rank_ = rank;
            return std::nullopt;
        }
        plan.est_flops += std::ldexp(1.0, static_cast<int>(shape.union_rank));
        plan.est_max_intermediate_rank =
            std::max(plan.est_max_intermediate_rank, rank);
        plan.steps.push_back({a, b});

        const auto c = static_cast<std::uint32_t>(slots_.size());
        for (const auto s : {a, b}) {
            for (const auto i : slots_[s]) {
                auto &h = holders_[i];
                h.erase(std::find(h.begin(), h.end(), s));
            }
            alive_[s] = 0;
        }
        for (const auto i : shape.result) {
            holders_[i].push_back(c);
        }
        slots_.push_back(std::move(shape.result));
        alive_.push_back(1);
        return c;
    }

    void finish(ContractionPlan &plan) const {
        // Indices left on the final tensor that are not open get summed by
        // the finishing pass.
        if (!slots_.empty()) {
            const auto last = slots_.size() - 1;
            std::size_t kept = 0;
            for (const auto i : slots_[last]) {
                kept += open_[i] ? 1 : 0;
            }
            if (kept != slots_[last].size() || plan.steps.empty()) {
                plan.est_flops +=
                    std::ldexp(1.0, static_cast<int>(slots_[last].size()));
            }
        }
    }

    MergeShape merge_shape(std::uint32_t a, std::uint32_t b) const {
        const auto &x = slots_[a];
        const auto &y = slots_[b];
        MergeShape out;
        std::size_t i = 0, j = 0;
        auto consider = [&](std::uint32_t idx, std::size_t here) {
            ++out.union_rank;
            if (open_[idx] || holders_[idx].size() > here) {
                out.result.push_back(idx);
            }
        };
        while (i < x.size() || j < y.size()) {
            if (j == y.size() || (i < x.size() && x[i] < y[j])) {
                consider(x[i++], 1);
            } else if (i == x.size() || y[j] < x[i]) {
                consider(y[j++], 1);
            } else {
                consider(x[i], 2);
                ++i;
                ++j;
            }
        }
        return out;
    }

    std::vector<std::vector<std::uint32_t>> slots_;
    std::vector<char> alive_;
    std::vector<std::vector<std::uint32_t>> holders_;
    std::vector<char> open_;
    int rank_cap_;
    int failed_rank_ = 0;
};

} // namespace

ContractionPlan plan_contraction(std::span<const std::vector<IndexId>> wiring,
                                 std::span<const IndexId> open_indices,
                                 const PlanOptions &options) {
    const auto w = compact(wiring, open_indices);
    const auto hash = wiring_hash(wiring, open_indices);

    std::optional<ContractionPlan> best;
    // Smallest rank among the attempts that broke the cap.
    int failed_rank = std::numeric_limits<int>::max();
    auto consider = [&](std::pair<std::optional<ContractionPlan>, int> r) {
        if (!r.first) {
            failed_rank = std::min(failed_rank, r.second);
            return;
        }
        if (!best || r.first->est_flops < best->est_flops) {
            best = std::move(r.first);
        }
    };

    consider(GreedyPlanner(w, options.rank_cap).run_sequential());
    for (const auto objective : {Objective::result_rank, Objective::size_delta}) {
        consider(GreedyPlanner(w, options.rank_cap).run(objective, 0.0, nullptr));
    }
    if (options.effort == PlanEffort::thorough) {
        Rng rng(options.seed);
        constexpr double temperatures[] = {0.25, 0.5, 1.0};
        for (int r = 0; r < options.restarts; ++r) {
            const auto objective =
                r % 2 == 0 ? Objective::size_delta : Objective::result_rank;
            consider(GreedyPlanner(w, options.rank_cap)
                         .run(objective, temperatures[r % 3], &rng));
        }
    }
    if (!best) {
        throw RankCapExceeded("contraction needs an intermediate of rank " +
                                  std::to_string(failed_rank) +
                                  " above the cap " +
                                  std::to_string(options.rank_cap),
                              failed_rank, options.rank_cap);
    }
    best->structure_hash = hash;
    return *best;
}

ContractionPlan plan_contraction(const TensorNetwork &net,
                                 const PlanOptions &options) {
    std::vector<std::vector<IndexId>> wiring;
    wiring.reserve(net.size());
    for (const auto &t : net.tensors()) {
        wiring.push_back(t.indices);
    }
    return plan_contraction(wiring, net.open_indices(), options);
}

CompiledContraction::OffsetTable
CompiledContraction::make_table(std::span<const std::size_t> strides) {
    OffsetTable t;
    const auto bits = static_cast<unsigned>(strides.size());
    t.low_bits = std::min(bits, 10U);
    const unsigned high_bits = bits - t.low_bits;
    auto fill = [&](std::vector<std::size_t> &table, unsigned first,
                    unsigned count) {
        table.assign(std::size_t{1} << count, 0);
        for (std::size_t x = 1; x < table.size(); ++x) {
            table[x] = table[x & (x - 1)] +
                       strides[first + static_cast<unsigned>(std::countr_zero(x))];
        }
    };
    fill(t.low, 0, t.low_bits);
    fill(t.high, t.low_bits, high_bits);
    return t;
}

CompiledContraction::CompiledContraction(
    std::span<const std::vector<IndexId>> wiring,
    std::span<const IndexId> open_indices, const ContractionPlan &plan)
    : open_(open_indices.begin(), open_indices.end()) {
    if (plan.num_tensors != wiring.size() ||
        plan.structure_hash != wiring_hash(wiring, open_indices)) {
        throw Mismatch("contraction plan does not match the network wiring");
    }
    if (!wiring.empty() && plan.steps.size() + 1 != wiring.size()) {
        throw Mismatch("contraction plan does not consume every tensor");
    }

    std::vector<std::vector<IndexId>> slots(wiring.begin(), wiring.end());
    std::unordered_map<IndexId, std::size_t> holders;
    for (const auto &t : slots) {
        input_sizes_.push_back(std::size_t{1} << t.size());
        for (const auto i : t) {
            ++holders[i];
        }
    }
    std::unordered_map<IndexId, char> is_open;
    for (const auto i : open_) {
        is_open[i] = 1;
    }
    std::vector<char> consumed(slots.size(), 0);

    auto strides_of = [](const std::vector<IndexId> &idx) {
        std::unordered_map<IndexId, std::size_t> s;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            s[idx[k]] = std::size_t{1} << (idx.size() - 1 - k);
        }
        return s;
    };

    // Builds the kernel for out[R] = sum_S A * B, R and S listed with their
    // most significant index first.
    auto build = [&](std::uint32_t a, std::uint32_t b,
                     const std::vector<IndexId> &a_idx,
                     const std::vector<IndexId> &b_idx,
                     const std::vector<IndexId> &result,
                     const std::vector<IndexId> &summed) {
        Step s;
        s.a = a;
        s.b = b;
        const auto sa = strides_of(a_idx);
        const auto sb = strides_of(b_idx);
        auto stride = [](const std::unordered_map<IndexId, std::size_t> &m,
                         IndexId i) -> std::size_t {
            const auto it = m.find(i);
            return it == m.end() ? 0 : it->second;
        };
        std::vector<std::size_t> oa, ob, ua, ub;
        for (std::size_t k = result.size(); k-- > 0;) {
            oa.push_back(stride(sa, result[k]));
            ob.push_back(stride(sb, result[k]));
        }
        for (std::size_t k = summed.size(); k-- > 0;) {
            ua.push_back(stride(sa, summed[k]));
            ub.push_back(stride(sb, summed[k]));
        }
        s.out_a = make_table(oa);
        s.out_b = make_table(ob);
        s.sum_a = make_table(ua);
        s.sum_b = make_table(ub);
        s.out_size = std::size_t{1} << result.size();
        s.sum_size = std::size_t{1} << summed.size();
        return s;
    };

    for (const auto &step : plan.steps) {
        if (step.a >= slots.size() || step.b >= slots.size() ||
            step.a == step.b || consumed[step.a] || consumed[step.b]) {
            throw Mismatch("contraction plan references an invalid slot");
        }
        const auto &A = slots[step.a];
        const auto &B = slots[step.b];
        std::vector<IndexId> result, summed;
        auto classify = [&](IndexId i, std::size_t here) {
            if (is_open.count(i) || holders[i] > here) {
                result.push_back(i);
            } else {
                summed.push_back(i);
            }
        };
        for (const auto i : A) {
            const bool shared = std::find(B.begin(), B.end(), i) != B.end();
            classify(i, shared ? 2 : 1);
        }
        for (const auto i : B) {
            if (std::find(A.begin(), A.end(), i) == A.end()) {
                classify(i, 1);
            }
        }
        steps_.push_back(build(step.a, step.b, A, B, result, summed));
        for (const auto i : A) {
            --holders[i];
        }
        for (const auto i : B) {
            --holders[i];
        }
        for (const auto i : result) {
            ++holders[i];
        }
        consumed[step.a] = consumed[step.b] = 1;
        slots.push_back(std::move(result));
        consumed.push_back(0);
    }

    if (!slots.empty()) {
        final_indices_ = slots.back();
    }
    if (final_indices_ != open_) {
        std::vector<IndexId> summed;
        for (const auto i : final_indices_) {
            if (!is_open.count(i)) {
                summed.push_back(i);
            }
        }
        finish_ = build(0, 0, final_indices_, {}, open_, summed);
        needs_finish_ = true;
    }
}

namespace {

template <class Step>
void run_kernel(const Step &s, const Complex *A, const Complex *B,
                Complex *out) {
    const auto *a = reinterpret_cast<const double *>(A);
    const auto *b = reinterpret_cast<const double *>(B);
    const std::size_t out_lo = s.out_a.low.size();
    const std::size_t out_hi = s.out_a.high.size();
    const std::size_t sum_lo = s.sum_a.low.size();
    const std::size_t sum_hi = s.sum_a.high.size();
    const std::size_t *oal = s.out_a.low.data();
    const std::size_t *obl = s.out_b.low.data();
    const std::size_t *sal = s.sum_a.low.data();
    const std::size_t *sbl = s.sum_b.low.data();
    std::size_t o = 0;
    for (std::size_t h = 0; h < out_hi; ++h) {
        const std::size_t ah = s.out_a.high[h];
        const std::size_t bh = s.out_b.high[h];
        for (std::size_t l = 0; l < out_lo; ++l) {
            const std::size_t a0 = ah + oal[l];
            const std::size_t b0 = bh + obl[l];
            double re = 0.0;
            double im = 0.0;
            for (std::size_t sh = 0; sh < sum_hi; ++sh) {
                const std::size_t a1 = a0 + s.sum_a.high[sh];
                const std::size_t b1 = b0 + s.sum_b.high[sh];
                for (std::size_t sl = 0; sl < sum_lo; ++sl) {
                    const std::size_t ia = 2 * (a1 + sal[sl]);
                    const std::size_t ib = 2 * (b1 + sbl[sl]);
                    const double ar = a[ia], ai = a[ia + 1];
                    const double br = b[ib], bi = b[ib + 1];
                    re += ar * br - ai * bi;
                    im += ar * bi + ai * br;
                }
            }
            out[o++] = Complex{re, im};
        }
    }
}

} // namespace

Tensor CompiledContraction::run(std::span<const std::vector<Complex>> values,
                                ContractStats *stats) const {
    if (values.size() != input_sizes_.size()) {
        throw Mismatch("expected " + std::to_string(input_sizes_.size()) +
                       " tensors, got " + std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != input_sizes_[i]) {
            throw Mismatch("tensor " + std::to_string(i) +
                           " has the wrong number of entries");
        }
    }
    if (values.empty()) {
        return Tensor::scalar(Complex{1.0, 0.0});
    }

    const std::size_t n = values.size();
    std::vector<std::vector<Complex>> owned(steps_.size());
    auto data_of = [&](std::uint32_t slot) -> const std::vector<Complex> & {
        return slot < n ? values[slot] : owned[slot - n];
    };
    double multiplies = 0.0;
    for (std::size_t k = 0; k < steps_.size(); ++k) {
        const Step &s = steps_[k];
        owned[k].resize(s.out_size);
        run_kernel(s, data_of(s.a).data(), data_of(s.b).data(),
                   owned[k].data());
        multiplies += static_cast<double>(s.out_size * s.sum_size);
        if (s.a >= n) {
            std::vector<Complex>().swap(owned[s.a - n]);
        }
        if (s.b >= n) {
            std::vector<Complex>().swap(owned[s.b - n]);
        }
    }

    const std::vector<Complex> &last =
        steps_.empty() ? values[0] : owned.back();
    std::vector<Complex> result;
    if (needs_finish_) {
        const Complex one{1.0, 0.0};
        result.resize(finish_.out_size);
        run_kernel(finish_, last.data(), &one, result.data());
        multiplies += static_cast<double>(finish_.out_size * finish_.sum_size);
    } else {
        result = last;
    }
    if (stats != nullptr) {
        stats->multiplies += multiplies;
    }
    return Tensor(open_, std::move(result));
}

Tensor contract(const TensorNetwork &net, const ContractionPlan &plan,
                ContractStats *stats) {
    std::vector<std::vector<IndexId>> wiring;
    std::vector<std::vector<Complex>> values;
    wiring.reserve(net.size());
    values.reserve(net.size());
    for (const auto &t : net.tensors()) {
        wiring.push_back(t.indices);
        values.push_back(t.data);
    }
    const CompiledContraction compiled(wiring, net.open_indices(), plan);
    return compiled.run(values, stats);
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

nlohmann::json plan_to_json(const ContractionPlan &plan) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &s : plan.steps) {
        steps.push_back({s.a, s.b});
    }
    return {{"num_tensors", plan.num_tensors},
            {"steps", steps},
            {"est_flops", plan.est_flops},
            {"est_max_intermediate_rank", plan.est_max_intermediate_rank},
            {"structure_hash", hex64(plan.structure_hash)}};
}

ContractionPlan plan_from_json(const nlohmann::json &doc) {
    ContractionPlan plan;
    try {
        plan.num_tensors = doc.at("num_tensors").get<std::size_t>();
        for (const auto &s : doc.at("steps")) {
            plan.steps.push_back(
                {s.at(0).get<std::uint32_t>(), s.at(1).get<std::uint32_t>()});
        }
        plan.est_flops = doc.at("est_flops").get<double>();
        plan.est_max_intermediate_rank =
            doc.at("est_max_intermediate_rank").get<int>();
        plan.structure_hash = std::stoull(
            doc.at("structure_hash").get<std::string>(), nullptr, 16);
    } catch (const std::exception &e) {
        throw Mismatch(std::string("malformed contraction plan: ") + e.what());
    }
    return plan;
}

} // namespace qlc
