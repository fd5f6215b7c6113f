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
#include "qlc/angles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qlc/error.hpp"

namespace qlc {

double reduce_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(x, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    return r >= two_pi ? 0.0 : r;
}

AngleSequence::AngleSequence(std::vector<double> gamma,
                             std::vector<double> beta)
    : gamma_(std::move(gamma)), beta_(std::move(beta)) {
    if (gamma_.empty() || gamma_.size() != beta_.size()) {
        throw Error("angle sequence needs p >= 1 gammas and as many betas");
    }
    for (auto *list : {&gamma_, &beta_}) {
        for (auto &x : *list) {
            if (!std::isfinite(x)) {
                throw Error("angles must be finite");
            }
            x = reduce_angle(x);
        }
    }
}

AngleSequence AngleSequence::from_flat(std::span<const double> flat) {
    if (flat.size() % 2 != 0) {
        throw Error("flat angle vector must have even length");
    }
    const std::size_t p = flat.size() / 2;
    return AngleSequence({flat.begin(), flat.begin() + static_cast<long>(p)},
                         {flat.begin() + static_cast<long>(p), flat.end()});
}

std::vector<double> AngleSequence::flat() const {
    std::vector<double> out(gamma_);
    out.insert(out.end(), beta_.begin(), beta_.end());
    return out;
}

nlohmann::json angles_to_json(const AngleSequence &a) {
    return nlohmann::json::array({a.gamma(), a.beta()});
}

AngleSequence angles_from_json(const nlohmann::json &doc) {
    if (!doc.is_array() || doc.size() != 2 || !doc[0].is_array() ||
        !doc[1].is_array()) {
        throw Error("angles must be [[gamma_1..gamma_p],[beta_1..beta_p]]");
    }
    try {
        return AngleSequence(doc[0].get<std::vector<double>>(),
                             doc[1].get<std::vector<double>>());
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("angles must be numbers: ") + e.what());
    }
}

std::vector<AngleSequence> angle_symmetries(const AngleSequence &a) {
    auto negate = [](std::vector<double> v) {
        for (auto &x : v) {
            x = -x;
        }
        return v;
    };
    return {a, AngleSequence(negate(a.gamma()), a.beta()),
            AngleSequence(a.gamma(), negate(a.beta())),
            AngleSequence(negate(a.gamma()), negate(a.beta()))};
}

} // namespace qlc
