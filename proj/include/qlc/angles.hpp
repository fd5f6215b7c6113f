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
#include <span>
#include <vector>

#include <json.hpp>

namespace qlc {

/// The 2p angles of a depth-p circuit. Every angle is stored reduced into
/// [0, 2*pi).
class AngleSequence {
  public:
    AngleSequence() = default;
    /// Throws Error unless both lists have the same length p >= 1 and every
    /// entry is finite.
    AngleSequence(std::vector<double> gamma, std::vector<double> beta);

    /// From [gamma_1..gamma_p, beta_1..beta_p].
    static AngleSequence from_flat(std::span<const double> flat);

    std::size_t depth() const noexcept { return gamma_.size(); }
    const std::vector<double> &gamma() const noexcept { return gamma_; }
    const std::vector<double> &beta() const noexcept { return beta_; }
    std::vector<double> flat() const;

    friend bool operator==(const AngleSequence &,
                           const AngleSequence &) = default;
    friend bool operator<(const AngleSequence &a, const AngleSequence &b) {
        return a.flat() < b.flat();
    }

  private:
    std::vector<double> gamma_;
    std::vector<double> beta_;
};

double reduce_angle(double x);

/// `[[gamma...], [beta...]]`.
nlohmann::json angles_to_json(const AngleSequence &a);
AngleSequence angles_from_json(const nlohmann::json &doc);

/// `a` followed by its images under negating gamma, beta, and both. The
/// energy is invariant under negating both.
std::vector<AngleSequence> angle_symmetries(const AngleSequence &a);

} // namespace qlc
