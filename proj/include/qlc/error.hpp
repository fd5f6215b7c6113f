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
#include <stdexcept>
#include <string>

namespace qlc {

/// Base class for every error raised by the library. The CLI maps these to
/// exit code 2; usage errors are reported separately by the CLI itself.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input while reading a graph file. `position` is a 1-based line
/// number for text formats and a 0-based byte offset for graph6 payloads.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t position)
        : Error(what + " (at " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// A graph (or edge list) violating the simple-graph invariants.
class InvalidGraph : public Error {
  public:
    using Error::Error;
};

/// Parameters that admit no solution, e.g. a d-regular graph with n*d odd.
class Infeasible : public Error {
  public:
    using Error::Error;
};

/// A configured resource limit (qubits, indices, graph size) was exceeded.
class LimitExceeded : public Error {
  public:
    using Error::Error;
};

/// A contraction plan would allocate an intermediate above the rank cap.
class RankCapExceeded : public LimitExceeded {
  public:
    RankCapExceeded(const std::string &what, int rank, int cap)
        : LimitExceeded(what), rank_(rank), cap_(cap) {}

    int rank() const noexcept { return rank_; }
    int cap() const noexcept { return cap_; }

  private:
    int rank_;
    int cap_;
};

/// Inputs that are individually valid but inconsistent with each other
/// (depth mismatch, plan/network mismatch, stale cache).
class Mismatch : public Error {
  public:
    using Error::Error;
};

} // namespace qlc
