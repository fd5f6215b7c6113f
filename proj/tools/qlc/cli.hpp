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

#include <iosfwd>
#include <string>
#include <vector>

namespace qlc::cli {

/// Exit codes of the command-line tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_runtime = 2;

/// Runs one invocation; `args` excludes the program name. The primary
/// result goes to `out` (or the --out file), diagnostics and summaries to
/// `err`.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

/// 64-bit FNV-1a of `bytes` as 16 hex digits; identifies primary outputs in
/// run manifests.
std::string output_digest(const std::string &bytes);

} // namespace qlc::cli
