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
#include <functional>

namespace qlc {

/// Number of worker threads used when a caller passes 0. Honors the
/// QLC_THREADS environment variable, otherwise the hardware concurrency.
unsigned default_thread_count();

/// Runs fn(i) for every i in [0, count) on up to `threads` workers. Work is
/// claimed dynamically, so fn must write its result to a slot keyed by i;
/// any reduction happens afterwards in index order. The first exception
/// thrown by fn is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)> &fn);

} // namespace qlc
