//
// Copyright 2026 The FriendlyCore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FRIENDLYCORE_PARALLEL_H_
#define FRIENDLYCORE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace friendlycore {

// Worker count for ParallelFor. Defaults to the hardware concurrency.
// Results never depend on this value.
void SetNumThreads(int num_threads);
int NumThreads();

// Invokes fn(begin, end) on disjoint contiguous chunks covering [0, n),
// possibly concurrently. Returns after every chunk has finished.
void ParallelFor(size_t n, const std::function<void(size_t, size_t)>& fn);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_PARALLEL_H_
