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

#include "friendlycore/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace friendlycore {
namespace {

int DefaultThreads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

thread_local bool inside_parallel_region = false;

std::atomic<int>& ThreadSetting() {
  static std::atomic<int> setting{DefaultThreads()};
  return setting;
}

}  // namespace

void SetNumThreads(int num_threads) {
  ThreadSetting().store(std::max(1, num_threads));
}

int NumThreads() { return ThreadSetting().load(); }

void ParallelFor(size_t n, const std::function<void(size_t, size_t)>& fn) {
  if (n == 0) return;
  const size_t workers = std::min<size_t>(static_cast<size_t>(NumThreads()), n);
  // Nested regions run inline on the calling worker.
  if (workers <= 1 || inside_parallel_region) {
    fn(0, n);
    return;
  }
  const size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t begin = 0; begin < n; begin += chunk) {
    const size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&fn, begin, end] {
      inside_parallel_region = true;
      fn(begin, end);
    });
  }
  for (std::thread& t : threads) t.join();
}

}  // namespace friendlycore
