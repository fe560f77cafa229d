// Copyright 2026 The multitest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MULTITEST_PARALLEL_HPP_
#define MULTITEST_PARALLEL_HPP_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace multitest {

// Resolves a requested worker count; 0 means one per hardware thread.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Number of chunks parallel_chunks will use for n items.
inline int chunk_count(std::int64_t n, int workers) {
  return static_cast<int>(std::clamp<std::int64_t>(
      resolve_workers(workers), 1, std::max<std::int64_t>(n, 1)));
}

// Splits [0, n) into contiguous chunks and calls body(begin, end, chunk)
// for each on its own thread. Callers accumulate per chunk and reduce in
// chunk order, so results do not depend on scheduling. The first exception
// thrown by any chunk is rethrown after all threads join.
template <typename Body>
void parallel_chunks(std::int64_t n, int workers, Body&& body) {
  workers = chunk_count(n, workers);
  if (workers == 1) {
    body(std::int64_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::int64_t per = n / workers;
  const std::int64_t extra = n % workers;
  std::int64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t end = begin + per + (w < extra ? 1 : 0);
    threads.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace multitest

#endif  // MULTITEST_PARALLEL_HPP_
