/* Copyright 2026 The OWPL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef OWPL_PARALLEL_H_
#define OWPL_PARALLEL_H_

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace owpl {

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over contiguous chunks of [0, n). Each output element
// must be owned by exactly one index so results are independent of the thread
// count; reductions are the caller's job and must stay ordered.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  std::size_t want = static_cast<std::size_t>(threads);
  if (n == 0) return;
  if (want <= 1 || n < 2 * want) {
    fn(std::size_t{0}, n);
    return;
  }
  std::size_t chunk = (n + want - 1) / want;
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(want);
  for (std::size_t t = 0; t < want; ++t) {
    std::size_t begin = t * chunk;
    if (begin >= n) break;
    std::size_t end = std::min(n, begin + chunk);
    workers.emplace_back([&, t, begin, end]() {
      try {
        fn(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace owpl

#endif  // OWPL_PARALLEL_H_
