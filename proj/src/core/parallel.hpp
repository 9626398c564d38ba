/*
 * Copyright 2026 The prid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRID_CORE_PARALLEL_HPP_
#define PRID_CORE_PARALLEL_HPP_

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace prid {

/// Runs fn(i) for i in [0, count) over `threads` workers. Results must be
/// written to per-index slots so the output is identical to the serial
/// order regardless of thread count.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::mutex error_mutex;
  std::exception_ptr error;
  int n_workers = std::min(threads, count);
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (int i = w; i < count; i += n_workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace prid

#endif  // PRID_CORE_PARALLEL_HPP_
