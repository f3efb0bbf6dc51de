// Copyright 2026 The qcx Authors
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace qcx {

/// Evaluates fn(i) for i in [0, count) on up to `workers` threads and returns
/// the results in index order. Each task must be a pure function of its index.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t count, int workers, Fn&& fn) {
  std::vector<std::optional<R>> slots(count);
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i].emplace(fn(i));
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            slots[i].emplace(fn(i));
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Like parallel_map, but stops after the first index (in index order) whose
/// result satisfies `stop`. Work is issued in waves of `workers` tasks, so the
/// returned prefix is the same for every worker count.
template <typename R, typename Fn, typename Stop>
std::vector<R> parallel_map_until(std::size_t count, int workers, Fn&& fn, Stop&& stop) {
  std::vector<R> out;
  const std::size_t wave = static_cast<std::size_t>(std::max(1, workers));
  for (std::size_t begin = 0; begin < count; begin += wave) {
    const std::size_t len = std::min(wave, count - begin);
    auto chunk = parallel_map<R>(len, workers, [&](std::size_t i) { return fn(begin + i); });
    for (auto& r : chunk) {
      const bool done = stop(r);
      out.push_back(std::move(r));
      if (done) return out;
    }
  }
  return out;
}

}  // namespace qcx
