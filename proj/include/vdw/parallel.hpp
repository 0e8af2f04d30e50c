#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vdw {

inline unsigned worker_count(std::int64_t tasks) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::clamp<std::int64_t>(tasks, 1, hw));
}

/// Runs fn(i) for i in [0, tasks) on a small pool. fn must only write state
/// owned by task i; the first exception thrown is rethrown to the caller.
template <typename Fn>
void parallel_for(std::int64_t tasks, Fn&& fn) {
  const unsigned workers = worker_count(tasks);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < tasks; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace vdw
