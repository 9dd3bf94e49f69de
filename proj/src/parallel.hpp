#pragma once

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace scatterkit::detail {

// Thread budget: an explicit request wins; otherwise SCATTERKIT_THREADS
// (0 or unset means one thread per core).
inline int resolve_thread_count(int requested) {
  long value = 0;
  if (requested > 0) {
    value = requested;
  } else if (const char* env = std::getenv("SCATTERKIT_THREADS")) {
    value = std::strtol(env, nullptr, 10);
  }
  if (value <= 0) value = static_cast<long>(std::thread::hardware_concurrency());
  if (value <= 0) value = 1;
  return static_cast<int>(value);
}

// Runs fn(0..count-1) across up to `threads` workers. Results must be written
// to preallocated, per-index slots so the output is identical to a serial run.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
  threads = std::min<long>(threads, static_cast<long>(count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace scatterkit::detail
