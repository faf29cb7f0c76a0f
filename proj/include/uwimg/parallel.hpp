#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace uwimg {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items
// must be independent; callers keep results ordered by writing into
// preallocated slots, so the thread count never changes the output.
// The first exception thrown by any item is rethrown after joining.
inline void parallel_for(int64_t count, int threads,
                         const std::function<void(int64_t)>& fn) {
  if (count <= 0) return;
  const int workers = int(std::min<int64_t>(std::max(threads, 1), count));
  if (workers <= 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int64_t i = next.fetch_add(1);
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
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace uwimg
