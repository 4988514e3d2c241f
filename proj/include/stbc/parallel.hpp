#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace stbc {

// Worker count: STBC_THREADS if set, else hardware concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("STBC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Splits [0, n) into `workers` contiguous chunks and calls body(begin, end, w)
// for chunk w. Chunk boundaries depend only on n and workers; callers reduce
// per-chunk results in chunk order, so output never depends on scheduling.
// The first exception thrown by any chunk is rethrown on the caller.
inline void parallel_chunks(std::size_t n, std::size_t workers,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    body(0, n, 0);
    return;
  }
  std::exception_ptr error;
  std::mutex m;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, begin, end, w] {
        try {
          body(begin, end, w);
        } catch (...) {
          std::lock_guard lock(m);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace stbc
