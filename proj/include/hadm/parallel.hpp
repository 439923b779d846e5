#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hadm {

/// Worker count: explicit request, else $HADM_THREADS, else hardware.
inline unsigned resolve_threads(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HADM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(task) for task in [0, tasks) on up to `threads` workers.
/// Tasks are handed out in increasing order; the first exception is rethrown.
inline void parallel_for(std::size_t tasks, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), tasks));
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr err;
  auto worker = [&] {
    while (true) {
      std::size_t t;
      {
        std::lock_guard lock(mu);
        if (err || next == tasks) return;
        t = next++;
      }
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace hadm
