#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gtacb {

inline int resolve_jobs(int jobs, std::int64_t work_items) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  if (work_items < jobs) jobs = static_cast<int>(work_items);
  return jobs < 1 ? 1 : jobs;
}

// Runs fn(index, worker) for every index in [0, count) on up to `jobs`
// workers pulling from a shared queue. fn must only write worker-local or
// index-local state; the first exception thrown is re-raised on the caller.
inline void parallel_for(std::int64_t count, int jobs,
                         const std::function<void(std::int64_t, int)>& fn) {
  jobs = resolve_jobs(jobs, count);
  if (count <= 0) return;
  if (jobs == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gtacb
