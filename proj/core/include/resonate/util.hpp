#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace resonate {

// Worker cap: RESONATE_THREADS if set, else hardware concurrency.
inline int worker_count(int jobs) {
  int cap = 0;
  if (const char* env = std::getenv("RESONATE_THREADS")) cap = std::atoi(env);
  if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap <= 0) cap = 1;
  return std::min(cap, jobs);
}

// Runs fn(0..jobs-1) on a small pool; rethrows the first exception.
inline void parallel_for(int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 0) return;
  const int workers = worker_count(jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// fixed %.12g rendering so reports are byte-stable
inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace resonate
