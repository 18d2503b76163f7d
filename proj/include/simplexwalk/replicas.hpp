#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace simplexwalk {

/// Worker threads for replica loops: $WORKER_COUNT if set and positive,
/// otherwise the hardware concurrency.
inline unsigned worker_count()
{
  if (const char* env = std::getenv("WORKER_COUNT")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return unsigned(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Run fn(i) for i in [0, reps) and return the results in index order.
///
/// Work is striped across threads; results land in their replica slot, so
/// any fold over the returned vector is independent of the thread count.
template <typename Fn>
auto map_replicas(std::uint64_t reps, Fn&& fn) -> std::vector<decltype(fn(std::uint64_t{}))>
{
  using Result = decltype(fn(std::uint64_t{}));
  std::vector<Result> out(reps);
  const unsigned workers = unsigned(std::min<std::uint64_t>(worker_count(), reps == 0 ? 1 : reps));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < reps; ++i) out[i] = fn(i);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t i = w; i < reps; i += workers) out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace simplexwalk
