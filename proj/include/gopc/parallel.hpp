#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace gopc {

/// Worker count from GOPC_THREADS (0 or unset = hardware concurrency).
inline unsigned thread_count() {
  unsigned requested = 0;
  if (const char* env = std::getenv("GOPC_THREADS")) {
    try {
      requested = static_cast<unsigned>(std::stoul(env));
    } catch (...) {
      requested = 0;
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/// Calls fn(i) for i in [begin, end) over contiguous blocks. fn must only
/// write state owned by index i.
template <typename Fn>
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, Fn&& fn,
                  std::ptrdiff_t min_block = 64) {
  const std::ptrdiff_t count = end - begin;
  if (count <= 0) return;
  const auto workers = static_cast<std::ptrdiff_t>(
      std::min<std::ptrdiff_t>(thread_count(), (count + min_block - 1) / min_block));
  if (workers <= 1) {
    for (std::ptrdiff_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::ptrdiff_t block = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    const std::ptrdiff_t lo = begin + w * block;
    const std::ptrdiff_t hi = std::min(end, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::ptrdiff_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

}  // namespace gopc
