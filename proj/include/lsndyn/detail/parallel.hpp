#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace lsndyn::detail {

// Runs fn(chunk) for every chunk in [0, chunks). Chunks are claimed from a
// shared counter, so callers must make each chunk's output independent of
// which thread ran it; any reduction happens afterwards in chunk order.
template <typename Fn>
void for_each_chunk(std::size_t chunks, Fn&& fn, std::size_t min_parallel = 2) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, chunks);
  if (workers <= 1 || chunks < min_parallel) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) fn(c);
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
}

// Half-open [begin, end) bounds of chunk c when n items are split into
// `chunks` near-equal contiguous pieces.
inline std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t n, std::size_t chunks,
                                                        std::size_t c) {
  return {n * c / chunks, n * (c + 1) / chunks};
}

}  // namespace lsndyn::detail
