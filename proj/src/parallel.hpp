#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace adfcm::detail {

// Records are processed in fixed-size chunks. The chunking depends only on the
// record count, so per-chunk partial results combined in chunk order are
// bit-identical for any thread count.
inline constexpr std::size_t kChunkSize = 1024;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }

template <typename Fn>
void for_each_chunk(std::size_t n, std::size_t threads, Fn&& fn) {
  const std::size_t chunks = chunk_count(n);
  const auto run = [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunkSize;
    fn(chunk, begin, std::min(n, begin + kChunkSize));
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(chunks, 1));
  if (threads == 1) {
    for (std::size_t chunk = 0; chunk < chunks; ++chunk) run(chunk);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t chunk = t; chunk < chunks; chunk += threads) run(chunk);
    });
  }
}

}  // namespace adfcm::detail
