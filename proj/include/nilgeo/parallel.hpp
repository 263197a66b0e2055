#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace nilgeo {

/** Maps 0 (auto) to the hardware thread count, clamping to at least 1. */
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/**
 * Splits [0, n) into fixed-size chunks and runs fn(chunk_index, begin, end)
 * across the given worker count.
 *
 * Chunk boundaries depend only on n, never on the worker count, so callers
 * that accumulate per-chunk results and merge them by chunk index produce
 * bit-identical output for every worker count.
 */
template <class Fn>
void parallel_chunks(std::size_t n, int workers, Fn&& fn) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  workers = resolve_workers(workers);
  if (workers == 1 || nchunks <= 1) {
    for (std::size_t ci = 0; ci < nchunks; ++ci)
      fn(ci, ci * kChunk, std::min(n, (ci + 1) * kChunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int nthreads = static_cast<int>(std::min<std::size_t>(workers, nchunks));
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t ci = next.fetch_add(1);
        if (ci >= nchunks) return;
        fn(ci, ci * kChunk, std::min(n, (ci + 1) * kChunk));
      }
    });
  }
  for (auto& th : pool) th.join();
}

/** Compensated (Kahan) accumulator; summation order still matters for bit-exactness. */
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace nilgeo
