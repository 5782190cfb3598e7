// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace czwarp {

/// Runs body(i) for i in [0, n) on up to `workers` threads, each owning one
/// contiguous index block. Results must be written to per-index slots; any
/// reduction happens afterwards in index order. If several blocks throw, the
/// exception from the lowest block is rethrown, which is the one a serial
/// loop would have raised first.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t blocks = std::min<std::size_t>(workers, n);
  std::vector<std::exception_ptr> failures(blocks);
  {
    std::vector<std::jthread> pool;
    pool.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      pool.emplace_back([&, b] {
        const std::size_t lo = n * b / blocks;
        const std::size_t hi = n * (b + 1) / blocks;
        try {
          for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
          failures[b] = std::current_exception();
        }
      });
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace czwarp
