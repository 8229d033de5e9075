#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "wald/rng.hpp"

namespace wald {

/// Default thread budget: available hardware parallelism, at least 1.
inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs fn(batch_index) for every batch on up to `threads` workers. The first
/// exception thrown by any batch is rethrown after all workers stop.
template <class Fn>
void for_each_batch(std::size_t n_batches, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_batches)));
  if (threads <= 1) {
    for (std::size_t b = 0; b < n_batches; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_batches) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_batches);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Fills n values in fixed-size batches. Batch b owns the stream (seed, b) and
/// the slice [b * batch_size, ...), so the output does not depend on the
/// thread count or on the order in which batches finish.
///
/// `fill(rng, out)` must write every element of `out`.
template <class Fill>
std::vector<double> fill_batched(std::size_t n, std::size_t batch_size, std::uint64_t seed,
                                 unsigned threads, Fill&& fill) {
  batch_size = std::max<std::size_t>(1, batch_size);
  std::vector<double> out(n);
  const std::size_t n_batches = (n + batch_size - 1) / batch_size;
  for_each_batch(n_batches, threads, [&](std::size_t b) {
    const std::size_t begin = b * batch_size;
    const std::size_t len = std::min(batch_size, n - begin);
    Rng rng(seed, b);
    fill(rng, std::span<double>(out.data() + begin, len));
  });
  return out;
}

inline constexpr std::size_t kDefaultBatchSize = 1 << 16;

}  // namespace wald
