#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "gempart/rng.hpp"

namespace gempart {

inline constexpr long kReplicateBlock = 1L << 14;

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs `replicates` Monte Carlo replicates in fixed-size blocks. Block b
/// draws from Rng::stream(seed, job, b) and fills its own accumulator;
/// accumulators are merged in block order, so the result does not depend
/// on the thread count or schedule.
///   fn(Rng&, long count, Acc&)     Acc::merge(const Acc&)
template <class Acc, class Fn>
Acc run_blocks(std::uint64_t seed, std::uint64_t job, long replicates, int threads, const Acc& zero, Fn fn) {
  const long blocks = (replicates + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<Acc> partial(static_cast<std::size_t>(blocks), zero);
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const long b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        Rng rng = Rng::stream(seed, job, static_cast<std::uint64_t>(b));
        const long count = std::min(kReplicateBlock, replicates - b * kReplicateBlock);
        fn(rng, count, partial[static_cast<std::size_t>(b)]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
      }
    }
  };

  const int t = std::min<long>(resolve_threads(threads), std::max(1L, blocks));
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Acc total = zero;
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// Integer histogram accumulator.
struct Counts {
  std::vector<long> bins;
  long censored = 0;

  explicit Counts(std::size_t size = 0) : bins(size, 0) {}
  void merge(const Counts& o) {
    if (bins.size() < o.bins.size()) bins.resize(o.bins.size(), 0);
    for (std::size_t i = 0; i < o.bins.size(); ++i) bins[i] += o.bins[i];
    censored += o.censored;
  }
  long total() const {
    long s = 0;
    for (long b : bins) s += b;
    return s;
  }
};

}  // namespace gempart
