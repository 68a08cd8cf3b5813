#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "perclab/rng.hpp"

namespace perclab {

struct SamplingOptions {
  std::size_t n_samples = 10'000;
  std::uint64_t seed = 0;
  // Samples are split into `replicas` contiguous blocks, block r drawing its seeds from
  // replica_seed(seed, r). Results depend on (seed, replicas) only.
  unsigned replicas = 1;
  // Worker threads; 0 means hardware concurrency. Never affects results.
  unsigned threads = 0;
  // Interpreted by each check as documented there (two-sided for estimators, one-sided for
  // theorem assertions).
  double confidence = 0.99;
};

inline unsigned effective_threads(const SamplingOptions& options) {
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  return options.threads == 0 ? hw : options.threads;
}

// Seed of global sample `index`.
inline std::uint64_t sample_seed_for(const SamplingOptions& options, std::size_t index) {
  const std::size_t replicas = std::max(1U, options.replicas);
  const std::size_t n = options.n_samples;
  // Replica r owns [r n / R, (r + 1) n / R).
  std::size_t r = index * replicas / std::max<std::size_t>(n, 1);
  while (r > 0 && r * n / replicas > index) --r;
  while (r + 1 < replicas && (r + 1) * n / replicas <= index) ++r;
  const std::size_t start = r * n / replicas;
  return sample_seed(replica_seed(options.seed, r), index - start);
}

// Runs body(state, index, seed) for every sample index. Each thread owns one state built by
// make_state() and a contiguous index range. Bodies must write their result to per-index
// storage so that reductions can run afterwards in index order.
template <class MakeState, class Body>
void for_each_sample(const SamplingOptions& options, MakeState make_state, Body body) {
  const std::size_t n = options.n_samples;
  const std::size_t workers = std::min<std::size_t>(effective_threads(options), std::max<std::size_t>(n, 1));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto run = [&](std::size_t begin, std::size_t end) {
    try {
      auto state = make_state();
      for (std::size_t i = begin; i < end; ++i) body(state, i, sample_seed_for(options, i));
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (workers <= 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w * n / workers, (w + 1) * n / workers);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace perclab
