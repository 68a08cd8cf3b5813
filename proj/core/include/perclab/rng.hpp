#pragma once

#include <cstdint>

namespace perclab {

// Counter-based generator built on the SplitMix64 finalizer. Every draw is a pure
// function of (key, counter), so a percolation configuration can be sampled
// edge-by-edge in any order and still agree with a full sequential sweep.

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_draw(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGoldenGamma);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) noexcept {
  return to_unit(counter_draw(key, counter));
}

constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) noexcept {
  return master ^ (replica * kGoldenGamma);
}

// Seed of the i-th sample inside a replica stream. The key is scrambled first: replica keys
// differ by multiples of the Weyl increment, so unscrambled streams would overlap.
constexpr std::uint64_t sample_seed(std::uint64_t replica_key, std::uint64_t index) noexcept {
  return counter_draw(mix64(replica_key), index);
}

// Independent named sub-stream of a master seed (used to keep sample pools disjoint).
constexpr std::uint64_t substream(std::uint64_t master, std::uint64_t stream_id) noexcept {
  return mix64(master ^ mix64(stream_id + 0x5851F42D4C957F2DULL));
}

// Sequential engine over a counter stream; satisfies UniformRandomBitGenerator.
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  explicit constexpr CounterEngine(std::uint64_t key) noexcept : key_(key) {}
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  constexpr result_type operator()() noexcept { return counter_draw(key_, counter_++); }
  constexpr double uniform() noexcept { return to_unit((*this)()); }
  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace perclab
