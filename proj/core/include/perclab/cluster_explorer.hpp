#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "perclab/graph.hpp"

namespace perclab {

struct ExploreLimits {
  std::size_t max_vertices = std::numeric_limits<std::size_t>::max();
  std::size_t max_edges = std::numeric_limits<std::size_t>::max();
  // Stop as soon as every listed vertex has joined the cluster.
  std::span<const Vertex> stop_when_found{};
};

struct ClusterSummary {
  std::size_t vertices = 0;
  std::size_t edges = 0;  // distinct edges touching the explored part of K
  // Exploration stopped at a limit; the counts are then lower bounds.
  bool truncated = false;
  bool found_all_targets = false;
};

// Breadth-first exploration of a single open cluster, drawing edge states lazily from the
// counter-based stream. Agrees with sample() on the same (p, seed). Reusable across samples
// without clearing thanks to generation stamps; not thread-safe, use one per thread.
class ClusterExplorer {
 public:
  explicit ClusterExplorer(const Graph& g);

  ClusterSummary explore(Vertex root, double p, std::uint64_t seed, const ExploreLimits& limits = {});

  // Membership in the most recent exploration.
  bool visited(Vertex v) const noexcept { return vertex_stamp_[v] == generation_; }
  std::span<const Vertex> members() const noexcept { return queue_; }

 private:
  const Graph* graph_;
  std::uint32_t generation_ = 0;
  std::vector<std::uint32_t> vertex_stamp_;
  std::vector<std::uint32_t> edge_stamp_;
  std::vector<std::uint32_t> target_stamp_;
  std::vector<Vertex> queue_;
};

}  // namespace perclab
