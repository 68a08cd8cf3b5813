#pragma once

#include <cstdint>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/rng.hpp"

namespace perclab {

// Edge e is open iff U_e < p with U_e = counter_uniform(seed, e). One uniform per edge
// couples all p monotonically; p = 0 closes and p = 1 opens every edge.
inline bool edge_open(std::uint64_t seed, EdgeId e, double p) noexcept {
  return counter_uniform(seed, e) < p;
}

void require_probability(double p);

// One bond-percolation configuration with dense cluster labels 0..cluster_count-1.
struct PercConfig {
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> open_edges;
  std::vector<std::uint32_t> cluster_labels;
  std::vector<std::size_t> cluster_sizes;
  // |E(K)|: edges with at least one endpoint in K, each counted once.
  std::vector<std::size_t> cluster_edge_counts;

  std::size_t cluster_count() const noexcept { return cluster_sizes.size(); }
  bool is_open(EdgeId e) const noexcept { return open_edges[e] != 0; }
  std::uint32_t label(Vertex v) const noexcept { return cluster_labels[v]; }
};

PercConfig sample(const Graph& g, double p, std::uint64_t seed);
// Builds a configuration from an explicit open-edge bitmap (seed recorded as 0).
PercConfig configuration_from_open_edges(const Graph& g, std::vector<std::uint8_t> open_edges, double p = 0.0);

// e closed, endpoints in distinct clusters, each touching at least n edges. On a finite
// graph every cluster is finite.
bool two_ghost_event(const Graph& g, const PercConfig& cfg, EdgeId e, std::size_t n);

}  // namespace perclab
