#include "perclab/percolation.hpp"

#include <cmath>

#include "perclab/error.hpp"
#include "perclab/union_find.hpp"

namespace perclab {

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("retention probability must lie in [0, 1]");
}

PercConfig sample(const Graph& g, double p, std::uint64_t seed) {
  require_probability(p);
  std::vector<std::uint8_t> open(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) open[e] = edge_open(seed, e, p) ? 1 : 0;
  auto cfg = configuration_from_open_edges(g, std::move(open), p);
  cfg.seed = seed;
  return cfg;
}

PercConfig configuration_from_open_edges(const Graph& g, std::vector<std::uint8_t> open_edges, double p) {
  if (open_edges.size() != g.edge_count()) throw PreconditionError("open-edge bitmap size does not match graph");
  PercConfig cfg;
  cfg.p = p;
  cfg.open_edges = std::move(open_edges);

  UnionFind uf(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (cfg.open_edges[e] != 0) uf.unite(g.edge(e).u, g.edge(e).v);
  }

  // Dense labels in order of first appearance.
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> root_label(g.vertex_count(), kUnset);
  cfg.cluster_labels.resize(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto root = uf.find(v);
    if (root_label[root] == kUnset) {
      root_label[root] = static_cast<std::uint32_t>(cfg.cluster_sizes.size());
      cfg.cluster_sizes.push_back(0);
    }
    cfg.cluster_labels[v] = root_label[root];
    ++cfg.cluster_sizes[root_label[root]];
  }

  // Second pass: an edge touches one cluster, or two when it is closed between clusters.
  cfg.cluster_edge_counts.assign(cfg.cluster_sizes.size(), 0);
  for (const auto& edge : g.edges()) {
    const auto a = cfg.cluster_labels[edge.u];
    const auto b = cfg.cluster_labels[edge.v];
    ++cfg.cluster_edge_counts[a];
    if (b != a) ++cfg.cluster_edge_counts[b];
  }
  return cfg;
}

bool two_ghost_event(const Graph& g, const PercConfig& cfg, EdgeId e, std::size_t n) {
  if (e >= g.edge_count()) throw PreconditionError("edge id out of range");
  if (cfg.is_open(e)) return false;
  const auto a = cfg.label(g.edge(e).u);
  const auto b = cfg.label(g.edge(e).v);
  return a != b && cfg.cluster_edge_counts[a] >= n && cfg.cluster_edge_counts[b] >= n;
}

}  // namespace perclab
