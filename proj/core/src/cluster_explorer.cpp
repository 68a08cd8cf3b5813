#include "perclab/cluster_explorer.hpp"

#include <algorithm>

#include "perclab/percolation.hpp"

namespace perclab {

ClusterExplorer::ClusterExplorer(const Graph& g)
    : graph_(&g), vertex_stamp_(g.vertex_count(), 0), edge_stamp_(g.edge_count(), 0), target_stamp_(g.vertex_count(), 0) {}

ClusterSummary ClusterExplorer::explore(Vertex root, double p, std::uint64_t seed, const ExploreLimits& limits) {
  graph_->require_vertex(root);
  if (++generation_ == 0) {
    std::fill(vertex_stamp_.begin(), vertex_stamp_.end(), 0);
    std::fill(edge_stamp_.begin(), edge_stamp_.end(), 0);
    std::fill(target_stamp_.begin(), target_stamp_.end(), 0);
    generation_ = 1;
  }
  ClusterSummary summary;
  std::size_t targets_left = 0;
  for (Vertex t : limits.stop_when_found) {
    graph_->require_vertex(t);
    if (target_stamp_[t] != generation_ && t != root) ++targets_left;
    target_stamp_[t] = generation_;
  }
  const bool has_targets = !limits.stop_when_found.empty();
  queue_.clear();
  queue_.push_back(root);
  vertex_stamp_[root] = generation_;
  summary.vertices = 1;
  const auto reached = [&] { return summary.vertices >= limits.max_vertices || summary.edges >= limits.max_edges; };
  if (has_targets && targets_left == 0) {
    summary.found_all_targets = true;
    summary.truncated = true;
    return summary;
  }
  if (reached()) {
    summary.truncated = true;
    return summary;
  }
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const Vertex u = queue_[head];
    const auto nbrs = graph_->neighbors(u);
    const auto ids = graph_->incident_edges(u);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const EdgeId e = ids[j];
      if (edge_stamp_[e] == generation_) continue;
      edge_stamp_[e] = generation_;
      ++summary.edges;
      const Vertex w = nbrs[j];
      if (vertex_stamp_[w] != generation_ && edge_open(seed, e, p)) {
        vertex_stamp_[w] = generation_;
        queue_.push_back(w);
        ++summary.vertices;
        if (target_stamp_[w] == generation_ && --targets_left == 0) {
          summary.found_all_targets = true;
          summary.truncated = true;
          return summary;
        }
      }
      if (reached()) {
        summary.truncated = true;
        return summary;
      }
    }
  }
  return summary;
}

}  // namespace perclab
