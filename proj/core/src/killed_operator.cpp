#include "perclab/killed_operator.hpp"

#include <algorithm>

namespace perclab {

KilledOperator::KilledOperator(const Graph& g, const Domain& domain)
    : vertices_(domain.members().begin(), domain.members().end()) {
  degree_.reserve(vertices_.size());
  offsets_.reserve(vertices_.size() + 1);
  offsets_.push_back(0);
  for (Vertex v : vertices_) {
    g.require_vertex(v);
    degree_.push_back(g.pi(v));
    for (Vertex w : g.neighbors(v)) {
      if (const auto j = local(w)) adjacency_.push_back(*j);
    }
    offsets_.push_back(adjacency_.size());
  }
}

std::optional<std::size_t> KilledOperator::local(Vertex v) const noexcept {
  const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

void KilledOperator::apply_measure(std::span<const double> in, std::span<double> out) const noexcept {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    if (in[i] == 0.0) continue;
    const double share = in[i] / degree_[i];
    for (std::size_t j : neighbors(i)) out[j] += share;
  }
}

void KilledOperator::apply_function(std::span<const double> in, std::span<double> out) const noexcept {
  for (std::size_t i = 0; i < size(); ++i) {
    double sum = 0.0;
    for (std::size_t j : neighbors(i)) sum += in[j];
    out[i] = sum / degree_[i];
  }
}

std::vector<double> KilledOperator::gather(const MassVector& x) const {
  std::vector<double> local_values(size());
  for (std::size_t i = 0; i < size(); ++i) local_values[i] = x[vertices_[i]];
  return local_values;
}

MassVector KilledOperator::scatter(std::span<const double> local_values, std::size_t vertex_count) const {
  MassVector x(vertex_count);
  for (std::size_t i = 0; i < size(); ++i) x[vertices_[i]] = local_values[i];
  return x;
}

}  // namespace perclab
