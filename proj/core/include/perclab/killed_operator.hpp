#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/mass_vector.hpp"

namespace perclab {

// The substochastic matrix P_A(u, v) = P(u, v) 1(u, v in A) stored over a dense local
// index of A. Degrees are those of the ambient graph, so mass stepping out of A is lost.
class KilledOperator {
 public:
  KilledOperator(const Graph& g, const Domain& domain);

  std::size_t size() const noexcept { return vertices_.size(); }
  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  Vertex global(std::size_t local) const noexcept { return vertices_[local]; }
  std::optional<std::size_t> local(Vertex v) const noexcept;
  double pi(std::size_t local) const noexcept { return degree_[local]; }
  std::span<const std::size_t> neighbors(std::size_t local) const noexcept {
    return {adjacency_.data() + offsets_[local], adjacency_.data() + offsets_[local + 1]};
  }

  // out = in P_A (row vector / measure action).
  void apply_measure(std::span<const double> in, std::span<double> out) const noexcept;
  // out = P_A in (column vector / function action).
  void apply_function(std::span<const double> in, std::span<double> out) const noexcept;

  std::vector<double> gather(const MassVector& x) const;
  MassVector scatter(std::span<const double> local_values, std::size_t vertex_count) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<double> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adjacency_;
};

}  // namespace perclab
