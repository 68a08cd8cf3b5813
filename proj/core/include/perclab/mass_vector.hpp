#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "perclab/graph.hpp"

namespace perclab {

// Real-valued function or signed measure on the vertices of a graph. Whether a vector is
// read as a function phi or a measure mu is decided by the operation it is passed to; the
// pi-weighted norms below make the distinction explicit.
class MassVector {
 public:
  MassVector() = default;
  explicit MassVector(std::size_t vertex_count) : values_(vertex_count, 0.0) {}
  explicit MassVector(std::vector<double> values) : values_(std::move(values)) {}

  static MassVector delta(std::size_t vertex_count, Vertex v);
  // Uniform probability measure on D (mu_D).
  static MassVector uniform_on(const Graph& g, const Domain& domain);
  // Normalised stationary measure on D (pi_D).
  static MassVector pi_on(const Graph& g, const Domain& domain);
  // Indicator function of D.
  static MassVector indicator(const Graph& g, const Domain& domain);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t v) const noexcept { return values_[v]; }
  double& operator[](std::size_t v) noexcept { return values_[v]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double total() const noexcept;
  double mass_on(const Domain& domain) const noexcept;
  bool is_nonnegative() const noexcept;
  bool is_zero() const noexcept;
  bool supported_in(const Domain& domain) const noexcept;

  MassVector& operator*=(double factor) noexcept;

 private:
  std::vector<double> values_;
};

// <phi, psi>_pi = sum pi(v) phi(v) psi(v)
double inner_pi(const Graph& g, const MassVector& phi, const MassVector& psi);
// ||phi||_{2,pi}^2
double norm2_pi_sq(const Graph& g, const MassVector& phi);
// ||phi||_{1,pi} = sum pi(v) |phi(v)|
double norm1_pi(const Graph& g, const MassVector& phi);
// <mu, nu>_{1/pi} = sum mu(v) nu(v) / pi(v)
double inner_inv_pi(const Graph& g, const MassVector& mu, const MassVector& nu);
// ||mu||_{2,1/pi}^2
double norm2_inv_pi_sq(const Graph& g, const MassVector& mu);

}  // namespace perclab
