#include "perclab/mass_vector.hpp"

#include <algorithm>
#include <cmath>

#include "perclab/error.hpp"

namespace perclab {

namespace {

void require_size(const Graph& g, const MassVector& x) {
  if (x.size() != g.vertex_count()) {
    throw PreconditionError("mass vector has " + std::to_string(x.size()) + " entries, graph has " +
                            std::to_string(g.vertex_count()) + " vertices");
  }
}

}  // namespace

MassVector MassVector::delta(std::size_t vertex_count, Vertex v) {
  if (v >= vertex_count) throw PreconditionError("delta at out-of-range vertex");
  MassVector m(vertex_count);
  m[v] = 1.0;
  return m;
}

MassVector MassVector::uniform_on(const Graph& g, const Domain& domain) {
  if (domain.empty()) throw PreconditionError("uniform measure on an empty domain");
  MassVector m(g.vertex_count());
  const double w = 1.0 / static_cast<double>(domain.size());
  for (Vertex v : domain.members()) m[v] = w;
  return m;
}

MassVector MassVector::pi_on(const Graph& g, const Domain& domain) {
  if (domain.empty()) throw PreconditionError("stationary measure on an empty domain");
  MassVector m(g.vertex_count());
  const double total = pi_mass(g, domain);
  for (Vertex v : domain.members()) m[v] = g.pi(v) / total;
  return m;
}

MassVector MassVector::indicator(const Graph& g, const Domain& domain) {
  MassVector m(g.vertex_count());
  for (Vertex v : domain.members()) m[v] = 1.0;
  return m;
}

double MassVector::total() const noexcept {
  double sum = 0.0;
  for (double x : values_) sum += x;
  return sum;
}

double MassVector::mass_on(const Domain& domain) const noexcept {
  double sum = 0.0;
  for (Vertex v : domain.members()) sum += values_[v];
  return sum;
}

bool MassVector::is_nonnegative() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
}

bool MassVector::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

bool MassVector::supported_in(const Domain& domain) const noexcept {
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (values_[v] != 0.0 && !domain.contains(static_cast<Vertex>(v))) return false;
  }
  return true;
}

MassVector& MassVector::operator*=(double factor) noexcept {
  for (double& x : values_) x *= factor;
  return *this;
}

double inner_pi(const Graph& g, const MassVector& phi, const MassVector& psi) {
  require_size(g, phi);
  require_size(g, psi);
  double sum = 0.0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) sum += g.pi(v) * phi[v] * psi[v];
  return sum;
}

double norm2_pi_sq(const Graph& g, const MassVector& phi) { return inner_pi(g, phi, phi); }

double norm1_pi(const Graph& g, const MassVector& phi) {
  require_size(g, phi);
  double sum = 0.0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) sum += g.pi(v) * std::abs(phi[v]);
  return sum;
}

double inner_inv_pi(const Graph& g, const MassVector& mu, const MassVector& nu) {
  require_size(g, mu);
  require_size(g, nu);
  double sum = 0.0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) sum += mu[v] * nu[v] / g.pi(v);
  return sum;
}

double norm2_inv_pi_sq(const Graph& g, const MassVector& mu) { return inner_inv_pi(g, mu, mu); }

}  // namespace perclab
