#include "perclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "perclab/error.hpp"
#include "perclab/killed_operator.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace {

void require_supported(const Graph& g, const Domain& domain, const MassVector& phi) {
  if (phi.size() != g.vertex_count()) throw PreconditionError("function size does not match graph");
  if (!phi.supported_in(domain)) throw PreconditionError("function is not supported on the domain");
}

struct ComponentSpectrum {
  double rho_sq = 0.0;
  double low = 0.0;
  double high = 0.0;
  long iterations = 0;
};

// Top eigenvalue of P_C^2 for a connected killed operator.
ComponentSpectrum component_rho_sq(const KilledOperator& op, const LambdaOptions& options) {
  const std::size_t n = op.size();
  if (n == 1) return {};

  // Two-colour the component; P_C^2 preserves colour classes on bipartite components.
  std::vector<int> colour(n, -1);
  std::vector<std::size_t> queue{0};
  colour[0] = 0;
  bool bipartite = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t i = queue[head];
    for (std::size_t j : op.neighbors(i)) {
      if (colour[j] < 0) {
        colour[j] = 1 - colour[i];
        queue.push_back(j);
      } else if (colour[j] == colour[i]) {
        bipartite = false;
      }
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (!bipartite || colour[i] == 0) active.push_back(i);
  }

  CounterEngine engine(options.seed);
  std::vector<double> x(n, 0.0);
  std::vector<double> half(n);
  std::vector<double> y(n);
  for (std::size_t i : active) x[i] = 0.5 + engine.uniform();

  ComponentSpectrum result;
  for (long it = 1; it <= options.max_iterations; ++it) {
    op.apply_function(x, half);
    op.apply_function(half, y);
    double low = std::numeric_limits<double>::infinity();
    double high = 0.0;
    double num = 0.0;
    double den = 0.0;
    double peak = 0.0;
    for (std::size_t i : active) {
      const double ratio = y[i] / x[i];
      low = std::min(low, ratio);
      high = std::max(high, ratio);
      num += op.pi(i) * y[i] * x[i];
      den += op.pi(i) * x[i] * x[i];
      peak = std::max(peak, y[i]);
    }
    result.low = low;
    result.high = high;
    result.iterations = it;
    if (high - low <= options.rel_tol * high) {
      result.rho_sq = std::clamp(num / den, low, high);
      return result;
    }
    for (std::size_t i : active) x[i] = y[i] / peak;
  }
  throw ConvergenceError("lambda_A power iteration did not converge within " +
                             std::to_string(options.max_iterations) + " iterations (rho^2 in [" +
                             std::to_string(result.low) + ", " + std::to_string(result.high) + "])",
                         1.0 - result.high, 1.0 - result.low, result.iterations);
}

}  // namespace

double dirichlet_form(const Graph& g, const Domain& domain, const MassVector& phi) {
  require_supported(g, domain, phi);
  const KilledOperator op(g, domain);
  const auto local = op.gather(phi);
  std::vector<double> once(op.size());
  std::vector<double> twice(op.size());
  op.apply_function(local, once);
  op.apply_function(once, twice);
  double form = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i) form += op.pi(i) * (local[i] - twice[i]) * local[i];
  return form;
}

LambdaResult lambda_a(const Graph& g, const Domain& domain, const LambdaOptions& options) {
  if (domain.empty()) throw PreconditionError("lambda_A needs a nonempty domain");
  LambdaResult result;
  for (const auto& component : components(g, domain)) {
    if (edge_boundary(g, component) == 0) {
      // Nothing is killed, P_C is stochastic and rho = 1 exactly.
      result.rho_sq = result.rho_sq_low = result.rho_sq_high = 1.0;
      continue;
    }
    const auto spectrum = component_rho_sq(KilledOperator(g, component), options);
    result.iterations += spectrum.iterations;
    if (spectrum.rho_sq >= result.rho_sq) {
      result.rho_sq = spectrum.rho_sq;
      result.rho_sq_low = spectrum.low;
      result.rho_sq_high = spectrum.high;
    }
  }
  result.value = std::clamp(1.0 - result.rho_sq, 0.0, 1.0);
  return result;
}

double rayleigh_quotient(const Graph& g, const Domain& domain, const MassVector& phi) {
  require_supported(g, domain, phi);
  if (!phi.is_nonnegative()) throw PreconditionError("rayleigh quotient needs a nonnegative function");
  if (phi.is_zero()) throw PreconditionError("rayleigh quotient of the zero function");
  return dirichlet_form(g, domain, phi) / norm2_pi_sq(g, phi);
}

double boundary_ratio(const Graph& g, const Domain& domain) {
  if (domain.empty()) throw PreconditionError("boundary ratio of an empty set");
  return static_cast<double>(edge_boundary(g, domain)) / pi_mass(g, domain);
}

}  // namespace perclab
