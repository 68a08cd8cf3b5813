#pragma once

#include <cstdint>

#include "perclab/graph.hpp"
#include "perclab/mass_vector.hpp"

namespace perclab {

// E_A(phi) = <(I_A - P_A^2) phi, phi>_pi. phi must vanish outside A.
double dirichlet_form(const Graph& g, const Domain& domain, const MassVector& phi);

struct LambdaOptions {
  double rel_tol = 1e-10;
  long max_iterations = 100'000;
  std::uint64_t seed = 0x5EED;
};

struct LambdaResult {
  // lambda(A) = 1 - rho(P_A)^2, the smallest eigenvalue of I_A - P_A^2.
  double value = 1.0;
  double rho_sq = 0.0;
  // Collatz-Wielandt bracket on rho(P_A)^2 from the last iterate.
  double rho_sq_low = 0.0;
  double rho_sq_high = 0.0;
  long iterations = 0;
};

// Power iteration on P_C^2 for every connected component C of A. On bipartite components
// the iteration runs on one colour class, where P_C^2 is primitive, so the Collatz-Wielandt
// bracket closes. Throws ConvergenceError (carrying the bracket) past max_iterations.
LambdaResult lambda_a(const Graph& g, const Domain& domain, const LambdaOptions& options = {});

// E_A(phi) / ||phi||_{2,pi}^2 for nonnegative, nonzero phi supported on A.
double rayleigh_quotient(const Graph& g, const Domain& domain, const MassVector& phi);

// |boundary edges of A| / pi(A), i.e. (1/pi(A)) sum_{a in A, b notin A} pi(a) P(a, b).
double boundary_ratio(const Graph& g, const Domain& domain);

}  // namespace perclab
