#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/mass_vector.hpp"

namespace perclab {

// Whether an operation that quotes an infinite-graph quantity checks that the finite
// stand-in is large enough around the vertices involved.
enum class Validity { enforce, ignore };

// mu P for the simple random walk, P(u, v) = 1/deg(u) for neighbours.
MassVector step(const Graph& g, const MassVector& mu);
// mu P_A; mass leaving A is killed.
MassVector killed_step(const Graph& g, const Domain& domain, const MassVector& mu);
// mu P^k and mu P_A^k.
MassVector evolve(const Graph& g, MassVector mu, int steps);
MassVector killed_evolve(const Graph& g, const Domain& domain, const MassVector& mu, int steps);
// P_A^k phi (function action).
MassVector killed_apply(const Graph& g, const Domain& domain, const MassVector& phi, int steps = 1);

// Exact p_n(v, v). With Validity::enforce, requires ceil(n/2) + 1 <= interior_radius(v).
double return_probability(const Graph& g, Vertex v, int n, Validity validity = Validity::enforce);
// p_0(v, v) .. p_{n_max}(v, v) from one evolution.
std::vector<double> return_probabilities(const Graph& g, Vertex v, int n_max,
                                         Validity validity = Validity::enforce);

struct ReversibilityResult {
  double lhs = 0.0;  // <mu P_A^t, nu>_{1/pi}
  double rhs = 0.0;  // <mu, nu P_A^t>_{1/pi}
  double residual = 0.0;
  bool pass = false;
};
ReversibilityResult reversibility_check(const Graph& g, const Domain& domain, const MassVector& mu,
                                        const MassVector& nu, int t, double rel_tol = 1e-10);

enum class StartMeasure { uniform_on_domain, pi_on_domain };

// Pr(X_k in D) for the unkilled walk started from mu_D or pi_D. With Validity::enforce,
// requires k <= interior_radius(v) for every v in D.
double escape_probability(const Graph& g, const Domain& domain, int k, StartMeasure start,
                          Validity validity = Validity::enforce);
std::vector<double> escape_probabilities(const Graph& g, const Domain& domain, int k_max,
                                         StartMeasure start, Validity validity = Validity::enforce);

struct WalkPath {
  std::vector<Vertex> vertices;
  std::uint64_t seed = 0;
};
WalkPath sample_walk(const Graph& g, Vertex start, int steps, std::uint64_t seed);

bool is_bipartite(const Graph& g);

// Exploratory fit of -log p_n = a + b log n + c n^gamma over a gamma grid in (0, 1]. The
// log term absorbs the polynomial prefactor of the heat kernel, which otherwise drags gamma
// down at small n. Not an estimator with guarantees; the grid and the window are configuration.
struct HkFitOptions {
  int grid_points = 100;  // gamma = j / grid_points, j = 1..grid_points
  bool with_intercept = true;
  bool log_correction = true;
  // Only n >= window_fraction * (largest n) enter the fit.
  double window_fraction = 1.0 / 3.0;
};

struct HkFit {
  double gamma = 0.0;
  double c = 0.0;
  double intercept = 0.0;
  double log_coefficient = 0.0;
  double sse = 0.0;
  // Competing power-law model -log p_n = a + b log n.
  double polynomial_exponent = 0.0;
  double polynomial_sse = 0.0;
  // gamma above the grid's lower edge, c > 0, and at least half of the power-law
  // residual explained by the n^gamma term.
  bool stretched_exponential = false;
  std::vector<int> steps_used;
};

HkFit hk_fit_sequence(std::span<const int> steps, std::span<const double> probabilities,
                      const HkFitOptions& options = {});
// Uses even n only on bipartite graphs.
HkFit hk_fit(const Graph& g, Vertex v, int n_max, const HkFitOptions& options = {});

// CSV with header "n,p_n,log_p_n"; row n holds p_n = probabilities[n].
void write_return_csv(std::ostream& out, std::span<const double> probabilities);

}  // namespace perclab
