#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "perclab/estimate.hpp"
#include "perclab/graph.hpp"
#include "perclab/monte_carlo.hpp"
#include "perclab/report.hpp"

namespace perclab {

// Estimators report two-sided intervals at options.confidence. Theorem checks read
// options.confidence as a one-sided level and use the matching two-sided interval.

// Pr(u and v in the same cluster).
Estimate tau_hat(const Graph& g, Vertex u, Vertex v, double p, const SamplingOptions& options);

struct KappaEstimate {
  // mean: smallest tau estimate; ci_low: its lower end; ci_high: smallest upper end.
  Estimate estimate;
  Vertex argmin = 0;
  std::vector<Vertex> targets;
  std::vector<Estimate> per_target;
};
// min over w with d(base, w) <= k of tau(base, w), from one pool of explorations.
KappaEstimate kappa_hat(const Graph& g, Vertex base, double p, int k, const SamplingOptions& options);

// tau ci_high >= p^{d(u,v)}.
CheckReport insertion_tolerance_check(const Graph& g, Vertex u, Vertex v, double p, const Estimate& tau);

enum class ClusterMeasure { edges, vertices };

// Pr(|E(K_v)| >= n) (or |K_v| >= n) for each n, from one pool.
std::vector<Estimate> cluster_tail_hat(const Graph& g, Vertex v, double p, std::span<const std::size_t> ns,
                                       const SamplingOptions& options,
                                       ClusterMeasure measure = ClusterMeasure::edges);
Estimate cluster_tail_hat(const Graph& g, Vertex v, double p, std::size_t n, const SamplingOptions& options,
                          ClusterMeasure measure = ClusterMeasure::edges);

// 82 d ((1 - p) / (p n))^{1/2}.
double two_ghost_bound(double degree, double p, double n);
// Edge between representative() and its first neighbour.
EdgeId representative_edge(const Graph& g);
// Pr of the two-ghost event at edge e.
Estimate two_ghost_hat(const Graph& g, EdgeId e, double p, std::size_t n, const SamplingOptions& options);
// Asserts the one-sided lower confidence end of Pr(S_{e,n}) is at most the bound.
CheckReport two_ghost_check(const Graph& g, double p, std::size_t n, const SamplingOptions& options);

// [sum_{i<k} p^-i][P_p(n)^2 - kappa_p(k)] <= sup_e Pr(S_{e,n}), three independent pools.
// details.rescaled carries P_p(n)^2 - kappa_p(k) <= [sum_{i<k} p^-i] sup_e Pr(S_{e,n}) from the same pools.
CheckReport surgery_check(const Graph& g, double p, std::size_t n, int k, const SamplingOptions& options);

// Deterministic transport F(u, v) = 1(d(u, v) = r): mass sent equals mass received.
CheckReport mtp_sphere_check(const Graph& g, int r);
// Per-configuration identity sum_rho P_rho(X_k in K_rho) = sum_rho Pr_{mu_{K_rho}}(X_k in K_rho),
// the two sides computed by different exact evolutions. options.n_samples configurations.
CheckReport mtp_percolation_check(const Graph& g, double p, int k, const SamplingOptions& options,
                                  double tolerance = 1e-10);

// Minimum over y = log x > 0 of y^beta + c1 k y^-alpha: closed form against a grid search.
CheckReport kappapk_optimum_check(double alpha, double beta, double c1, double k, double grid_step = 1e-4,
                                  double grid_max = 50.0);

// E_p[P_rho(X_k in K_rho)] <= ratio^{1/2} (1 + E_p exp[log^beta |K_rho|]) exp[-c2 k^{beta/(alpha+beta)}]
// with user-supplied c2; the report is conditional.
CheckReport kappapk_bound_check(const Graph& g, double p, int k, double beta, double alpha, double c2,
                                const SamplingOptions& options);

struct BootstrapResult {
  Estimate estimate;
  // Estimates over the first quarter, half and all of the samples.
  std::vector<Estimate> prefixes;
  bool stable = false;
  std::optional<double> implied_c6;
  CheckReport report;
};
// E_p exp[log^beta |K_v|] with a t-interval. Given C5, also the C6 implied by E <= C5 (1 + E)^{1/2}.
BootstrapResult bootstrap_functional(const Graph& g, Vertex v, double p, double beta, const SamplingOptions& options,
                                     std::optional<double> c5 = std::nullopt);
// Largest E with E <= C5 (1 + E)^{1/2}.
double bootstrap_c6(double c5);

}  // namespace perclab
