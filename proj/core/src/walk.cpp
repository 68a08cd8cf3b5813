#include "perclab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "perclab/error.hpp"
#include "perclab/killed_operator.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace {

void require_size(const Graph& g, const MassVector& x) {
  if (x.size() != g.vertex_count()) throw PreconditionError("mass vector size does not match graph");
}

void require_steps(int steps) {
  if (steps < 0) throw PreconditionError("step count must be nonnegative");
}

}  // namespace

MassVector step(const Graph& g, const MassVector& mu) {
  require_size(g, mu);
  MassVector out(g.vertex_count());
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (mu[u] == 0.0) continue;
    const double share = mu[u] / g.pi(u);
    for (Vertex w : g.neighbors(u)) out[w] += share;
  }
  return out;
}

MassVector killed_step(const Graph& g, const Domain& domain, const MassVector& mu) {
  return killed_evolve(g, domain, mu, 1);
}

MassVector evolve(const Graph& g, MassVector mu, int steps) {
  require_steps(steps);
  for (int i = 0; i < steps; ++i) mu = step(g, mu);
  return mu;
}

MassVector killed_evolve(const Graph& g, const Domain& domain, const MassVector& mu, int steps) {
  require_size(g, mu);
  require_steps(steps);
  const KilledOperator op(g, domain);
  std::vector<double> current = op.gather(mu);
  std::vector<double> next(current.size());
  for (int i = 0; i < steps; ++i) {
    op.apply_measure(current, next);
    current.swap(next);
  }
  // steps == 0 yields mu I_A.
  return op.scatter(current, g.vertex_count());
}

MassVector killed_apply(const Graph& g, const Domain& domain, const MassVector& phi, int steps) {
  require_size(g, phi);
  require_steps(steps);
  const KilledOperator op(g, domain);
  std::vector<double> current = op.gather(phi);
  std::vector<double> next(current.size());
  for (int i = 0; i < steps; ++i) {
    op.apply_function(current, next);
    current.swap(next);
  }
  return op.scatter(current, g.vertex_count());
}

std::vector<double> return_probabilities(const Graph& g, Vertex v, int n_max, Validity validity) {
  g.require_vertex(v);
  require_steps(n_max);
  const int radius = (n_max + 1) / 2;
  if (validity == Validity::enforce) {
    const int interior = g.interior_radius(v);
    if (interior != kUnboundedRadius && radius + 1 > interior) {
      throw ValidityError("return probability at n=" + std::to_string(n_max) + " needs interior radius " +
                          std::to_string(radius + 1) + " around vertex " + std::to_string(v) + ", " +
                          g.describe() + " provides " + std::to_string(interior));
    }
  }
  // A walk that leaves ball(v, ceil(n/2)) cannot return to v within n steps, so killing it at
  // the ball boundary leaves p_n(v, v) unchanged.
  const KilledOperator op(g, ball(g, v, radius));
  const std::size_t origin = *op.local(v);
  std::vector<double> current(op.size(), 0.0);
  std::vector<double> next(op.size());
  current[origin] = 1.0;
  std::vector<double> result{1.0};
  result.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max; ++n) {
    op.apply_measure(current, next);
    current.swap(next);
    result.push_back(current[origin]);
  }
  return result;
}

double return_probability(const Graph& g, Vertex v, int n, Validity validity) {
  return return_probabilities(g, v, n, validity).back();
}

ReversibilityResult reversibility_check(const Graph& g, const Domain& domain, const MassVector& mu,
                                        const MassVector& nu, int t, double rel_tol) {
  require_steps(t);
  ReversibilityResult r;
  r.lhs = inner_inv_pi(g, killed_evolve(g, domain, mu, t), nu);
  r.rhs = inner_inv_pi(g, mu, killed_evolve(g, domain, nu, t));
  r.residual = std::abs(r.lhs - r.rhs);
  const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), std::numeric_limits<double>::min()});
  r.pass = r.residual <= rel_tol * scale || r.residual == 0.0;
  return r;
}

std::vector<double> escape_probabilities(const Graph& g, const Domain& domain, int k_max,
                                         StartMeasure start, Validity validity) {
  if (domain.empty()) throw PreconditionError("escape probability needs a nonempty domain");
  require_steps(k_max);
  if (validity == Validity::enforce) {
    for (Vertex v : domain.members()) {
      const int interior = g.interior_radius(v);
      if (interior != kUnboundedRadius && k_max > interior) {
        throw ValidityError("escape probability at k=" + std::to_string(k_max) + " leaves the interior of " +
                            g.describe() + " around vertex " + std::to_string(v) + " (radius " +
                            std::to_string(interior) + ")");
      }
    }
  }
  const MassVector mu = start == StartMeasure::uniform_on_domain ? MassVector::uniform_on(g, domain)
                                                                 : MassVector::pi_on(g, domain);
  // k steps from D stay inside ball(D, k), so no mass is killed.
  const KilledOperator op(g, ball(g, domain, k_max));
  std::vector<double> current = op.gather(mu);
  std::vector<double> next(op.size());
  std::vector<std::size_t> targets;
  for (Vertex v : domain.members()) targets.push_back(*op.local(v));
  const auto mass_in_domain = [&] {
    double sum = 0.0;
    for (std::size_t i : targets) sum += current[i];
    return sum;
  };
  std::vector<double> result{mass_in_domain()};
  for (int k = 1; k <= k_max; ++k) {
    op.apply_measure(current, next);
    current.swap(next);
    result.push_back(mass_in_domain());
  }
  return result;
}

double escape_probability(const Graph& g, const Domain& domain, int k, StartMeasure start,
                          Validity validity) {
  return escape_probabilities(g, domain, k, start, validity).back();
}

WalkPath sample_walk(const Graph& g, Vertex start, int steps, std::uint64_t seed) {
  g.require_vertex(start);
  require_steps(steps);
  WalkPath path{{start}, seed};
  path.vertices.reserve(static_cast<std::size_t>(steps) + 1);
  CounterEngine engine(seed);
  Vertex current = start;
  for (int i = 0; i < steps; ++i) {
    const auto nbrs = g.neighbors(current);
    // Multiply-shift on the top 32 bits maps a draw onto [0, deg).
    const auto pick = static_cast<std::size_t>(((engine() >> 32) * nbrs.size()) >> 32);
    current = nbrs[pick];
    path.vertices.push_back(current);
  }
  return path;
}

bool is_bipartite(const Graph& g) {
  const auto dist = bfs_distances(g, Vertex{0});
  for (const auto& e : g.edges()) {
    if ((dist[e.u] - dist[e.v]) % 2 == 0) return false;
  }
  return true;
}

namespace {

struct LinearFit {
  double intercept = 0.0;
  double log_coefficient = 0.0;
  double slope = 0.0;
  double sse = 0.0;
};

// Least squares y ~ intercept + log_coefficient * z + slope * x. Columns that are switched
// off are held at zero; a singular design leaves the remaining coefficients at zero.
LinearFit least_squares(std::span<const double> x, std::span<const double> z, std::span<const double> y,
                        bool with_intercept, bool with_z) {
  const auto n = static_cast<double>(x.size());
  const auto mean = [&](std::span<const double> v) {
    if (!with_intercept) return 0.0;
    double s = 0.0;
    for (double e : v) s += e;
    return s / n;
  };
  const double mx = mean(x);
  const double mz = with_z ? mean(z) : 0.0;
  const double my = mean(y);
  double sxx = 0.0, szz = 0.0, sxz = 0.0, sxy = 0.0, szy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dz = with_z ? z[i] - mz : 0.0;
    const double dy = y[i] - my;
    sxx += dx * dx;
    szz += dz * dz;
    sxz += dx * dz;
    sxy += dx * dy;
    szy += dz * dy;
  }
  LinearFit fit;
  if (with_z) {
    const double det = sxx * szz - sxz * sxz;
    if (det > 1e-12 * sxx * szz) {
      fit.slope = (szz * sxy - sxz * szy) / det;
      fit.log_coefficient = (sxx * szy - sxz * sxy) / det;
    }
  } else if (sxx > 0.0) {
    fit.slope = sxy / sxx;
  }
  fit.intercept = my - fit.slope * mx - fit.log_coefficient * mz;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double zi = with_z ? z[i] : 0.0;
    const double r = y[i] - fit.intercept - fit.slope * x[i] - fit.log_coefficient * zi;
    fit.sse += r * r;
  }
  return fit;
}

}  // namespace

HkFit hk_fit_sequence(std::span<const int> steps, std::span<const double> probabilities,
                      const HkFitOptions& options) {
  if (steps.size() != probabilities.size()) throw PreconditionError("hk_fit: length mismatch");
  if (options.grid_points < 2) throw PreconditionError("hk_fit: gamma grid needs at least 2 points");
  int largest = 0;
  for (int n : steps) largest = std::max(largest, n);
  const double cutoff = options.window_fraction * largest;
  std::vector<double> ns;
  std::vector<double> logs;
  std::vector<double> ys;
  HkFit fit;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] >= 1 && steps[i] >= cutoff && probabilities[i] > 0.0) {
      ns.push_back(static_cast<double>(steps[i]));
      logs.push_back(std::log(static_cast<double>(steps[i])));
      ys.push_back(-std::log(probabilities[i]));
      fit.steps_used.push_back(steps[i]);
    }
  }
  if (ns.size() < 4) throw PreconditionError("hk_fit needs at least 4 usable n values");

  std::vector<double> xs(ns.size());
  fit.sse = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= options.grid_points; ++j) {
    const double gamma = static_cast<double>(j) / options.grid_points;
    for (std::size_t i = 0; i < ns.size(); ++i) xs[i] = std::pow(ns[i], gamma);
    const auto lf = least_squares(xs, logs, ys, options.with_intercept, options.log_correction);
    if (lf.sse < fit.sse) {
      fit.sse = lf.sse;
      fit.gamma = gamma;
      fit.c = lf.slope;
      fit.intercept = lf.intercept;
      fit.log_coefficient = lf.log_coefficient;
    }
  }

  const auto poly = least_squares(logs, logs, ys, true, false);
  fit.polynomial_exponent = poly.slope;
  fit.polynomial_sse = poly.sse;
  const double lowest = 1.0 / options.grid_points;
  fit.stretched_exponential = fit.gamma > lowest && fit.c > 0.0 && fit.sse < 0.5 * fit.polynomial_sse;
  return fit;
}

HkFit hk_fit(const Graph& g, Vertex v, int n_max, const HkFitOptions& options) {
  const auto p = return_probabilities(g, v, n_max);
  const bool even_only = is_bipartite(g);
  std::vector<int> steps;
  std::vector<double> values;
  for (int n = 1; n <= n_max; ++n) {
    if (even_only && n % 2 != 0) continue;
    steps.push_back(n);
    values.push_back(p[static_cast<std::size_t>(n)]);
  }
  return hk_fit_sequence(steps, values, options);
}

void write_return_csv(std::ostream& out, std::span<const double> probabilities) {
  out << "n,p_n,log_p_n\n";
  for (std::size_t n = 0; n < probabilities.size(); ++n) {
    const double p = probabilities[n];
    out << n << ',' << std::setprecision(17) << p << ',';
    if (p > 0.0) {
      out << std::setprecision(17) << std::log(p);
    } else {
      out << "-inf";
    }
    out << '\n';
  }
}

}  // namespace perclab
