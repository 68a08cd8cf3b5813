#include "perclab/perc_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perclab/cluster_explorer.hpp"
#include "perclab/error.hpp"
#include "perclab/mass_vector.hpp"
#include "perclab/percolation.hpp"
#include "perclab/walk.hpp"

namespace perclab {

namespace {

constexpr std::size_t kMinSamples = 30;

void require_samples(const SamplingOptions& options, std::size_t minimum = 1) {
  if (options.n_samples < minimum) {
    throw PreconditionError("need at least " + std::to_string(minimum) + " samples, got " +
                            std::to_string(options.n_samples));
  }
}

double two_sided(const SamplingOptions& options) { return two_sided_for_one_sided(options.confidence); }

std::string sampling_tag(const SamplingOptions& options) {
  return "|seed=" + std::to_string(options.seed) + "|n_samples=" + std::to_string(options.n_samples) +
         "|replicas=" + std::to_string(options.replicas);
}

std::uint64_t count_ones(const std::vector<std::uint8_t>& flags) {
  std::uint64_t total = 0;
  for (auto f : flags) total += f;
  return total;
}

// Row delta_v P^k of the unkilled walk.
MassVector walk_row(const Graph& g, Vertex v, int k) {
  return evolve(g, MassVector::delta(g.vertex_count(), v), k);
}

void require_transitive_standin(const Graph& g, const char* check) {
  if (!g.stands_in_for_transitive()) {
    throw PreconditionError(std::string(check) + " needs a vertex-transitive family; " + g.describe() +
                            " is not one");
  }
}

}  // namespace

Estimate tau_hat(const Graph& g, Vertex u, Vertex v, double p, const SamplingOptions& options) {
  g.require_vertex(u);
  g.require_vertex(v);
  require_probability(p);
  require_samples(options);
  if (u == v) return proportion_estimate(options.n_samples, options.n_samples, options.confidence);
  std::vector<std::uint8_t> hit(options.n_samples, 0);
  const Vertex target[] = {v};
  for_each_sample(
      options, [&] { return ClusterExplorer(g); },
      [&](ClusterExplorer& ex, std::size_t i, std::uint64_t seed) {
        ExploreLimits limits;
        limits.stop_when_found = target;
        hit[i] = ex.explore(u, p, seed, limits).found_all_targets ? 1 : 0;
      });
  return proportion_estimate(count_ones(hit), options.n_samples, options.confidence);
}

KappaEstimate kappa_hat(const Graph& g, Vertex base, double p, int k, const SamplingOptions& options) {
  g.require_vertex(base);
  require_probability(p);
  require_samples(options);
  if (k < 0) throw PreconditionError("kappa needs k >= 0");
  KappaEstimate result;
  const auto neighbourhood = ball(g, base, k);
  result.targets.assign(neighbourhood.members().begin(), neighbourhood.members().end());
  const std::size_t t = result.targets.size();
  std::vector<std::uint8_t> hits(options.n_samples * t, 0);
  for_each_sample(
      options, [&] { return ClusterExplorer(g); },
      [&](ClusterExplorer& ex, std::size_t i, std::uint64_t seed) {
        ExploreLimits limits;
        limits.stop_when_found = result.targets;
        ex.explore(base, p, seed, limits);
        for (std::size_t j = 0; j < t; ++j) hits[i * t + j] = ex.visited(result.targets[j]) ? 1 : 0;
      });
  std::vector<std::uint64_t> counts(t, 0);
  for (std::size_t i = 0; i < options.n_samples; ++i) {
    for (std::size_t j = 0; j < t; ++j) counts[j] += hits[i * t + j];
  }
  double min_high = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t j = 0; j < t; ++j) {
    result.per_target.push_back(proportion_estimate(counts[j], options.n_samples, options.confidence));
    if (result.per_target[j].mean < result.per_target[best].mean) best = j;
    min_high = std::min(min_high, result.per_target[j].ci_high);
  }
  result.argmin = result.targets[best];
  result.estimate = result.per_target[best];
  result.estimate.ci_high = std::max(min_high, result.estimate.mean);
  return result;
}

CheckReport insertion_tolerance_check(const Graph& g, Vertex u, Vertex v, double p, const Estimate& tau) {
  require_probability(p);
  if (tau.n_samples == 0) throw PreconditionError("insertion tolerance check needs a tau estimate with samples");
  const int d = graph_distance(g, u, v);
  CheckReport r;
  r.check = "insertion_tolerance";
  r.lhs = tau.ci_high;
  r.rhs = std::pow(p, d);
  r.pass = r.lhs >= r.rhs;
  r.inputs_digest = digest(g.describe() + "|" + std::to_string(u) + "," + std::to_string(v) + "|p=" +
                           format_double(p) + "|tau=" + format_double(tau.mean));
  r.details = {{"distance", d}, {"tau", to_json(tau)}};
  return r;
}

std::vector<Estimate> cluster_tail_hat(const Graph& g, Vertex v, double p, std::span<const std::size_t> ns,
                                       const SamplingOptions& options, ClusterMeasure measure) {
  g.require_vertex(v);
  require_probability(p);
  require_samples(options);
  if (ns.empty()) throw PreconditionError("cluster_tail_hat needs at least one n");
  for (auto n : ns) {
    if (n < 1) throw PreconditionError("cluster_tail_hat needs n >= 1");
  }
  const std::size_t cap = *std::max_element(ns.begin(), ns.end());
  std::vector<std::size_t> sizes(options.n_samples, 0);
  for_each_sample(
      options, [&] { return ClusterExplorer(g); },
      [&](ClusterExplorer& ex, std::size_t i, std::uint64_t seed) {
        ExploreLimits limits;
        if (measure == ClusterMeasure::edges) {
          limits.max_edges = cap;
        } else {
          limits.max_vertices = cap;
        }
        const auto s = ex.explore(v, p, seed, limits);
        sizes[i] = measure == ClusterMeasure::edges ? s.edges : s.vertices;
      });
  std::vector<Estimate> out;
  for (auto n : ns) {
    const auto count = static_cast<std::uint64_t>(
        std::count_if(sizes.begin(), sizes.end(), [n](std::size_t s) { return s >= n; }));
    out.push_back(proportion_estimate(count, options.n_samples, options.confidence));
  }
  return out;
}

Estimate cluster_tail_hat(const Graph& g, Vertex v, double p, std::size_t n, const SamplingOptions& options,
                          ClusterMeasure measure) {
  const std::size_t ns[] = {n};
  return cluster_tail_hat(g, v, p, ns, options, measure).front();
}

double two_ghost_bound(double degree, double p, double n) {
  if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("two-ghost bound needs p in (0, 1]");
  if (!(n > 0.0) || !(degree > 0.0)) throw PreconditionError("two-ghost bound needs n > 0 and d > 0");
  return 82.0 * degree * std::sqrt((1.0 - p) / (p * n));
}

EdgeId representative_edge(const Graph& g) {
  return g.incident_edges(g.representative()).front();
}

Estimate two_ghost_hat(const Graph& g, EdgeId e, double p, std::size_t n, const SamplingOptions& options) {
  require_probability(p);
  require_samples(options);
  if (e >= g.edge_count()) throw PreconditionError("edge id out of range");
  const Vertex a = g.edge(e).u;
  const Vertex b = g.edge(e).v;
  const Vertex other[] = {b};
  std::vector<std::uint8_t> hit(options.n_samples, 0);
  for_each_sample(
      options, [&] { return ClusterExplorer(g); },
      [&](ClusterExplorer& ex, std::size_t i, std::uint64_t seed) {
        if (edge_open(seed, e, p)) return;
        // K_a in full (stopping early if it contains b), then K_b up to n edges.
        ExploreLimits first;
        first.stop_when_found = other;
        const auto ka = ex.explore(a, p, seed, first);
        if (ka.found_all_targets || ka.edges < n) return;
        ExploreLimits second;
        second.max_edges = n;
        hit[i] = ex.explore(b, p, seed, second).edges >= n ? 1 : 0;
      });
  return proportion_estimate(count_ones(hit), options.n_samples, options.confidence);
}

CheckReport two_ghost_check(const Graph& g, double p, std::size_t n, const SamplingOptions& options) {
  require_transitive_standin(g, "two_ghost_check");
  if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("two_ghost_check needs p in (0, 1]");
  if (n < 1) throw PreconditionError("two_ghost_check needs n >= 1");
  auto pool = options;
  pool.confidence = two_sided(options);
  const EdgeId e = representative_edge(g);
  const auto estimate = two_ghost_hat(g, e, p, n, pool);
  const double d = static_cast<double>(g.max_degree());
  CheckReport r;
  r.check = "two_ghost";
  r.lhs = estimate.ci_low;
  r.rhs = two_ghost_bound(d, p, static_cast<double>(n));
  r.pass = r.lhs <= r.rhs;
  r.vacuous = r.rhs >= 1.0;
  r.inputs_digest = digest(g.describe() + "|p=" + format_double(p) + "|n=" + std::to_string(n) + sampling_tag(options));
  r.details = {{"estimate", to_json(estimate)},
               {"edge", {g.edge(e).u, g.edge(e).v}},
               {"degree", d},
               {"one_sided_confidence", options.confidence},
               {"finite_graph_note", "every cluster of a finite graph is finite"}};
  return r;
}

CheckReport surgery_check(const Graph& g, double p, std::size_t n, int k, const SamplingOptions& options) {
  require_transitive_standin(g, "surgery_check");
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("surgery_check needs 0 < p < 1");
  if (k < 1) throw PreconditionError("surgery_check needs k >= 1");
  require_samples(options, kMinSamples);
  const Vertex rho = g.representative();
  const auto pool = [&](std::uint64_t stream) {
    auto o = options;
    o.seed = substream(options.seed, stream);
    o.confidence = two_sided(options);
    return o;
  };
  const auto tail = cluster_tail_hat(g, rho, p, n, pool(1));
  const auto kappa = kappa_hat(g, rho, p, k, pool(2));
  const auto ghost = two_ghost_hat(g, representative_edge(g), p, n, pool(3));

  double factor = 0.0;
  for (int i = 0; i < k; ++i) factor += std::pow(p, -i);
  const double point = factor * (tail.mean * tail.mean - kappa.estimate.mean);
  const double low = factor * (tail.ci_low * tail.ci_low - kappa.estimate.ci_high);

  CheckReport r;
  r.check = "surgery";
  r.lhs = low;
  r.rhs = ghost.ci_high;
  r.pass = r.lhs <= r.rhs;
  r.vacuous = low <= 0.0;
  r.inputs_digest = digest(g.describe() + "|p=" + format_double(p) + "|n=" + std::to_string(n) +
                           "|k=" + std::to_string(k) + sampling_tag(options));
  r.details = {{"lhs_point", point},
               {"factor", factor},
               {"tail", to_json(tail)},
               {"kappa", to_json(kappa.estimate)},
               {"kappa_argmin", kappa.argmin},
               {"two_ghost", to_json(ghost)},
               {"one_sided_confidence", options.confidence}};
  // Same estimates with the geometric factor moved onto the two-ghost side.
  const double rescaled_lhs = tail.ci_low * tail.ci_low - kappa.estimate.ci_high;
  const double rescaled_rhs = factor * ghost.ci_high;
  r.details["rescaled"] = {{"lhs", rescaled_lhs}, {"rhs", rescaled_rhs}, {"pass", rescaled_lhs <= rescaled_rhs}};
  return r;
}

CheckReport mtp_sphere_check(const Graph& g, int r) {
  if (!g.is_vertex_transitive()) {
    throw PreconditionError("mtp_sphere_check needs a vertex-transitive graph; " + g.describe() + " is not one");
  }
  if (r < 0) throw PreconditionError("mtp_sphere_check needs r >= 0");
  const std::size_t n = g.vertex_count();
  std::vector<std::uint64_t> sent(n, 0);
  std::vector<std::uint64_t> received(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    const auto dist = bfs_distances(g, u, r);
    for (Vertex v = 0; v < n; ++v) {
      if (dist[v] == r) {
        ++sent[u];
        ++received[v];
      }
    }
  }
  std::uint64_t total_sent = 0;
  std::uint64_t total_received = 0;
  for (Vertex v = 0; v < n; ++v) {
    total_sent += sent[v];
    total_received += received[v];
  }
  const bool sent_constant = std::all_of(sent.begin(), sent.end(), [&](auto s) { return s == sent[0]; });
  CheckReport rep;
  rep.check = "mtp_sphere";
  rep.lhs = static_cast<double>(total_sent) / static_cast<double>(n);
  rep.rhs = static_cast<double>(total_received) / static_cast<double>(n);
  rep.pass = total_sent == total_received && sent == received;
  rep.inputs_digest = digest(g.describe() + "|r=" + std::to_string(r));
  rep.details = {{"r", r}, {"sphere_size_constant", sent_constant}};
  return rep;
}

CheckReport mtp_percolation_check(const Graph& g, double p, int k, const SamplingOptions& options,
                                  double tolerance) {
  require_transitive_standin(g, "mtp_percolation_check");
  require_probability(p);
  require_samples(options);
  if (k < 0) throw PreconditionError("mtp_percolation_check needs k >= 0");
  const std::size_t n = g.vertex_count();
  std::vector<MassVector> rows;
  rows.reserve(n);
  for (Vertex v = 0; v < n; ++v) rows.push_back(walk_row(g, v, k));

  std::vector<double> lhs(options.n_samples);
  std::vector<double> rhs(options.n_samples);
  for_each_sample(
      options, [] { return 0; },
      [&](int&, std::size_t i, std::uint64_t seed) {
        const auto cfg = sample(g, p, seed);
        // Per vertex: P_rho(X_k in K_rho) from the walk row of rho.
        double sent = 0.0;
        for (Vertex rho = 0; rho < n; ++rho) {
          for (Vertex v = 0; v < n; ++v) {
            if (cfg.label(v) == cfg.label(rho)) sent += rows[rho][v];
          }
        }
        // Per cluster: |K| * (1/|K|) * Pr_{mu_K}(X_k in K), the uniform start evolved once.
        std::vector<std::vector<Vertex>> clusters(cfg.cluster_count());
        for (Vertex v = 0; v < n; ++v) clusters[cfg.label(v)].push_back(v);
        double received = 0.0;
        for (auto& members : clusters) {
          const Domain cluster(n, std::move(members));
          received += escape_probability(g, cluster, k, StartMeasure::uniform_on_domain, Validity::ignore) *
                      static_cast<double>(cluster.size());
        }
        lhs[i] = sent;
        rhs[i] = received;
      });
  double worst = 0.0;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < options.n_samples; ++i) {
    const double residual = std::abs(lhs[i] - rhs[i]) / std::max(1.0, std::abs(lhs[i]));
    worst = std::max(worst, residual);
    if (residual > tolerance) ++violations;
  }
  CheckReport r;
  r.check = "mtp_percolation";
  r.lhs = lhs.front();
  r.rhs = rhs.front();
  r.slack = tolerance;
  r.pass = violations == 0;
  r.inputs_digest = digest(g.describe() + "|p=" + format_double(p) + "|k=" + std::to_string(k) + sampling_tag(options));
  r.details = {{"configurations", options.n_samples},
               {"max_relative_residual", worst},
               {"violations", violations},
               {"finite_transitive", g.is_vertex_transitive()}};
  return r;
}

CheckReport kappapk_optimum_check(double alpha, double beta, double c1, double k, double grid_step,
                                  double grid_max) {
  if (!(beta > 0.0 && beta <= 1.0) || alpha < 0.0 || !(c1 > 0.0) || k < 0.0) {
    throw PreconditionError("optimum check needs beta in (0, 1], alpha >= 0, c1 > 0, k >= 0");
  }
  if (!(grid_step > 0.0) || !(grid_max > grid_step)) throw PreconditionError("invalid grid");
  const auto f = [&](double y) { return std::pow(y, beta) + c1 * k * std::pow(y, -alpha); };
  double y_star = 0.0;
  double closed = c1 * k;  // alpha = 0: the infimum sits at y -> 0
  if (alpha > 0.0) {
    y_star = std::pow(alpha * c1 * k / beta, 1.0 / (alpha + beta));
    closed = y_star > 0.0 ? f(y_star) : 0.0;
  }
  double grid = std::numeric_limits<double>::infinity();
  double y_grid = 0.0;
  const auto steps = static_cast<long>(std::floor(grid_max / grid_step + 0.5));
  for (long j = 1; j <= steps; ++j) {
    const double y = static_cast<double>(j) * grid_step;
    const double value = f(y);
    if (value < grid) {
      grid = value;
      y_grid = y;
    }
  }
  CheckReport r;
  r.check = "kappapk_optimum";
  r.lhs = grid;
  r.rhs = closed;
  r.slack = 1e-3 * std::abs(closed);
  r.pass = std::abs(grid - closed) <= r.slack;
  r.inputs_digest = digest("alpha=" + format_double(alpha) + "|beta=" + format_double(beta) + "|c1=" +
                           format_double(c1) + "|k=" + format_double(k));
  r.details = {{"y_star", y_star}, {"y_grid", y_grid}, {"grid_step", grid_step}, {"grid_max", grid_max}};
  return r;
}

CheckReport kappapk_bound_check(const Graph& g, double p, int k, double beta, double alpha, double c2,
                                const SamplingOptions& options) {
  require_transitive_standin(g, "kappapk_bound_check");
  require_probability(p);
  require_samples(options, 2);
  if (!(beta > 0.0 && beta <= 1.0)) throw PreconditionError("kappapk_bound_check needs beta in (0, 1]");
  if (alpha < 0.0 || !(c2 > 0.0) || k < 0) throw PreconditionError("kappapk_bound_check needs alpha >= 0, c2 > 0, k >= 0");
  const Vertex rho = g.representative();
  const auto row = walk_row(g, rho, k);
  std::vector<double> stay(options.n_samples);
  std::vector<double> functional(options.n_samples);
  for_each_sample(
      options, [&] { return ClusterExplorer(g); },
      [&](ClusterExplorer& ex, std::size_t i, std::uint64_t seed) {
        const auto s = ex.explore(rho, p, seed);
        double mass = 0.0;
        for (Vertex v : ex.members()) mass += row[v];
        stay[i] = mass;
        functional[i] = std::exp(std::pow(std::log(static_cast<double>(s.vertices)), beta));
      });
  const double level = two_sided(options);
  const auto lhs = mean_estimate(stay, level);
  const auto fun = mean_estimate(functional, level);
  const double ratio = degree_ratio(g, ball(g, rho, k));
  const double decay = std::exp(-c2 * std::pow(static_cast<double>(k), beta / (alpha + beta)));
  CheckReport r;
  r.check = "kappapk_bound";
  r.conditional = true;
  r.lhs = lhs.ci_low;
  r.rhs = std::sqrt(ratio) * (1.0 + fun.ci_high) * decay;
  r.pass = r.lhs <= r.rhs;
  r.inputs_digest = digest(g.describe() + "|p=" + format_double(p) + "|k=" + std::to_string(k) + "|beta=" +
                           format_double(beta) + "|alpha=" + format_double(alpha) + "|c2=" + format_double(c2) +
                           sampling_tag(options));
  r.details = {{"stay_probability", to_json(lhs)},
               {"functional", to_json(fun)},
               {"rhs_point", std::sqrt(ratio) * (1.0 + fun.mean) * decay},
               {"degree_ratio", ratio},
               {"c2_user_supplied", c2}};
  return r;
}

double bootstrap_c6(double c5) {
  if (!(c5 > 0.0)) throw PreconditionError("C5 must be positive");
  const double c5sq = c5 * c5;
  return 0.5 * (c5sq + std::sqrt(c5sq * c5sq + 4.0 * c5sq));
}

BootstrapResult bootstrap_functional(const Graph& g, Vertex v, double p, double beta, const SamplingOptions& options,
                                     std::optional<double> c5) {
  g.require_vertex(v);
  require_probability(p);
  if (!(beta >= 0.0 && beta < 1.0)) throw PreconditionError("bootstrap functional needs beta in [0, 1)");
  require_samples(options, 8);
  std::vector<double> values(options.n_samples);
  for_each_sample(
      options, [&] { return ClusterExplorer(g); },
      [&](ClusterExplorer& ex, std::size_t i, std::uint64_t seed) {
        const auto s = ex.explore(v, p, seed);
        values[i] = std::exp(std::pow(std::log(static_cast<double>(s.vertices)), beta));
      });
  BootstrapResult result;
  result.estimate = mean_estimate(values, options.confidence);
  result.stable = true;
  for (std::size_t parts : {4, 2, 1}) {
    const auto prefix = std::span<const double>(values).first(options.n_samples / parts);
    result.prefixes.push_back(mean_estimate(prefix, options.confidence));
    const auto& e = result.prefixes.back();
    if (e.ci_high < result.estimate.ci_low || e.ci_low > result.estimate.ci_high) result.stable = false;
  }
  auto& r = result.report;
  r.check = "bootstrap_functional";
  r.lhs = result.estimate.mean;
  r.pass = result.stable;
  r.inputs_digest = digest(g.describe() + "|v=" + std::to_string(v) + "|p=" + format_double(p) + "|beta=" +
                           format_double(beta) + sampling_tag(options));
  nlohmann::json prefixes = nlohmann::json::array();
  for (const auto& e : result.prefixes) prefixes.push_back(to_json(e));
  r.details = {{"estimate", to_json(result.estimate)}, {"prefixes", prefixes}, {"stable", result.stable}};
  if (c5) {
    result.implied_c6 = bootstrap_c6(*c5);
    r.rhs = *result.implied_c6;
    r.conditional = true;
    r.pass = result.stable && result.estimate.mean <= *result.implied_c6;
    r.details["c5_user_supplied"] = *c5;
  } else {
    r.rhs = std::numeric_limits<double>::infinity();
  }
  return result;
}

}  // namespace perclab
