#include "tasks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "perclab/error.hpp"
#include "perclab/estimate.hpp"
#include "perclab/perc_checks.hpp"
#include "perclab/percolation.hpp"
#include "perclab/profile.hpp"
#include "perclab/report.hpp"
#include "perclab/spectral.hpp"
#include "perclab/theorem_checks.hpp"
#include "perclab/walk.hpp"

namespace perclab::cli {

using nlohmann::json;

const char* to_string(Group group) {
  switch (group) {
    case Group::build_graph: return "build-graph";
    case Group::walk: return "walk";
    case Group::spectral: return "spectral";
    case Group::perc: return "perc";
    case Group::verify: return "verify";
  }
  return "unknown";
}

namespace {

std::string csv_number(double x) { return std::isnan(x) ? std::string() : format_double(x); }

json number_or_null(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

// ---- parameter readers ----

Vertex read_vertex(const TaskContext& ctx, const std::string& key) {
  const auto& g = *ctx.graph;
  if (!ctx.config.has(key)) return g.representative();
  const auto v = ctx.config.get_int(key);
  if (v < 0) throw PreconditionError(key + " must be a vertex id");
  g.require_vertex(static_cast<Vertex>(v));
  return static_cast<Vertex>(v);
}

int read_nonnegative_int(const TaskContext& ctx, const std::string& key) {
  const auto v = ctx.config.get_int(key);
  if (v < 0 || v > std::numeric_limits<int>::max()) throw PreconditionError(key + " must be a nonnegative int");
  return static_cast<int>(v);
}

int read_nonnegative_int(const TaskContext& ctx, const std::string& key, int fallback) {
  return ctx.config.has(key) ? read_nonnegative_int(ctx, key) : fallback;
}

std::size_t read_size(const TaskContext& ctx, const std::string& key) {
  const auto v = ctx.config.get_int(key);
  if (v < 1) throw PreconditionError(key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<Vertex> to_vertices(const Graph& g, const std::vector<std::int64_t>& ids, const std::string& key) {
  std::vector<Vertex> out;
  for (auto id : ids) {
    if (id < 0) throw PreconditionError(key + " holds a negative vertex id");
    g.require_vertex(static_cast<Vertex>(id));
    out.push_back(static_cast<Vertex>(id));
  }
  return out;
}

// task.domain = all | comma list, or task.center (+ task.radius) for a ball.
Domain read_domain(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  if (ctx.config.has("task.domain")) {
    if (ctx.config.has("task.center")) throw ParseError("give either task.domain or task.center, not both");
    if (ctx.config.get_string("task.domain") == "all") return Domain::all(g.vertex_count());
    auto members = to_vertices(g, ctx.config.get_ints("task.domain"), "task.domain");
    std::sort(members.begin(), members.end());
    return Domain(g.vertex_count(), std::move(members));
  }
  const Vertex center = read_vertex(ctx, "task.center");
  return ball(g, center, read_nonnegative_int(ctx, "task.radius", 0));
}

double read_probability(const TaskContext& ctx) {
  const double p = ctx.config.get_double("task.p");
  require_probability(p);
  return p;
}

std::vector<double> read_thresholds(const TaskContext& ctx) {
  if (ctx.config.has("task.thresholds") && ctx.config.get_string("task.thresholds") != "all") {
    return ctx.config.get_doubles("task.thresholds");
  }
  return all_thresholds(*ctx.graph);
}

ProfileOptions read_profile_options(const TaskContext& ctx) {
  ProfileOptions options;
  if (ctx.config.has("task.window")) options.window = to_vertices(*ctx.graph, ctx.config.get_ints("task.window"), "task.window");
  if (ctx.config.has("task.max_connected_size")) options.max_connected_size = read_size(ctx, "task.max_connected_size");
  return options;
}

// task.profile = exhaustive | ball_family | analytic | exact_cycle.
SpectralProfile read_profile(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const auto name = ctx.config.get_string("task.profile", "exhaustive");
  if (name == "exact_cycle") return exact_cycle_profile(g);
  const auto mode = profile_mode_from_string(name);
  if (mode == ProfileMode::analytic) {
    ProfileModel model;
    model.alpha = ctx.config.get_double("task.alpha");
    model.c = ctx.config.get_double("task.c");
    model.max_pi = ctx.config.get_double("task.max_pi", static_cast<double>(g.max_degree()));
    return analytic_profile(g, model);
  }
  return spectral_profile(g, mode, read_profile_options(ctx));
}

CheckMode read_mode(const TaskContext& ctx) {
  const auto name = ctx.config.get_string("task.mode", "assert");
  if (name == "assert") return CheckMode::assert;
  if (name == "diagnostic") return CheckMode::diagnostic;
  throw ParseError("task.mode must be assert or diagnostic, got '" + name + "'");
}

Validity read_validity(const TaskContext& ctx, Validity fallback) {
  if (!ctx.config.has("task.validity")) return fallback;
  const auto name = ctx.config.get_string("task.validity");
  if (name == "enforce") return Validity::enforce;
  if (name == "ignore") return Validity::ignore;
  throw ParseError("task.validity must be enforce or ignore, got '" + name + "'");
}

StartMeasure read_start(const TaskContext& ctx) {
  const auto name = ctx.config.get_string("task.start", "uniform");
  if (name == "uniform") return StartMeasure::uniform_on_domain;
  if (name == "pi") return StartMeasure::pi_on_domain;
  throw ParseError("task.start must be uniform or pi, got '" + name + "'");
}

EscapeVariant read_variant(const TaskContext& ctx) {
  const auto name = ctx.config.get_string("task.variant", "uniform");
  if (name == "uniform") return EscapeVariant::uniform;
  if (name == "pi") return EscapeVariant::pi;
  throw ParseError("task.variant must be uniform or pi, got '" + name + "'");
}

ClusterMeasure read_measure(const TaskContext& ctx) {
  const auto name = ctx.config.get_string("task.measure", "edges");
  if (name == "edges") return ClusterMeasure::edges;
  if (name == "vertices") return ClusterMeasure::vertices;
  throw ParseError("task.measure must be edges or vertices, got '" + name + "'");
}

// ---- record builders ----

json base_record(const std::string& task, const TaskContext& ctx) {
  json r;
  r["task"] = task;
  if (ctx.graph) r["graph"] = ctx.graph_json;
  return r;
}

// {check, graph, p, n, k, estimates, bound, pass, seed, n_samples}
json results_record(const std::string& check, const TaskContext& ctx, double p, json n, json k, json estimates,
                    double bound, json pass) {
  json r;
  r["check"] = check;
  r["graph"] = ctx.graph_json;
  r["p"] = p;
  r["n"] = std::move(n);
  r["k"] = std::move(k);
  r["estimates"] = std::move(estimates);
  r["bound"] = number_or_null(bound);
  r["pass"] = std::move(pass);
  r["seed"] = ctx.sampling.seed;
  r["n_samples"] = ctx.sampling.n_samples;
  r["replicas"] = ctx.sampling.replicas;
  return r;
}

std::string estimates_csv(double p, const std::vector<std::pair<double, Estimate>>& rows, double bound) {
  std::ostringstream out;
  out << "p,n,estimate,ci_low,ci_high,bound\n";
  for (const auto& [n, e] : rows) {
    out << format_double(p) << ',' << csv_number(n) << ',' << format_double(e.mean) << ','
        << format_double(e.ci_low) << ',' << format_double(e.ci_high) << ',' << csv_number(bound) << '\n';
  }
  return out.str();
}

std::string report_csv(const CheckReport& r) {
  std::ostringstream out;
  out << "check,inputs_digest,lhs,rhs,pass,slack,vacuous,conditional,diagnostic\n";
  out << r.check << ',' << r.inputs_digest << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
      << (r.pass ? "true" : "false") << ',' << format_double(r.slack) << ',' << (r.vacuous ? "true" : "false") << ','
      << (r.conditional ? "true" : "false") << ',' << (r.diagnostic ? "true" : "false") << '\n';
  return out.str();
}

TaskOutput report_output(const CheckReport& report, const TaskContext& ctx, bool sampled) {
  TaskOutput out;
  out.record = to_json(report);
  if (ctx.graph) out.record["graph"] = ctx.graph_json;
  if (sampled) {
    out.record["seed"] = ctx.sampling.seed;
    out.record["n_samples"] = ctx.sampling.n_samples;
    out.record["replicas"] = ctx.sampling.replicas;
  }
  out.csv = report_csv(report);
  out.row.lhs = report.lhs;
  out.row.rhs = report.rhs;
  out.row.pass = report.pass;
  out.row.vacuous = report.vacuous;
  out.pass = report.pass;
  return out;
}

// Estimators read sampling.confidence as a two-sided level, checks as one-sided.
SamplingOptions sampling(const TaskContext& ctx) { return ctx.sampling; }

// ---- build-graph ----

TaskOutput run_graph(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  TaskOutput out;
  out.record = base_record("graph", ctx);
  out.record["vertex_count"] = g.vertex_count();
  out.record["edge_count"] = g.edge_count();
  out.record["min_degree"] = g.min_degree();
  out.record["max_degree"] = g.max_degree();
  out.record["representative"] = g.representative();
  json edges = json::array();
  std::ostringstream csv;
  csv << "u,v\n";
  for (const auto& e : g.edges()) {
    edges.push_back({e.u, e.v});
    csv << e.u << ',' << e.v << '\n';
  }
  out.record["edges"] = std::move(edges);
  out.csv = csv.str();
  out.row.value = static_cast<double>(g.vertex_count());
  return out;
}

// ---- walk ----

TaskOutput run_return_probability(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const Vertex v = read_vertex(ctx, "task.v");
  const int n = read_nonnegative_int(ctx, "task.n");
  const auto probabilities = return_probabilities(g, v, n, read_validity(ctx, Validity::enforce));
  TaskOutput out;
  out.record = base_record("return_probability", ctx);
  out.record["v"] = v;
  out.record["n"] = n;
  out.record["p_n"] = probabilities.back();
  out.record["sequence"] = probabilities;
  std::ostringstream csv;
  write_return_csv(csv, probabilities);
  out.csv = csv.str();
  out.row.n = n;
  out.row.value = probabilities.back();
  return out;
}

TaskOutput run_escape_probability(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const auto domain = read_domain(ctx);
  const int k = read_nonnegative_int(ctx, "task.k");
  const auto start = read_start(ctx);
  const auto probabilities = escape_probabilities(g, domain, k, start, read_validity(ctx, Validity::enforce));
  TaskOutput out;
  out.record = base_record("escape_probability", ctx);
  out.record["domain_size"] = domain.size();
  out.record["k"] = k;
  out.record["start"] = start == StartMeasure::uniform_on_domain ? "uniform" : "pi";
  out.record["probability"] = probabilities.back();
  out.record["sequence"] = probabilities;
  std::ostringstream csv;
  csv << "k,probability\n";
  for (std::size_t i = 0; i < probabilities.size(); ++i) csv << i << ',' << format_double(probabilities[i]) << '\n';
  out.csv = csv.str();
  out.row.value = probabilities.back();
  return out;
}

TaskOutput run_sample_walk(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const Vertex v = read_vertex(ctx, "task.v");
  const int k = read_nonnegative_int(ctx, "task.k");
  const auto path = sample_walk(g, v, k, ctx.sampling.seed);
  TaskOutput out;
  out.record = base_record("sample_walk", ctx);
  out.record["seed"] = path.seed;
  out.record["vertices"] = path.vertices;
  std::ostringstream csv;
  csv << "step,vertex\n";
  for (std::size_t i = 0; i < path.vertices.size(); ++i) csv << i << ',' << path.vertices[i] << '\n';
  out.csv = csv.str();
  out.row.value = static_cast<double>(path.vertices.back());
  return out;
}

TaskOutput run_hk_fit(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const Vertex v = read_vertex(ctx, "task.v");
  const int n_max = read_nonnegative_int(ctx, "task.n_max");
  HkFitOptions options;
  options.grid_points = read_nonnegative_int(ctx, "task.grid_points", options.grid_points);
  options.window_fraction = ctx.config.get_double("task.window_fraction", options.window_fraction);
  options.log_correction = ctx.config.get_bool("task.log_correction", options.log_correction);
  const auto fit = hk_fit(g, v, n_max, options);
  TaskOutput out;
  out.record = base_record("hk_fit", ctx);
  out.record["gamma"] = fit.gamma;
  out.record["c"] = fit.c;
  out.record["intercept"] = fit.intercept;
  out.record["log_coefficient"] = fit.log_coefficient;
  out.record["sse"] = fit.sse;
  out.record["polynomial_exponent"] = fit.polynomial_exponent;
  out.record["polynomial_sse"] = fit.polynomial_sse;
  out.record["stretched_exponential"] = fit.stretched_exponential;
  out.record["steps_used"] = fit.steps_used;
  std::ostringstream csv;
  csv << "gamma,c,intercept,log_coefficient,sse,polynomial_exponent,polynomial_sse,stretched_exponential\n";
  csv << format_double(fit.gamma) << ',' << format_double(fit.c) << ',' << format_double(fit.intercept) << ','
      << format_double(fit.log_coefficient) << ',' << format_double(fit.sse) << ','
      << format_double(fit.polynomial_exponent) << ',' << format_double(fit.polynomial_sse) << ','
      << (fit.stretched_exponential ? "true" : "false") << '\n';
  out.csv = csv.str();
  out.row.value = fit.gamma;
  return out;
}

// ---- spectral ----

TaskOutput run_lambda_a(const TaskContext& ctx) {
  const auto domain = read_domain(ctx);
  const auto result = lambda_a(*ctx.graph, domain);
  TaskOutput out;
  out.record = base_record("lambda_a", ctx);
  out.record["domain_size"] = domain.size();
  out.record["lambda"] = result.value;
  out.record["rho_sq"] = result.rho_sq;
  out.record["rho_sq_low"] = result.rho_sq_low;
  out.record["rho_sq_high"] = result.rho_sq_high;
  out.record["iterations"] = result.iterations;
  std::ostringstream csv;
  csv << "lambda,rho_sq_low,rho_sq_high,iterations\n"
      << format_double(result.value) << ',' << format_double(result.rho_sq_low) << ','
      << format_double(result.rho_sq_high) << ',' << result.iterations << '\n';
  out.csv = csv.str();
  out.row.value = result.value;
  return out;
}

json profile_points(const SpectralProfile& profile, const std::vector<double>& thresholds, const char* key) {
  json points = json::array();
  for (const auto& p : profile.evaluate(thresholds)) points.push_back({{"L", p.threshold}, {key, p.value}});
  return points;
}

TaskOutput run_spectral_profile(const TaskContext& ctx) {
  const auto profile = read_profile(ctx);
  const auto thresholds = read_thresholds(ctx);
  TaskOutput out;
  out.record = base_record("spectral_profile", ctx);
  out.record["mode"] = to_string(profile.mode());
  out.record["certified_lower_bound"] = profile.certified_lower_bound();
  out.record["description"] = profile.description();
  out.record["points"] = profile_points(profile, thresholds, "lambda");
  std::ostringstream csv;
  write_profile_csv(csv, profile, thresholds);
  out.csv = csv.str();
  if (thresholds.size() == 1) out.row.value = profile.at(thresholds.front());
  return out;
}

TaskOutput run_iso_profile(const TaskContext& ctx) {
  const auto profile = iso_profile(*ctx.graph, read_profile_options(ctx));
  const auto thresholds = read_thresholds(ctx);
  TaskOutput out;
  out.record = base_record("iso_profile", ctx);
  out.record["mode"] = to_string(profile.mode());
  out.record["points"] = profile_points(profile, thresholds, "phi");
  std::ostringstream csv;
  csv << "L,phi,mode\n";
  for (const auto& p : profile.evaluate(thresholds)) {
    csv << format_double(p.threshold) << ',' << format_double(p.value) << ',' << to_string(profile.mode()) << '\n';
  }
  out.csv = csv.str();
  if (thresholds.size() == 1) out.row.value = profile.at(thresholds.front());
  return out;
}

TaskOutput run_escape_threshold(const TaskContext& ctx) {
  const auto domain = read_domain(ctx);
  const int ell = read_nonnegative_int(ctx, "task.ell");
  const auto profile = read_profile(ctx);
  const auto variant = read_variant(ctx);
  const auto t = escape_threshold(*ctx.graph, domain, ell, profile, variant);
  TaskOutput out;
  out.record = base_record("escape_threshold", ctx);
  out.record["variant"] = to_string(variant);
  out.record["ell"] = ell;
  out.record["k_star"] = number_or_null(t.threshold.finite ? t.threshold.k_star : kNone);
  out.record["finite"] = t.threshold.finite;
  out.record["base"] = t.base;
  out.record["bound"] = t.bound;
  out.record["profile_values"] = t.threshold.profile_values;
  std::ostringstream csv;
  csv << "ell,k_star,base,bound\n"
      << ell << ',' << (t.threshold.finite ? format_double(t.threshold.k_star) : "inf") << ','
      << format_double(t.base) << ',' << format_double(t.bound) << '\n';
  out.csv = csv.str();
  out.row.value = t.threshold.k_star;
  out.row.bound = t.bound;
  return out;
}

TaskOutput run_escape_bound_rhs(const TaskContext& ctx) {
  const double d = ctx.config.get_double("task.domain_size");
  const double k = ctx.config.get_double("task.k");
  const double alpha = ctx.config.get_double("task.alpha");
  const double c1 = ctx.config.get_double("task.c1");
  const double ratio = ctx.config.get_double("task.degree_ratio", 1.0);
  const double value = escape_bound_rhs(d, k, alpha, c1, ratio);
  TaskOutput out;
  out.record = {{"task", "escape_bound_rhs"}, {"domain_size", d}, {"k", k},     {"alpha", alpha},
                {"c1", c1},                   {"degree_ratio", ratio}, {"value", value}};
  out.csv = "domain_size,k,alpha,c1,degree_ratio,value\n" + format_double(d) + ',' + format_double(k) + ',' +
            format_double(alpha) + ',' + format_double(c1) + ',' + format_double(ratio) + ',' + format_double(value) +
            '\n';
  out.row.value = value;
  return out;
}

// ---- percolation estimators ----

TaskOutput run_sample(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const double p = read_probability(ctx);
  const Vertex root = read_vertex(ctx, "task.v");
  const auto cfg = sample(g, p, ctx.sampling.seed);
  std::size_t open = 0;
  for (auto e : cfg.open_edges) open += e;
  const auto largest = *std::max_element(cfg.cluster_sizes.begin(), cfg.cluster_sizes.end());
  TaskOutput out;
  out.record = base_record("sample", ctx);
  out.record["p"] = p;
  out.record["seed"] = ctx.sampling.seed;
  out.record["open_edges"] = open;
  out.record["cluster_count"] = cfg.cluster_count();
  out.record["largest_cluster"] = largest;
  out.record["root"] = root;
  out.record["root_cluster_size"] = cfg.cluster_sizes[cfg.label(root)];
  out.record["root_cluster_edges"] = cfg.cluster_edge_counts[cfg.label(root)];
  std::ostringstream csv;
  csv << "cluster,size,edges\n";
  for (std::size_t c = 0; c < cfg.cluster_count(); ++c) {
    csv << c << ',' << cfg.cluster_sizes[c] << ',' << cfg.cluster_edge_counts[c] << '\n';
  }
  out.csv = csv.str();
  out.row.p = p;
  out.row.value = static_cast<double>(cfg.cluster_sizes[cfg.label(root)]);
  return out;
}

void fill_estimate_row(SweepRow& row, double p, double n, const Estimate& e, double bound) {
  row.p = p;
  row.n = n;
  row.estimate = e.mean;
  row.ci_low = e.ci_low;
  row.ci_high = e.ci_high;
  row.bound = bound;
}

TaskOutput run_cluster_tail(const TaskContext& ctx) {
  const double p = read_probability(ctx);
  const Vertex v = read_vertex(ctx, "task.v");
  std::vector<std::size_t> ns;
  for (auto n : ctx.config.get_ints("task.n")) {
    if (n < 1) throw PreconditionError("task.n entries must be positive");
    ns.push_back(static_cast<std::size_t>(n));
  }
  if (ns.empty()) throw PreconditionError("task.n is empty");
  const auto measure = read_measure(ctx);
  const auto estimates = cluster_tail_hat(*ctx.graph, v, p, ns, sampling(ctx), measure);
  json list = json::array();
  std::vector<std::pair<double, Estimate>> rows;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    auto e = to_json(estimates[i]);
    e["n"] = ns[i];
    list.push_back(e);
    rows.emplace_back(static_cast<double>(ns[i]), estimates[i]);
  }
  TaskOutput out;
  out.record = results_record("cluster_tail_hat", ctx, p, ns.size() == 1 ? json(ns.front()) : json(ns), nullptr,
                              list, kNone, nullptr);
  out.record["v"] = v;
  out.record["measure"] = measure == ClusterMeasure::edges ? "edges" : "vertices";
  out.csv = estimates_csv(p, rows, kNone);
  fill_estimate_row(out.row, p, static_cast<double>(ns.front()), estimates.front(), kNone);
  return out;
}

TaskOutput run_tau(const TaskContext& ctx) {
  const double p = read_probability(ctx);
  const Vertex u = read_vertex(ctx, "task.u");
  const Vertex v = read_vertex(ctx, "task.v");
  const auto e = tau_hat(*ctx.graph, u, v, p, sampling(ctx));
  TaskOutput out;
  out.record = results_record("tau_hat", ctx, p, nullptr, nullptr, json::array({to_json(e)}), kNone, nullptr);
  out.record["u"] = u;
  out.record["v"] = v;
  out.record["distance"] = graph_distance(*ctx.graph, u, v);
  out.csv = estimates_csv(p, {{kNone, e}}, kNone);
  fill_estimate_row(out.row, p, kNone, e, kNone);
  return out;
}

TaskOutput run_kappa(const TaskContext& ctx) {
  const double p = read_probability(ctx);
  const Vertex base = read_vertex(ctx, "task.v");
  const int k = read_nonnegative_int(ctx, "task.k");
  const auto result = kappa_hat(*ctx.graph, base, p, k, sampling(ctx));
  TaskOutput out;
  out.record = results_record("kappa_hat", ctx, p, nullptr, k, json::array({to_json(result.estimate)}), kNone, nullptr);
  out.record["v"] = base;
  out.record["argmin"] = result.argmin;
  out.record["targets"] = result.targets.size();
  out.csv = estimates_csv(p, {{kNone, result.estimate}}, kNone);
  fill_estimate_row(out.row, p, kNone, result.estimate, kNone);
  return out;
}

TaskOutput run_two_ghost_hat(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const double p = read_probability(ctx);
  const std::size_t n = read_size(ctx, "task.n");
  const auto e = two_ghost_hat(g, representative_edge(g), p, n, sampling(ctx));
  const double bound = two_ghost_bound(static_cast<double>(g.max_degree()), p, static_cast<double>(n));
  TaskOutput out;
  out.record = results_record("two_ghost_hat", ctx, p, n, nullptr, json::array({to_json(e)}), bound, nullptr);
  out.csv = estimates_csv(p, {{static_cast<double>(n), e}}, bound);
  fill_estimate_row(out.row, p, static_cast<double>(n), e, bound);
  return out;
}

TaskOutput run_bootstrap(const TaskContext& ctx) {
  const double p = read_probability(ctx);
  const Vertex v = read_vertex(ctx, "task.v");
  const double beta = ctx.config.get_double("task.beta");
  const auto c5 = ctx.config.get_optional_double("task.c5");
  const auto result = bootstrap_functional(*ctx.graph, v, p, beta, sampling(ctx), c5);
  TaskOutput out;
  out.record = results_record("bootstrap_functional", ctx, p, nullptr, nullptr,
                              json::array({to_json(result.estimate)}),
                              result.implied_c6 ? *result.implied_c6 : kNone,
                              c5 ? json(result.report.pass) : json(nullptr));
  out.record["v"] = v;
  out.record["beta"] = beta;
  out.record["stable"] = result.stable;
  json prefixes = json::array();
  for (const auto& e : result.prefixes) prefixes.push_back(to_json(e));
  out.record["prefixes"] = prefixes;
  out.csv = estimates_csv(p, {{kNone, result.estimate}}, result.implied_c6 ? *result.implied_c6 : kNone);
  fill_estimate_row(out.row, p, kNone, result.estimate, result.implied_c6 ? *result.implied_c6 : kNone);
  return out;
}

// ---- verify ----

TaskOutput run_key_lemma(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const auto domain = read_domain(ctx);
  MassVector phi(g.vertex_count());
  if (!ctx.config.has("task.phi") || ctx.config.get_string("task.phi") == "indicator") {
    for (Vertex v : domain.members()) phi[v] = 1.0;
  } else {
    const auto values = ctx.config.get_doubles("task.phi");
    if (values.size() != domain.size()) throw PreconditionError("task.phi needs one value per domain member");
    for (std::size_t i = 0; i < values.size(); ++i) phi[domain.members()[i]] = values[i];
  }
  const auto report = key_lemma_check(g, domain, phi, read_profile(ctx), ctx.config.get_double("task.slack", 1e-9));
  return report_output(report, ctx, false);
}

MassVector read_measure_vector(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const auto start = ctx.config.get_string("task.start", "delta");
  if (start == "delta") return MassVector::delta(g.vertex_count(), read_vertex(ctx, "task.v"));
  const auto domain = read_domain(ctx);
  if (start == "uniform") return MassVector::uniform_on(g, domain);
  if (start == "pi") return MassVector::pi_on(g, domain);
  throw ParseError("task.start must be delta, uniform or pi, got '" + start + "'");
}

TaskOutput run_l2_decay(const TaskContext& ctx) {
  const auto mu = read_measure_vector(ctx);
  const int ell = read_nonnegative_int(ctx, "task.ell");
  const auto report = l2_decay_check(*ctx.graph, mu, ell, read_profile(ctx), read_mode(ctx));
  return report_output(report, ctx, false);
}

TaskOutput run_escape_check(const TaskContext& ctx) {
  const auto domain = read_domain(ctx);
  const int ell = read_nonnegative_int(ctx, "task.ell");
  const auto report = escape_check(*ctx.graph, domain, ell, read_profile(ctx), read_variant(ctx), read_mode(ctx),
                                   read_validity(ctx, Validity::ignore));
  return report_output(report, ctx, false);
}

TaskOutput run_cheeger(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const auto options = read_profile_options(ctx);
  const auto spectral = spectral_profile(g, ProfileMode::exhaustive, options);
  const auto iso = iso_profile(g, options);
  const auto thresholds = read_thresholds(ctx);
  const auto report = cheeger_check(spectral, iso, thresholds);
  auto out = report_output(report.summary, ctx, false);
  json rows = json::array();
  std::ostringstream csv;
  csv << "L,lambda,phi,lower_holds,upper_holds,upper_factor_two_holds\n";
  for (const auto& r : report.rows) {
    rows.push_back({{"L", r.threshold},
                    {"lambda", r.lambda},
                    {"phi", r.phi},
                    {"lower_holds", r.lower_holds},
                    {"upper_holds", r.upper_holds},
                    {"upper_factor_two_holds", r.upper_factor_two_holds}});
    csv << format_double(r.threshold) << ',' << format_double(r.lambda) << ',' << format_double(r.phi) << ','
        << (r.lower_holds ? "true" : "false") << ',' << (r.upper_holds ? "true" : "false") << ','
        << (r.upper_factor_two_holds ? "true" : "false") << '\n';
  }
  out.record["details"]["rows"] = rows;
  out.csv = csv.str();
  return out;
}

TaskOutput run_reversibility(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const auto domain = read_domain(ctx);
  const Vertex u = read_vertex(ctx, "task.u");
  const Vertex v = read_vertex(ctx, "task.v");
  const int t = read_nonnegative_int(ctx, "task.t");
  const double tol = ctx.config.get_double("task.rel_tol", 1e-10);
  const auto result = reversibility_check(g, domain, MassVector::delta(g.vertex_count(), u),
                                          MassVector::delta(g.vertex_count(), v), t, tol);
  CheckReport report;
  report.check = "reversibility";
  report.lhs = result.lhs;
  report.rhs = result.rhs;
  report.pass = result.pass;
  report.slack = tol;
  std::string inputs = g.describe() + "|u=" + std::to_string(u) + "|v=" + std::to_string(v) + "|t=" + std::to_string(t);
  for (Vertex w : domain.members()) inputs += "," + std::to_string(w);
  report.inputs_digest = digest(inputs);
  report.details = {{"residual", result.residual}};
  return report_output(report, ctx, false);
}

TaskOutput run_insertion_tolerance(const TaskContext& ctx) {
  const double p = read_probability(ctx);
  const Vertex u = read_vertex(ctx, "task.u");
  const Vertex v = read_vertex(ctx, "task.v");
  auto o = sampling(ctx);
  o.confidence = two_sided_for_one_sided(o.confidence);
  const auto tau = tau_hat(*ctx.graph, u, v, p, o);
  auto out = report_output(insertion_tolerance_check(*ctx.graph, u, v, p, tau), ctx, true);
  out.row.p = p;
  return out;
}

TaskOutput run_two_ghost_check(const TaskContext& ctx) {
  const auto& g = *ctx.graph;
  const double p = ctx.config.get_double("task.p");
  const std::size_t n = read_size(ctx, "task.n");
  const auto report = two_ghost_check(g, p, n, sampling(ctx));
  auto out = report_output(report, ctx, true);
  out.record["p"] = p;
  out.record["n"] = n;
  out.record["k"] = nullptr;
  out.record["bound"] = report.rhs;
  out.record["estimates"] = json::array({report.details.at("estimate")});
  const auto& e = report.details.at("estimate");
  fill_estimate_row(out.row, p, static_cast<double>(n),
                    Estimate{e.at("n_samples").get<std::size_t>(), 0.0, e.at("mean").get<double>(),
                             e.at("ci_low").get<double>(), e.at("ci_high").get<double>(),
                             e.at("confidence").get<double>()},
                    report.rhs);
  return out;
}

TaskOutput run_surgery(const TaskContext& ctx) {
  const double p = ctx.config.get_double("task.p");
  const std::size_t n = read_size(ctx, "task.n");
  const int k = read_nonnegative_int(ctx, "task.k");
  const auto report = surgery_check(*ctx.graph, p, n, k, sampling(ctx));
  auto out = report_output(report, ctx, true);
  out.record["p"] = p;
  out.record["n"] = n;
  out.record["k"] = k;
  out.record["bound"] = report.rhs;
  out.record["estimates"] = json::array(
      {report.details.at("tail"), report.details.at("kappa"), report.details.at("two_ghost")});
  out.row.p = p;
  out.row.n = static_cast<double>(n);
  return out;
}

TaskOutput run_mtp(const TaskContext& ctx) {
  const auto kind = ctx.config.get_string("task.kind", "percolation");
  if (kind == "sphere") {
    const int r = read_nonnegative_int(ctx, "task.r");
    return report_output(mtp_sphere_check(*ctx.graph, r), ctx, false);
  }
  if (kind != "percolation") throw ParseError("task.kind must be sphere or percolation, got '" + kind + "'");
  const double p = read_probability(ctx);
  const int k = read_nonnegative_int(ctx, "task.k");
  const double tol = ctx.config.get_double("task.tolerance", 1e-10);
  auto out = report_output(mtp_percolation_check(*ctx.graph, p, k, sampling(ctx), tol), ctx, true);
  out.record["p"] = p;
  out.record["k"] = k;
  out.row.p = p;
  return out;
}

TaskOutput run_kappapk_optimum(const TaskContext& ctx) {
  const auto report =
      kappapk_optimum_check(ctx.config.get_double("task.alpha"), ctx.config.get_double("task.beta"),
                            ctx.config.get_double("task.c1"), ctx.config.get_double("task.k"),
                            ctx.config.get_double("task.grid_step", 1e-4), ctx.config.get_double("task.grid_max", 50.0));
  return report_output(report, ctx, false);
}

TaskOutput run_kappapk_bound(const TaskContext& ctx) {
  const double p = read_probability(ctx);
  const int k = read_nonnegative_int(ctx, "task.k");
  const auto report = kappapk_bound_check(*ctx.graph, p, k, ctx.config.get_double("task.beta"),
                                          ctx.config.get_double("task.alpha"), ctx.config.get_double("task.c2"),
                                          sampling(ctx));
  auto out = report_output(report, ctx, true);
  out.record["p"] = p;
  out.record["k"] = k;
  out.row.p = p;
  return out;
}

std::vector<TaskInfo> make_registry() {
  using M = Monotone;
  return {
      {"graph", Group::build_graph, true, false, M::none, M::none, run_graph},
      {"return_probability", Group::walk, true, false, M::none, M::none, run_return_probability},
      {"escape_probability", Group::walk, true, false, M::none, M::none, run_escape_probability},
      {"sample_walk", Group::walk, true, true, M::none, M::none, run_sample_walk},
      {"hk_fit", Group::walk, true, false, M::none, M::none, run_hk_fit},
      {"lambda_a", Group::spectral, true, false, M::none, M::none, run_lambda_a},
      {"spectral_profile", Group::spectral, true, false, M::none, M::none, run_spectral_profile},
      {"iso_profile", Group::spectral, true, false, M::none, M::none, run_iso_profile},
      {"escape_threshold", Group::spectral, true, false, M::none, M::none, run_escape_threshold},
      {"escape_bound_rhs", Group::spectral, false, false, M::none, M::none, run_escape_bound_rhs},
      {"sample", Group::perc, true, true, M::nondecreasing, M::none, run_sample},
      {"cluster_tail_hat", Group::perc, true, true, M::nondecreasing, M::nonincreasing, run_cluster_tail},
      {"tau_hat", Group::perc, true, true, M::nondecreasing, M::none, run_tau},
      {"kappa_hat", Group::perc, true, true, M::nondecreasing, M::none, run_kappa},
      {"two_ghost_hat", Group::perc, true, true, M::none, M::none, run_two_ghost_hat},
      {"bootstrap_functional", Group::perc, true, true, M::nondecreasing, M::none, run_bootstrap},
      {"key_lemma_check", Group::verify, true, false, M::none, M::none, run_key_lemma},
      {"l2_decay_check", Group::verify, true, false, M::none, M::none, run_l2_decay},
      {"escape_check", Group::verify, true, false, M::none, M::none, run_escape_check},
      {"cheeger_check", Group::verify, true, false, M::none, M::none, run_cheeger},
      {"reversibility_check", Group::verify, true, false, M::none, M::none, run_reversibility},
      {"insertion_tolerance_check", Group::verify, true, true, M::none, M::none, run_insertion_tolerance},
      {"two_ghost_check", Group::verify, true, true, M::none, M::none, run_two_ghost_check},
      {"surgery_check", Group::verify, true, true, M::none, M::none, run_surgery},
      {"mtp_check", Group::verify, true, true, M::none, M::none, run_mtp},
      {"kappapk_optimum_check", Group::verify, false, false, M::none, M::none, run_kappapk_optimum},
      {"kappapk_bound_check", Group::verify, true, true, M::none, M::none, run_kappapk_bound},
  };
}

}  // namespace

const std::vector<TaskInfo>& registry() {
  static const std::vector<TaskInfo> tasks = make_registry();
  return tasks;
}

const TaskInfo* find_task(const std::string& name) {
  for (const auto& t : registry()) {
    if (t.name == name) return &t;
    if (t.group == Group::verify && t.name == name + "_check") return &t;
  }
  return nullptr;
}

Graph build_graph_from_config(const Config& config) {
  const auto int_param = [&](const std::string& key) {
    const auto v = config.get_int(key);
    if (v < 0 || v > std::numeric_limits<int>::max()) throw PreconditionError(key + " out of range");
    return static_cast<int>(v);
  };
  const auto family_name = config.get_string("graph.family");
  const std::size_t cap = default_vertex_cap();
  if (family_name == "edge_list") {
    const auto path = config.get_string("graph.path");
    std::ifstream in(path);
    if (!in) throw IoError("cannot read edge list '" + path + "'");
    return read_edge_list(in, cap);
  }
  if (family_name == "path") return build_path(int_param("graph.length"));
  const auto family = family_from_string(family_name);
  FamilyParams params;
  switch (family) {
    case Family::torus:
      for (auto d : config.get_ints("graph.dims")) {
        if (d < 0 || d > std::numeric_limits<int>::max()) throw PreconditionError("graph.dims out of range");
        params.dims.push_back(static_cast<int>(d));
      }
      break;
    case Family::cycle: params.dims = {int_param("graph.length")}; break;
    case Family::tree_ball:
      params.degree = int_param("graph.degree");
      params.radius = int_param("graph.radius");
      break;
    case Family::lamplighter_segment: params.length = int_param("graph.length"); break;
    case Family::custom: throw ParseError("use graph.family = edge_list with graph.path for custom graphs");
  }
  return build_family(family, params, cap);
}

json graph_description(const Graph& g) {
  const auto& params = g.params();
  json p = json::object();
  switch (g.family()) {
    case Family::torus: p["dims"] = params.dims; break;
    case Family::cycle: p["length"] = params.dims.front(); break;
    case Family::tree_ball:
      p["degree"] = params.degree;
      p["radius"] = params.radius;
      break;
    case Family::lamplighter_segment: p["length"] = params.length; break;
    case Family::custom:
      p["vertices"] = g.vertex_count();
      p["edges"] = g.edge_count();
      break;
  }
  return {{"family", to_string(g.family())}, {"params", p}};
}

}  // namespace perclab::cli
