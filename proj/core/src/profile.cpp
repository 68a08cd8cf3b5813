#include "perclab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <unordered_map>

#include "perclab/error.hpp"

namespace perclab {

const char* to_string(ProfileMode mode) {
  switch (mode) {
    case ProfileMode::exhaustive: return "exhaustive";
    case ProfileMode::ball_family: return "ball_family";
    case ProfileMode::analytic: return "analytic";
  }
  return "exhaustive";
}

ProfileMode profile_mode_from_string(const std::string& name) {
  if (name == "exhaustive") return ProfileMode::exhaustive;
  if (name == "ball_family") return ProfileMode::ball_family;
  if (name == "analytic") return ProfileMode::analytic;
  throw ParseError("unknown profile mode '" + name + "'");
}

SpectralProfile SpectralProfile::from_sets(ProfileKind kind, ProfileMode mode, std::vector<SetValue> sets,
                                           double min_pi, std::string graph_ref, bool certified_lower_bound) {
  SpectralProfile profile;
  profile.kind_ = kind;
  profile.mode_ = mode;
  profile.certified_ = certified_lower_bound;
  profile.min_pi_ = min_pi;
  profile.graph_ref_ = std::move(graph_ref);
  profile.set_count_ = sets.size();
  std::sort(sets.begin(), sets.end(), [](const SetValue& a, const SetValue& b) {
    return a.mass != b.mass ? a.mass < b.mass : a.value < b.value;
  });
  double running = std::numeric_limits<double>::infinity();
  for (const auto& s : sets) {
    if (s.value < running) {
      running = s.value;
      if (!profile.steps_.empty() && profile.steps_.back().threshold == s.mass) {
        profile.steps_.back().value = running;
      } else {
        profile.steps_.push_back({s.mass, running});
      }
    }
  }
  profile.description_ = std::string(to_string(mode)) + " over " + std::to_string(sets.size()) + " sets";
  return profile;
}

SpectralProfile SpectralProfile::from_function(std::function<double(double)> function, std::string graph_ref,
                                               std::string description, bool certified_lower_bound) {
  SpectralProfile profile;
  profile.kind_ = ProfileKind::spectral;
  profile.mode_ = ProfileMode::analytic;
  profile.certified_ = certified_lower_bound;
  profile.function_ = std::move(function);
  profile.graph_ref_ = std::move(graph_ref);
  profile.description_ = std::move(description);
  return profile;
}

double SpectralProfile::at(double threshold) const {
  if (function_) return function_(threshold);
  if (threshold < min_pi_) return 1.0;
  const auto it = std::upper_bound(steps_.begin(), steps_.end(), threshold,
                                   [](double t, const ProfilePoint& p) { return t < p.threshold; });
  if (it == steps_.begin()) return 1.0;
  return std::prev(it)->value;
}

std::vector<ProfilePoint> SpectralProfile::evaluate(std::span<const double> thresholds) const {
  std::vector<ProfilePoint> points;
  points.reserve(thresholds.size());
  for (double t : thresholds) points.push_back({t, at(t)});
  return points;
}

double ProfileModel::operator()(double x) const {
  if (x < 2.0 * max_pi) return 1.0;
  const double log_term = std::log(x / max_pi);
  return std::min(1.0, c * std::pow(log_term, -alpha));
}

namespace {

using Mask = std::uint32_t;

struct Window {
  std::vector<Vertex> vertices;
  std::vector<Mask> adjacency;  // neighbours inside the window
  std::vector<double> pi;
  std::vector<std::size_t> outside_degree;  // neighbours outside the window
};

Window make_window(const Graph& g, const ProfileOptions& options) {
  Window w;
  if (options.window.empty()) {
    if (g.vertex_count() > kExhaustiveVertexCap) {
      throw PreconditionError("exhaustive profile needs at most " + std::to_string(kExhaustiveVertexCap) +
                              " vertices; " + g.describe() + " has " + std::to_string(g.vertex_count()));
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) w.vertices.push_back(v);
  } else {
    w.vertices = options.window;
    std::sort(w.vertices.begin(), w.vertices.end());
    w.vertices.erase(std::unique(w.vertices.begin(), w.vertices.end()), w.vertices.end());
    if (w.vertices.size() > kExhaustiveVertexCap) {
      throw PreconditionError("exhaustive window exceeds " + std::to_string(kExhaustiveVertexCap) + " vertices");
    }
  }
  const std::size_t m = w.vertices.size();
  w.adjacency.assign(m, 0);
  w.outside_degree.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    g.require_vertex(w.vertices[i]);
    w.pi.push_back(g.pi(w.vertices[i]));
    for (Vertex nb : g.neighbors(w.vertices[i])) {
      const auto it = std::lower_bound(w.vertices.begin(), w.vertices.end(), nb);
      if (it != w.vertices.end() && *it == nb) {
        w.adjacency[i] |= Mask{1} << (it - w.vertices.begin());
      } else {
        ++w.outside_degree[i];
      }
    }
  }
  return w;
}

Mask lowest_component(const Window& w, Mask set) {
  Mask component = set & (~set + 1);
  Mask frontier = component;
  while (frontier != 0) {
    Mask grown = 0;
    for (Mask f = frontier; f != 0; f &= f - 1) grown |= w.adjacency[std::countr_zero(f)];
    grown &= set & ~component;
    component |= grown;
    frontier = grown;
  }
  return component;
}

Domain mask_domain(const Graph& g, const Window& w, Mask set) {
  std::vector<Vertex> members;
  for (Mask f = set; f != 0; f &= f - 1) members.push_back(w.vertices[std::countr_zero(f)]);
  return Domain(g.vertex_count(), std::move(members));
}

}  // namespace

SpectralProfile spectral_profile(const Graph& g, ProfileMode mode, const ProfileOptions& options) {
  switch (mode) {
    case ProfileMode::exhaustive: {
      const Window w = make_window(g, options);
      const std::size_t m = w.vertices.size();
      const Mask full = static_cast<Mask>((std::size_t{1} << m) - 1);
      std::unordered_map<Mask, double> rho_sq_cache;
      std::vector<SetValue> sets;
      sets.reserve(full);
      for (Mask set = 1; set <= full && set != 0; ++set) {
        double mass = 0.0;
        for (Mask f = set; f != 0; f &= f - 1) mass += w.pi[std::countr_zero(f)];
        double rho_sq = 0.0;
        for (Mask rest = set; rest != 0;) {
          const Mask component = lowest_component(w, rest);
          rest &= ~component;
          auto it = rho_sq_cache.find(component);
          if (it == rho_sq_cache.end()) {
            const double value = lambda_a(g, mask_domain(g, w, component), options.lambda).rho_sq;
            it = rho_sq_cache.emplace(component, value).first;
          }
          rho_sq = std::max(rho_sq, it->second);
        }
        sets.push_back({mass, std::clamp(1.0 - rho_sq, 0.0, 1.0)});
        if (set == full) break;
      }
      const bool covers_graph = w.vertices.size() == g.vertex_count();
      auto profile = SpectralProfile::from_sets(ProfileKind::spectral, ProfileMode::exhaustive, std::move(sets),
                                                static_cast<double>(g.min_degree()), g.describe(), covers_graph);
      return profile;
    }
    case ProfileMode::ball_family: {
      std::set<std::vector<Vertex>> seen;
      std::vector<SetValue> sets;
      const auto add = [&](const Domain& d) {
        std::vector<Vertex> key(d.members().begin(), d.members().end());
        if (!seen.insert(key).second) return;
        sets.push_back({pi_mass(g, d), lambda_a(g, d, options.lambda).value});
      };
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const auto dist = bfs_distances(g, v);
        const int ecc = *std::max_element(dist.begin(), dist.end());
        for (int r = 0; r <= ecc; ++r) add(ball(g, v, r));
      }
      // Connected sets up to the size cap, each generated once from its smallest vertex.
      std::vector<Vertex> current;
      std::function<void(std::vector<Vertex>)> grow = [&](std::vector<Vertex> frontier) {
        add(Domain(g.vertex_count(), current));
        if (current.size() >= options.max_connected_size) return;
        while (!frontier.empty()) {
          const Vertex next = frontier.back();
          frontier.pop_back();
          std::vector<Vertex> extended = frontier;
          for (Vertex nb : g.neighbors(next)) {
            if (nb <= current.front()) continue;
            if (std::find(current.begin(), current.end(), nb) != current.end()) continue;
            if (std::find(extended.begin(), extended.end(), nb) != extended.end()) continue;
            bool adjacent_to_current = false;
            for (Vertex c : current) {
              const auto nbrs = g.neighbors(c);
              if (std::binary_search(nbrs.begin(), nbrs.end(), nb)) adjacent_to_current = true;
            }
            if (!adjacent_to_current) extended.push_back(nb);
          }
          current.push_back(next);
          grow(extended);
          current.pop_back();
        }
      };
      if (options.max_connected_size >= 1) {
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
          current = {v};
          std::vector<Vertex> frontier;
          for (Vertex nb : g.neighbors(v)) {
            if (nb > v) frontier.push_back(nb);
          }
          grow(frontier);
        }
      }
      auto profile = SpectralProfile::from_sets(ProfileKind::spectral, ProfileMode::ball_family, std::move(sets),
                                                static_cast<double>(g.min_degree()), g.describe(), false);
      return profile;
    }
    case ProfileMode::analytic:
      throw PreconditionError("analytic profiles are built from a ProfileModel");
  }
  throw PreconditionError("unknown profile mode");
}

SpectralProfile analytic_profile(const Graph& g, const ProfileModel& model) {
  if (model.alpha < 0.0 || model.c <= 0.0 || model.max_pi <= 0.0) {
    throw PreconditionError("profile model needs alpha >= 0, c > 0, max_pi > 0");
  }
  return SpectralProfile::from_function(
      model, g.describe(),
      "model c=" + format_double(model.c) + " alpha=" + format_double(model.alpha) +
          " (user-supplied lower bound)",
      true);
}

SpectralProfile exact_cycle_profile(const Graph& g) {
  if (g.family() != Family::cycle) throw PreconditionError("exact_cycle_profile needs a cycle");
  const double n = static_cast<double>(g.vertex_count());
  return SpectralProfile::from_function(
      [n](double x) {
        if (x < 2.0) return 1.0;
        if (x >= 2.0 * n) return 0.0;
        const double arc = std::floor(x / 2.0);
        const double s = std::sin(std::numbers::pi / (arc + 1.0));
        return s * s;
      },
      g.describe(), "exact cycle profile", true);
}

SpectralProfile iso_profile(const Graph& g, const ProfileOptions& options) {
  const Window w = make_window(g, options);
  const std::size_t m = w.vertices.size();
  const Mask full = static_cast<Mask>((std::size_t{1} << m) - 1);
  std::vector<SetValue> sets;
  sets.reserve(full);
  for (Mask set = 1; set <= full && set != 0; ++set) {
    double mass = 0.0;
    std::size_t boundary = 0;
    for (Mask f = set; f != 0; f &= f - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(f));
      mass += w.pi[i];
      boundary += w.outside_degree[i] + static_cast<std::size_t>(std::popcount(w.adjacency[i] & ~set));
    }
    sets.push_back({mass, static_cast<double>(boundary) / mass});
    if (set == full) break;
  }
  return SpectralProfile::from_sets(ProfileKind::isoperimetric, ProfileMode::exhaustive, std::move(sets),
                                    static_cast<double>(g.min_degree()), g.describe(),
                                    w.vertices.size() == g.vertex_count());
}

std::vector<double> all_thresholds(const Graph& g) {
  std::vector<double> thresholds;
  for (auto x = static_cast<long>(g.min_degree()); x <= static_cast<long>(g.total_pi()); ++x) {
    thresholds.push_back(static_cast<double>(x));
  }
  return thresholds;
}

CheegerReport cheeger_check(const SpectralProfile& spectral, const SpectralProfile& iso,
                            std::span<const double> thresholds, double slack) {
  if (spectral.kind() != ProfileKind::spectral || iso.kind() != ProfileKind::isoperimetric) {
    throw PreconditionError("cheeger_check needs a spectral and an isoperimetric profile");
  }
  if (spectral.mode() != ProfileMode::exhaustive || !spectral.certified_lower_bound() ||
      iso.mode() != ProfileMode::exhaustive || !iso.certified_lower_bound()) {
    throw PreconditionError("the Cheeger sandwich is asserted only on exhaustive whole-graph profiles");
  }
  if (spectral.graph_ref() != iso.graph_ref()) throw PreconditionError("profiles belong to different graphs");

  CheegerReport report;
  double worst_upper = -std::numeric_limits<double>::infinity();
  double worst_lower = -std::numeric_limits<double>::infinity();
  for (double x : thresholds) {
    CheegerRow row;
    row.threshold = x;
    row.lambda = spectral.at(x);
    row.phi = iso.at(x);
    row.lower_holds = 0.25 * row.phi * row.phi <= row.lambda + slack;
    row.upper_holds = row.lambda <= row.phi + slack;
    row.upper_factor_two_holds = row.lambda <= 2.0 * row.phi + slack;
    report.lower_violations += row.lower_holds ? 0 : 1;
    report.upper_violations += row.upper_holds ? 0 : 1;
    report.upper_factor_two_violations += row.upper_factor_two_holds ? 0 : 1;
    worst_upper = std::max(worst_upper, row.lambda - row.phi);
    worst_lower = std::max(worst_lower, 0.25 * row.phi * row.phi - row.lambda);
    report.rows.push_back(row);
  }

  auto& s = report.summary;
  s.check = "cheeger_sandwich";
  std::string inputs = spectral.graph_ref();
  for (double x : thresholds) inputs += "," + format_double(x);
  s.inputs_digest = digest(inputs);
  // lhs/rhs: the largest excess Lambda - Phi* against zero.
  s.lhs = worst_upper;
  s.rhs = 0.0;
  s.slack = slack;
  s.pass = report.lower_violations == 0 && report.upper_violations == 0;
  s.details = {
      {"graph", spectral.graph_ref()},
      {"thresholds", thresholds.size()},
      {"lower_violations", report.lower_violations},
      {"upper_violations", report.upper_violations},
      {"upper_factor_two_violations", report.upper_factor_two_violations},
      {"max_lower_excess", worst_lower},
      {"max_upper_excess", worst_upper},
  };
  return report;
}

std::vector<SetCheegerRow> set_cheeger_data(const Graph& g, std::span<const Domain> subsets) {
  std::vector<SetCheegerRow> rows;
  for (const auto& d : subsets) {
    if (d.empty()) throw PreconditionError("cheeger data needs nonempty subsets");
    rows.push_back({std::vector<Vertex>(d.members().begin(), d.members().end()), boundary_ratio(g, d),
                    lambda_a(g, d).value});
  }
  return rows;
}

void write_profile_csv(std::ostream& out, const SpectralProfile& profile, std::span<const double> thresholds) {
  out << "L,lambda,mode\n";
  for (const auto& p : profile.evaluate(thresholds)) {
    out << format_double(p.threshold) << ',' << format_double(p.value) << ',' << to_string(profile.mode()) << '\n';
  }
}

}  // namespace perclab
