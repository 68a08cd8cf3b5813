#pragma once

// Dense linear-algebra oracles. They read only the edge list of a graph and never call the
// library's walk or spectral code.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "perclab/graph.hpp"

namespace oracle {

inline std::vector<int> degrees(const perclab::Graph& g) {
  std::vector<int> deg(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

inline Eigen::MatrixXd transition_matrix(const perclab::Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const auto deg = degrees(g);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    p(e.u, e.v) = 1.0 / deg[e.u];
    p(e.v, e.u) = 1.0 / deg[e.v];
  }
  return p;
}

// P restricted to rows and columns in `members`.
inline Eigen::MatrixXd killed_matrix(const perclab::Graph& g, const std::vector<perclab::Vertex>& members) {
  const auto full = transition_matrix(g);
  const auto m = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) k(i, j) = full(members[i], members[j]);
  }
  return k;
}

// 1 - rho(P_A)^2 from the symmetrised killed matrix D^{1/2} P_A D^{-1/2}.
inline double killed_gap(const perclab::Graph& g, const std::vector<perclab::Vertex>& members) {
  const auto deg = degrees(g);
  const auto m = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      for (auto w : g.neighbors(members[i])) {
        if (w == members[j]) s(i, j) = 1.0 / std::sqrt(static_cast<double>(deg[members[i]]) * deg[members[j]]);
      }
    }
  }
  if (m == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double rho = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  return 1.0 - rho * rho;
}

struct SubsetValue {
  double mass;
  double value;
};

inline std::vector<perclab::Vertex> members_of(std::uint32_t mask) {
  std::vector<perclab::Vertex> out;
  for (perclab::Vertex v = 0; mask != 0; ++v, mask >>= 1) {
    if (mask & 1U) out.push_back(v);
  }
  return out;
}

// Every nonempty subset with its mass and killed gap.
inline std::vector<SubsetValue> all_subset_gaps(const perclab::Graph& g) {
  const auto deg = degrees(g);
  std::vector<SubsetValue> out;
  const std::uint32_t full = (1U << g.vertex_count()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const auto members = members_of(mask);
    double mass = 0.0;
    for (auto v : members) mass += deg[v];
    out.push_back({mass, killed_gap(g, members)});
  }
  return out;
}

// Every nonempty subset with its mass and boundary ratio |dB| / pi(B).
inline std::vector<SubsetValue> all_subset_boundaries(const perclab::Graph& g) {
  const auto deg = degrees(g);
  std::vector<SubsetValue> out;
  const std::uint32_t full = (1U << g.vertex_count()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double mass = 0.0;
    for (auto v : members_of(mask)) mass += deg[v];
    int boundary = 0;
    for (const auto& e : g.edges()) {
      const bool a = (mask >> e.u) & 1U;
      const bool b = (mask >> e.v) & 1U;
      if (a != b) ++boundary;
    }
    out.push_back({mass, boundary / mass});
  }
  return out;
}

// inf{value : mass <= x}, 1 when no subset qualifies.
inline double profile_at(const std::vector<SubsetValue>& subsets, double x) {
  double best = 1.0;
  bool any = false;
  for (const auto& s : subsets) {
    if (s.mass <= x) {
      best = any ? std::min(best, s.value) : s.value;
      any = true;
    }
  }
  return any ? best : 1.0;
}

}  // namespace oracle
