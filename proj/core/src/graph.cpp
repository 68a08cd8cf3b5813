#include "perclab/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <sstream>
#include <string>

#include "perclab/error.hpp"

namespace perclab {

const char* to_string(Family family) {
  switch (family) {
    case Family::torus: return "torus";
    case Family::tree_ball: return "tree_ball";
    case Family::lamplighter_segment: return "lamplighter_segment";
    case Family::cycle: return "cycle";
    case Family::custom: return "custom";
  }
  return "custom";
}

Family family_from_string(const std::string& name) {
  if (name == "torus") return Family::torus;
  if (name == "tree_ball" || name == "tree") return Family::tree_ball;
  if (name == "lamplighter_segment" || name == "lamplighter") return Family::lamplighter_segment;
  if (name == "cycle") return Family::cycle;
  if (name == "custom") return Family::custom;
  throw ParseError("unknown graph family '" + name + "'");
}

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges, Family family, FamilyParams params)
    : family_(family), params_(std::move(params)) {
  if (vertex_count == 0) throw PreconditionError("graph must have at least one vertex");
  if (vertex_count > std::numeric_limits<Vertex>::max()) {
    throw PreconditionError("vertex count exceeds 32-bit ids");
  }
  for (auto& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw PreconditionError("edge endpoint out of range");
    }
    if (e.u == e.v) throw PreconditionError("self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw PreconditionError("duplicate edge");
  }
  edges_ = std::move(edges);

  std::vector<std::size_t> degree(vertex_count, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  incidence_.resize(offsets_.back());

  // Edges are sorted by (u, v). Filling lower neighbours first (from edges where v is the
  // larger endpoint) and then upper neighbours keeps each adjacency row sorted.
  std::vector<std::size_t> cursor(vertex_count);
  {
    // Lower neighbours of v are the u's of edges (u, v), visited in u order.
    std::vector<std::size_t> lower_count(vertex_count, 0);
    for (const auto& e : edges_) ++lower_count[e.v];
    std::vector<std::size_t> lower_cursor(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) lower_cursor[v] = offsets_[v];
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      adjacency_[lower_cursor[e.v]] = e.u;
      incidence_[lower_cursor[e.v]] = id;
      ++lower_cursor[e.v];
    }
    for (std::size_t v = 0; v < vertex_count; ++v) cursor[v] = offsets_[v] + lower_count[v];
  }
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    adjacency_[cursor[e.u]] = e.v;
    incidence_[cursor[e.u]] = id;
    ++cursor[e.u];
  }

  min_degree_ = *std::min_element(degree.begin(), degree.end());
  max_degree_ = *std::max_element(degree.begin(), degree.end());

  const auto dist = bfs_distances(*this, Vertex{0});
  if (std::find(dist.begin(), dist.end(), -1) != dist.end()) {
    throw PreconditionError("graph is not connected");
  }
}

std::string Graph::describe() const {
  std::ostringstream out;
  out << to_string(family_);
  switch (family_) {
    case Family::torus:
    case Family::cycle:
      out << '[';
      for (std::size_t i = 0; i < params_.dims.size(); ++i) {
        if (i) out << ',';
        out << params_.dims[i];
      }
      out << ']';
      break;
    case Family::tree_ball: out << "(d=" << params_.degree << ",r=" << params_.radius << ')'; break;
    case Family::lamplighter_segment: out << "(L=" << params_.length << ')'; break;
    case Family::custom: out << "(n=" << vertex_count() << ",m=" << edge_count() << ')'; break;
  }
  return out.str();
}

void Graph::require_vertex(Vertex v) const {
  if (!is_valid_vertex(v)) {
    throw PreconditionError("vertex " + std::to_string(v) + " out of range for " + describe());
  }
}

bool Graph::is_vertex_transitive() const noexcept {
  return family_ == Family::torus || family_ == Family::cycle;
}

bool Graph::stands_in_for_transitive() const noexcept { return family_ != Family::custom; }

Vertex Graph::representative() const noexcept {
  if (family_ == Family::lamplighter_segment) return static_cast<Vertex>(params_.length / 2);
  return 0;
}

int Graph::interior_radius(Vertex v) const {
  require_vertex(v);
  switch (family_) {
    case Family::torus:
    case Family::cycle: {
      const int side = *std::min_element(params_.dims.begin(), params_.dims.end());
      return (side - 1) / 2;
    }
    case Family::tree_ball: return params_.radius - tree_depth(*this, v);
    case Family::lamplighter_segment: {
      const int pos = static_cast<int>(v % static_cast<Vertex>(params_.length));
      return std::min(pos, params_.length - 1 - pos);
    }
    case Family::custom: return kUnboundedRadius;
  }
  return 0;
}

Domain::Domain(std::size_t vertex_count, std::vector<Vertex> members)
    : members_(std::move(members)), indicator_(vertex_count, 0) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw PreconditionError("domain members must be distinct");
  }
  for (Vertex v : members_) {
    if (v >= vertex_count) throw PreconditionError("domain member out of range");
    indicator_[v] = 1;
  }
}

Domain Domain::all(std::size_t vertex_count) {
  std::vector<Vertex> members(vertex_count);
  std::iota(members.begin(), members.end(), Vertex{0});
  return Domain(vertex_count, std::move(members));
}

double pi_mass(const Graph& g, const Domain& domain) {
  double mass = 0.0;
  for (Vertex v : domain.members()) mass += g.pi(v);
  return mass;
}

double degree_ratio(const Graph& g, const Domain& domain) {
  if (domain.empty()) throw PreconditionError("degree ratio of an empty domain");
  std::size_t lo = g.degree(domain.members().front());
  std::size_t hi = lo;
  for (Vertex v : domain.members()) {
    lo = std::min(lo, g.degree(v));
    hi = std::max(hi, g.degree(v));
  }
  return static_cast<double>(hi) / static_cast<double>(lo);
}

std::size_t edge_boundary(const Graph& g, const Domain& domain) {
  std::size_t count = 0;
  for (Vertex v : domain.members()) {
    for (Vertex w : g.neighbors(v)) count += domain.contains(w) ? 0 : 1;
  }
  return count;
}

std::vector<Domain> components(const Graph& g, const Domain& domain) {
  std::vector<Domain> result;
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  std::vector<Vertex> stack;
  for (Vertex root : domain.members()) {
    if (seen[root]) continue;
    std::vector<Vertex> members;
    stack.push_back(root);
    seen[root] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (!seen[w] && domain.contains(w)) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    result.emplace_back(g.vertex_count(), std::move(members));
  }
  return result;
}

bool is_connected(const Graph& g, const Domain& domain) {
  return !domain.empty() && components(g, domain).size() == 1;
}

std::size_t default_vertex_cap() {
  constexpr std::size_t kDefault = 2'000'000;
  const char* env = std::getenv("PERCLAB_MAX_VERTICES");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || value == 0) {
    throw ParseError(std::string("PERCLAB_MAX_VERTICES is not a positive integer: ") + env);
  }
  return static_cast<std::size_t>(value);
}

namespace {

void check_cap(std::size_t requested, std::size_t cap, const std::string& what) {
  if (requested > cap) {
    throw PreconditionError(what + " needs " + std::to_string(requested) +
                            " vertices, above the cap of " + std::to_string(cap));
  }
}

}  // namespace

Graph build_torus(const std::vector<int>& dims, std::size_t max_vertices) {
  if (dims.empty() || dims.size() > 4) throw PreconditionError("torus needs 1 to 4 dimensions");
  std::size_t n = 1;
  for (int side : dims) {
    if (side < 3) throw PreconditionError("torus side must be at least 3 (got " + std::to_string(side) + ")");
    n *= static_cast<std::size_t>(side);
    check_cap(n, max_vertices, "torus");
  }

  // stride[i] is the id increment of coordinate i; the last coordinate varies fastest.
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t i = dims.size() - 1; i-- > 0;) stride[i] = stride[i + 1] * dims[i + 1];

  std::vector<Edge> edges;
  edges.reserve(n * dims.size());
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const std::size_t coord = (v / stride[i]) % dims[i];
      const std::size_t next = coord + 1 == static_cast<std::size_t>(dims[i]) ? 0 : coord + 1;
      const std::size_t w = v - coord * stride[i] + next * stride[i];
      edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(w)});
    }
  }
  const Family family = dims.size() == 1 ? Family::cycle : Family::torus;
  return Graph(n, std::move(edges), family, FamilyParams{.dims = dims});
}

Graph build_cycle(int length, std::size_t max_vertices) {
  return build_torus({length}, max_vertices);
}

Graph build_tree_ball(int degree, int radius, std::size_t max_vertices) {
  if (degree < 3) throw PreconditionError("tree degree must be at least 3");
  if (radius < 1) throw PreconditionError("tree radius must be at least 1");
  // 1 + d * sum_{h<r} (d-1)^h, accumulated with overflow guard.
  std::size_t n = 1;
  std::size_t level = static_cast<std::size_t>(degree);
  for (int h = 1; h <= radius; ++h) {
    n += level;
    check_cap(n, max_vertices, "tree ball");
    if (h < radius) {
      if (level > max_vertices) check_cap(max_vertices + 1, max_vertices, "tree ball");
      level *= static_cast<std::size_t>(degree - 1);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::size_t next = 1;
  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (int h = 0; h < radius; ++h) {
    for (std::size_t v = level_begin; v < level_end; ++v) {
      const int children = h == 0 ? degree : degree - 1;
      for (int c = 0; c < children; ++c) {
        edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(next++)});
      }
    }
    level_begin = level_end;
    level_end = next;
  }
  FamilyParams params;
  params.degree = degree;
  params.radius = radius;
  return Graph(n, std::move(edges), Family::tree_ball, std::move(params));
}

Graph build_lamplighter_segment(int length, std::size_t max_vertices) {
  if (length < 1 || length > 20) throw PreconditionError("lamplighter length must be in [1, 20]");
  const std::size_t configs = std::size_t{1} << length;
  const std::size_t n = configs * static_cast<std::size_t>(length);
  check_cap(n, max_vertices, "lamplighter segment");
  const auto id = [length](std::size_t lamps, int pos) {
    return static_cast<Vertex>(lamps * static_cast<std::size_t>(length) + static_cast<std::size_t>(pos));
  };
  std::vector<Edge> edges;
  edges.reserve(n * 2);
  for (std::size_t lamps = 0; lamps < configs; ++lamps) {
    for (int pos = 0; pos < length; ++pos) {
      const std::size_t toggled = lamps ^ (std::size_t{1} << pos);
      if (toggled > lamps) edges.push_back({id(lamps, pos), id(toggled, pos)});
      if (pos + 1 < length) edges.push_back({id(lamps, pos), id(lamps, pos + 1)});
    }
  }
  FamilyParams params;
  params.length = length;
  return Graph(n, std::move(edges), Family::lamplighter_segment, std::move(params));
}

Graph build_path(int length) {
  if (length < 1) throw PreconditionError("path needs at least one vertex");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < length; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1)});
  }
  return Graph(static_cast<std::size_t>(length), std::move(edges));
}

Graph build_family(Family family, const FamilyParams& params, std::size_t max_vertices) {
  switch (family) {
    case Family::torus:
    case Family::cycle:
      if (family == Family::cycle && params.dims.size() != 1) {
        throw PreconditionError("cycle takes exactly one side length");
      }
      return build_torus(params.dims, max_vertices);
    case Family::tree_ball: return build_tree_ball(params.degree, params.radius, max_vertices);
    case Family::lamplighter_segment: return build_lamplighter_segment(params.length, max_vertices);
    case Family::custom: throw PreconditionError("custom graphs are read from an edge list");
  }
  throw PreconditionError("unknown family");
}

int tree_depth(const Graph& g, Vertex v) {
  if (g.family() != Family::tree_ball) throw PreconditionError("tree_depth needs a tree ball");
  g.require_vertex(v);
  const auto d = static_cast<std::size_t>(g.params().degree);
  std::size_t level_end = 1;
  std::size_t level = d;
  int depth = 0;
  while (v >= level_end) {
    level_end += level;
    level *= d - 1;
    ++depth;
  }
  return depth;
}

std::vector<int> bfs_distances(const Graph& g, const Domain& sources, int max_radius) {
  std::vector<int> dist(g.vertex_count(), -1);
  std::vector<Vertex> frontier(sources.members().begin(), sources.members().end());
  for (Vertex s : frontier) {
    g.require_vertex(s);
    dist[s] = 0;
  }
  std::vector<Vertex> next;
  for (int r = 0; r < max_radius && !frontier.empty(); ++r) {
    next.clear();
    for (Vertex v : frontier) {
      for (Vertex w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = r + 1;
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

std::vector<int> bfs_distances(const Graph& g, Vertex source, int max_radius) {
  return bfs_distances(g, Domain::single(g.vertex_count(), source), max_radius);
}

int graph_distance(const Graph& g, Vertex u, Vertex v) {
  g.require_vertex(u);
  g.require_vertex(v);
  if (u == v) return 0;
  return bfs_distances(g, u)[v];
}

Domain ball(const Graph& g, Vertex center, int radius) {
  return ball(g, Domain::single(g.vertex_count(), center), radius);
}

Domain ball(const Graph& g, const Domain& centers, int radius) {
  if (radius < 0) throw PreconditionError("ball radius must be nonnegative");
  const auto dist = bfs_distances(g, centers, radius);
  std::vector<Vertex> members;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] >= 0) members.push_back(static_cast<Vertex>(v));
  }
  return Domain(g.vertex_count(), std::move(members));
}

int eccentricity(const Graph& g, Vertex v) {
  const auto dist = bfs_distances(g, v);
  return *std::max_element(dist.begin(), dist.end());
}

int diameter(const Graph& g) {
  int best = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) best = std::max(best, eccentricity(g, v));
  return best;
}

}  // namespace perclab
