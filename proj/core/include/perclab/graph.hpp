#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace perclab {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr int kUnboundedRadius = std::numeric_limits<int>::max();

enum class Family { torus, tree_ball, lamplighter_segment, cycle, custom };

const char* to_string(Family family);
Family family_from_string(const std::string& name);

// Build parameters. Only the fields relevant to the family are meaningful:
//   torus/cycle: dims (side lengths)
//   tree_ball:   degree, radius
//   lamplighter: length
struct FamilyParams {
  std::vector<int> dims;
  int degree = 0;
  int radius = 0;
  int length = 0;

  bool operator==(const FamilyParams&) const = default;
};

struct Edge {
  Vertex u;
  Vertex v;  // u < v
  bool operator==(const Edge&) const = default;
};

// Immutable simple connected graph in CSR form with stationary measure pi(v) = deg(v).
//
// Vertex encodings:
//   torus/cycle: row-major coordinates, the last coordinate varies fastest.
//   tree_ball:   breadth-first order, root is 0, children of a vertex are contiguous.
//   lamplighter: id = lamps * L + position, bit i of `lamps` is the lamp at site i.
// Edge ids follow the lexicographic order of (u, v) with u < v.
class Graph {
 public:
  // Edges may be given in either orientation. Self-loops, duplicate edges, out-of-range
  // ids and disconnected graphs are rejected with PreconditionError.
  Graph(std::size_t vertex_count, std::vector<Edge> edges, Family family = Family::custom,
        FamilyParams params = {});

  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  // Edge ids aligned with neighbors(v).
  std::span<const EdgeId> incident_edges(Vertex v) const noexcept {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  double pi(Vertex v) const noexcept { return static_cast<double>(degree(v)); }
  const Edge& edge(EdgeId e) const noexcept { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::size_t min_degree() const noexcept { return min_degree_; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  double total_pi() const noexcept { return 2.0 * static_cast<double>(edges_.size()); }

  Family family() const noexcept { return family_; }
  const FamilyParams& params() const noexcept { return params_; }
  std::string describe() const;

  bool is_valid_vertex(Vertex v) const noexcept { return v < vertex_count(); }
  void require_vertex(Vertex v) const;

  // True when the finite graph itself is vertex-transitive (torus, cycle).
  bool is_vertex_transitive() const noexcept;
  // True when the family stands in for an infinite transitive graph (torus, cycle,
  // tree ball, lamplighter window); checks then use representative() as the root.
  bool stands_in_for_transitive() const noexcept;
  // Root used for infinite-graph statements: 0 for torus/cycle/tree, the all-off
  // configuration at the middle site for the lamplighter.
  Vertex representative() const noexcept;
  // Largest k such that walks of length <= k started at v see exactly the infinite
  // target graph. kUnboundedRadius for custom graphs (the graph is its own target).
  int interior_radius(Vertex v) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::vector<EdgeId> incidence_;
  std::vector<Edge> edges_;
  std::size_t min_degree_ = 0;
  std::size_t max_degree_ = 0;
  Family family_;
  FamilyParams params_;
};

// Finite vertex subset with O(1) membership lookup. Members are sorted and distinct.
class Domain {
 public:
  Domain() = default;
  Domain(std::size_t vertex_count, std::vector<Vertex> members);
  static Domain all(std::size_t vertex_count);
  static Domain single(std::size_t vertex_count, Vertex v) { return Domain(vertex_count, {v}); }

  std::span<const Vertex> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t universe() const noexcept { return indicator_.size(); }
  bool contains(Vertex v) const noexcept { return v < indicator_.size() && indicator_[v] != 0; }

  bool operator==(const Domain& other) const { return members_ == other.members_; }

 private:
  std::vector<Vertex> members_;
  std::vector<std::uint8_t> indicator_;
};

double pi_mass(const Graph& g, const Domain& domain);
// max over u, v in D of pi(u)/pi(v).
double degree_ratio(const Graph& g, const Domain& domain);
// Number of edges with exactly one endpoint in the domain.
std::size_t edge_boundary(const Graph& g, const Domain& domain);
// Connected components of the subgraph induced by the domain.
std::vector<Domain> components(const Graph& g, const Domain& domain);
bool is_connected(const Graph& g, const Domain& domain);

// Builders. `max_vertices` defaults to the PERCLAB_MAX_VERTICES environment cap.
std::size_t default_vertex_cap();
Graph build_torus(const std::vector<int>& dims, std::size_t max_vertices = default_vertex_cap());
Graph build_cycle(int length, std::size_t max_vertices = default_vertex_cap());
Graph build_tree_ball(int degree, int radius, std::size_t max_vertices = default_vertex_cap());
Graph build_lamplighter_segment(int length, std::size_t max_vertices = default_vertex_cap());
Graph build_path(int length);
Graph build_family(Family family, const FamilyParams& params,
                   std::size_t max_vertices = default_vertex_cap());

// Depth of a tree-ball vertex (distance to the root), computed from the id.
int tree_depth(const Graph& g, Vertex v);

// Breadth-first distances from a source, -1 where unreached or beyond max_radius.
std::vector<int> bfs_distances(const Graph& g, Vertex source, int max_radius = kUnboundedRadius);
// Multi-source variant: distance to the nearest member of the domain.
std::vector<int> bfs_distances(const Graph& g, const Domain& sources,
                               int max_radius = kUnboundedRadius);
int graph_distance(const Graph& g, Vertex u, Vertex v);
Domain ball(const Graph& g, Vertex center, int radius);
Domain ball(const Graph& g, const Domain& centers, int radius);
int eccentricity(const Graph& g, Vertex v);
int diameter(const Graph& g);

// Plain-text edge list: "vertices <n>" then one "u v" line per edge, u < v, sorted.
void write_edge_list(std::ostream& out, const Graph& g);
std::string to_edge_list(const Graph& g);
Graph read_edge_list(std::istream& in, std::size_t max_vertices = default_vertex_cap());
Graph parse_edge_list(const std::string& text, std::size_t max_vertices = default_vertex_cap());

}  // namespace perclab
