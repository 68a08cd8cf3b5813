#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "perclab/error.hpp"
#include "perclab/graph.hpp"

namespace perclab {

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "vertices " << g.vertex_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

namespace {

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("edge list line " + std::to_string(line_no) + ": bad integer '" +
                     std::string(token) + "'");
  }
  return value;
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view line, std::size_t line_no) {
  const auto space = line.find(' ');
  if (space == std::string_view::npos || line.find(' ', space + 1) != std::string_view::npos) {
    throw ParseError("edge list line " + std::to_string(line_no) + ": expected two fields");
  }
  return {line.substr(0, space), line.substr(space + 1)};
}

}  // namespace

// Strict reader for the canonical format: anything write_edge_list would not emit is rejected,
// which keeps text -> graph -> text an identity.
Graph read_edge_list(std::istream& in, std::size_t max_vertices) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("edge list is empty");
  const auto [keyword, count_token] = split_pair(line, line_no);
  if (keyword != "vertices") throw ParseError("edge list must start with 'vertices <n>'");
  const auto n = parse_number<std::size_t>(count_token, line_no);
  if (n > max_vertices) {
    throw PreconditionError("edge list has " + std::to_string(n) + " vertices, above the cap of " +
                            std::to_string(max_vertices));
  }

  std::vector<Edge> edges;
  Edge previous{0, 0};
  while (std::getline(in, line)) {
    ++line_no;
    const auto [a, b] = split_pair(line, line_no);
    const Edge e{parse_number<Vertex>(a, line_no), parse_number<Vertex>(b, line_no)};
    if (e.u >= e.v) throw ParseError("edge list line " + std::to_string(line_no) + ": need u < v");
    if (!edges.empty() && (e.u < previous.u || (e.u == previous.u && e.v <= previous.v))) {
      throw ParseError("edge list line " + std::to_string(line_no) + ": edges not strictly sorted");
    }
    edges.push_back(e);
    previous = e;
  }
  return Graph(n, std::move(edges));
}

Graph parse_edge_list(const std::string& text, std::size_t max_vertices) {
  std::istringstream in(text);
  return read_edge_list(in, max_vertices);
}

}  // namespace perclab
