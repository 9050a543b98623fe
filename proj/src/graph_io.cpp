#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "robudom/graph.hpp"

namespace robudom {

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
  long long n = 0;
  long long m = 0;
  if (!(in >> n >> m) || n <= 0 || m < 0) {
    throw std::invalid_argument("edge list: expected header 'n m' with n > 0, m >= 0");
  }
  if (n > 0xffffffffLL) throw std::invalid_argument("edge list: n too large");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = 0;
    long long v = 0;
    if (!(in >> u >> v)) {
      throw std::invalid_argument("edge list: expected " + std::to_string(m) +
                                  " edges, got " + std::to_string(i));
    }
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw std::invalid_argument("edge list: vertex out of range on edge " + std::to_string(i));
    }
    if (u > v) std::swap(u, v);
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  std::string trailing;
  if (in >> trailing) throw std::invalid_argument("edge list: trailing data '" + trailing + "'");
  return Graph::from_edges(static_cast<Vertex>(n), edges);
}

}  // namespace robudom
