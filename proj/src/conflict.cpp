#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "robudom/graph.hpp"
#include "robudom/rng.hpp"

namespace robudom {
namespace {

std::uint64_t edge_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

// d-regular circulant, relabeled by a seeded permutation, then mixed by
// degree-preserving double-edge swaps (one attempt per edge).
std::vector<Edge> random_regular_edges(Vertex n, Vertex d, std::uint64_t seed) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * d / 2);
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex k = 1; k <= d / 2; ++k) edges.emplace_back(i, (i + k) % n);
    if (d % 2 == 1 && i < n / 2) edges.emplace_back(i, i + n / 2);
  }

  SplitMix64 rng(derive_seed(seed, StreamTag::kConflict, n, d));
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), Vertex{0});
  for (Vertex i = n; i > 1; --i) {
    std::swap(label[i - 1], label[uniform_below(rng, i)]);
  }
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (auto& [u, v] : edges) {
    u = label[u];
    v = label[v];
    present.insert(edge_key(u, v));
  }

  const std::size_t m = edges.size();
  for (std::size_t attempt = 0; attempt < m && m >= 2; ++attempt) {
    const auto i = static_cast<std::size_t>(uniform_below(rng, m));
    const auto j = static_cast<std::size_t>(uniform_below(rng, m));
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, e] = edges[j];
    if (uniform_below(rng, 2) == 1) std::swap(c, e);
    if (a == c || a == e || b == c || b == e) continue;
    if (present.contains(edge_key(a, e)) || present.contains(edge_key(c, b))) continue;
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, e));
    present.insert(edge_key(a, e));
    present.insert(edge_key(c, b));
    edges[i] = {a, e};
    edges[j] = {c, b};
  }
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
  }
  return edges;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw std::invalid_argument("conflict spec: bad " + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

ConflictGraph make_conflict(Graph graph) {
  ConflictGraph h;
  h.m = graph.edge_count();
  for (Vertex v = 0; v < graph.n(); ++v) {
    h.delta = std::max<Vertex>(h.delta, static_cast<Vertex>(graph.degree(v)));
  }
  h.graph = std::move(graph);
  return h;
}

ConflictGraph build_conflict(const ConflictSpec& kind, Vertex n) {
  if (n == 0) throw std::invalid_argument("build_conflict: n must be positive");
  std::vector<Edge> edges;
  if (const auto* star = std::get_if<conflict::Star>(&kind)) {
    if (star->delta > n - 1) {
      throw std::invalid_argument("star(" + std::to_string(star->delta) +
                                  ") needs more than n = " + std::to_string(n) + " vertices");
    }
    for (Vertex leaf = 1; leaf <= star->delta; ++leaf) edges.emplace_back(0, leaf);
  } else if (const auto* matching = std::get_if<conflict::Matching>(&kind)) {
    if (matching->m > n / 2) {
      throw std::invalid_argument("matching(" + std::to_string(matching->m) +
                                  ") exceeds floor(n/2) for n = " + std::to_string(n));
    }
    for (std::size_t i = 0; i < matching->m; ++i) {
      edges.emplace_back(static_cast<Vertex>(2 * i), static_cast<Vertex>(2 * i + 1));
    }
  } else if (const auto* regular = std::get_if<conflict::RandomRegular>(&kind)) {
    const Vertex d = regular->degree;
    if (d > n - 1) {
      throw std::invalid_argument("random_regular(" + std::to_string(d) +
                                  ") needs d <= n - 1");
    }
    if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) {
      throw std::invalid_argument("random_regular: n * d must be even");
    }
    edges = random_regular_edges(n, d, regular->seed);
  } else if (const auto* list = std::get_if<conflict::EdgeList>(&kind)) {
    edges = list->edges;
  }
  return make_conflict(Graph::from_edges(n, edges));
}

ConflictSpec parse_conflict_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "empty" && rest.empty()) return conflict::Empty{};
  if (head == "star") return conflict::Star{static_cast<Vertex>(parse_count(rest, "star size"))};
  if (head == "matching") return conflict::Matching{parse_count(rest, "matching size")};
  if (head == "regular") {
    const auto second = rest.find(':');
    const auto d = static_cast<Vertex>(parse_count(rest.substr(0, second), "degree"));
    std::uint64_t seed = 0;
    if (second != std::string::npos) seed = parse_count(rest.substr(second + 1), "seed");
    return conflict::RandomRegular{d, seed};
  }
  throw std::invalid_argument("unknown conflict spec '" + text +
                              "' (expected empty, star:D, matching:M, regular:D[:SEED])");
}

std::string to_string(const ConflictSpec& kind) {
  if (std::holds_alternative<conflict::Empty>(kind)) return "empty";
  if (const auto* s = std::get_if<conflict::Star>(&kind)) return "star:" + std::to_string(s->delta);
  if (const auto* mt = std::get_if<conflict::Matching>(&kind)) {
    return "matching:" + std::to_string(mt->m);
  }
  if (const auto* r = std::get_if<conflict::RandomRegular>(&kind)) {
    return "regular:" + std::to_string(r->degree) + ":" + std::to_string(r->seed);
  }
  return "edges:" + std::to_string(std::get<conflict::EdgeList>(kind).edges.size());
}

}  // namespace robudom
