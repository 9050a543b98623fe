#include "robudom/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "robudom/rng.hpp"

namespace robudom {

VertexSet VertexSet::from_unsorted(std::vector<Vertex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  VertexSet s;
  s.members_ = std::move(members);
  return s;
}

VertexSet VertexSet::range(Vertex n) {
  VertexSet s;
  s.members_.resize(n);
  std::iota(s.members_.begin(), s.members_.end(), Vertex{0});
  return s;
}

bool VertexSet::contains(Vertex v) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet::from_unsorted(std::move(out));
}

Graph::Storage choose_storage(Vertex n, double expected_edges) noexcept {
  if (n <= 4096) return Graph::Storage::kDense;
  const double dense_bits = static_cast<double>(n) * static_cast<double>(n);
  return expected_edges * 64.0 >= dense_bits ? Graph::Storage::kDense
                                             : Graph::Storage::kSparse;
}

GraphBuilder::GraphBuilder(Vertex n, Graph::Storage storage) : n_(n), storage_(storage) {
  if (storage_ == Graph::Storage::kDense) {
    words_ = words_for(n);
    rows_.assign(static_cast<std::size_t>(n) * words_, 0);
  } else {
    lists_.resize(n);
  }
}

GraphBuilder::GraphBuilder(const Graph& g) : n_(g.n()), storage_(g.storage()) {
  if (storage_ == Graph::Storage::kDense) {
    words_ = g.words_;
    rows_ = g.rows_;
  } else {
    lists_.resize(n_);
    for (Vertex v = 0; v < n_; ++v) lists_[v] = g.neighbors(v);
  }
}

void GraphBuilder::remove_edge(Vertex u, Vertex v) {
  rows_[static_cast<std::size_t>(u) * words_ + v / kWordBits] &= ~(Word{1} << (v % kWordBits));
  rows_[static_cast<std::size_t>(v) * words_ + u / kWordBits] &= ~(Word{1} << (u % kWordBits));
}

void GraphBuilder::add_edge(Vertex u, Vertex v) {
  if (storage_ == Graph::Storage::kDense) {
    rows_[static_cast<std::size_t>(u) * words_ + v / kWordBits] |= Word{1} << (v % kWordBits);
    rows_[static_cast<std::size_t>(v) * words_ + u / kWordBits] |= Word{1} << (u % kWordBits);
  } else {
    lists_[u].push_back(v);
    lists_[v].push_back(u);
  }
}

Graph GraphBuilder::build() && {
  Graph g;
  g.n_ = n_;
  g.storage_ = storage_;
  g.degree_.assign(n_, 0);
  std::size_t degree_sum = 0;
  if (storage_ == Graph::Storage::kDense) {
    g.words_ = words_;
    g.rows_ = std::move(rows_);
    for (Vertex v = 0; v < n_; ++v) {
      std::size_t d = 0;
      const Word* row = g.rows_.data() + static_cast<std::size_t>(v) * words_;
      for (std::size_t k = 0; k < words_; ++k) d += static_cast<std::size_t>(std::popcount(row[k]));
      g.degree_[v] = static_cast<std::uint32_t>(d);
      degree_sum += d;
    }
  } else {
    g.offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (Vertex v = 0; v < n_; ++v) {
      auto& list = lists_[v];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      g.degree_[v] = static_cast<std::uint32_t>(list.size());
      g.offsets_[v + 1] = g.offsets_[v] + list.size();
      degree_sum += list.size();
    }
    g.targets_.reserve(degree_sum);
    for (auto& list : lists_) {
      g.targets_.insert(g.targets_.end(), list.begin(), list.end());
      std::vector<Vertex>().swap(list);
    }
  }
  g.edge_count_ = degree_sum / 2;
  return g;
}

Graph Graph::from_edges(Vertex n, std::span<const Edge> edges) {
  GraphBuilder b(n, choose_storage(n, static_cast<double>(edges.size())));
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") out of range for n = " + std::to_string(n));
    }
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    b.add_edge(u, v);
  }
  return std::move(b).build();
}

Graph Graph::empty(Vertex n) { return GraphBuilder(n, choose_storage(n, 0)).build(); }

Graph Graph::complete(Vertex n) {
  GraphBuilder b(n, choose_storage(n, 0.5 * n * (n - 1.0)));
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) b.add_edge(u, v);
  return std::move(b).build();
}

Graph Graph::cycle(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n && n >= 3; ++u) {
    const Vertex v = (u + 1) % n;
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return from_edges(n, edges);
}

Graph Graph::path(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return from_edges(n, edges);
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
  if (u >= n_ || v >= n_) return false;
  if (storage_ == Storage::kDense) {
    return (rows_[static_cast<std::size_t>(u) * words_ + v / kWordBits] >> (v % kWordBits)) & 1U;
  }
  const auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
  const auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
  return std::binary_search(first, last, v);
}

std::vector<Vertex> Graph::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  out.reserve(degree_[v]);
  for_each_neighbor(v, [&](Vertex w) { out.push_back(w); });
  return out;
}

void Graph::add_closed_neighborhood(Vertex v, Bitset& covered) const {
  covered.set(v);
  if (storage_ == Storage::kDense) {
    covered.or_words({rows_.data() + static_cast<std::size_t>(v) * words_, words_});
  } else {
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) covered.set(targets_[i]);
  }
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < n_; ++u) {
    for_each_neighbor(u, [&](Vertex v) {
      if (u < v) out.emplace_back(u, v);
    });
  }
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.n_ == b.n_ && a.edge_count_ == b.edge_count_ && a.edges() == b.edges();
}

Graph gen_bernoulli(const GraphSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("gen_bernoulli: n must be positive");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw std::invalid_argument("gen_bernoulli: p must lie in [0, 1]");
  }
  const Vertex n = spec.n;
  const double p = spec.p;
  GraphBuilder b(n, choose_storage(n, p * 0.5 * n * (n - 1.0)));
  if (p == 0.0) return std::move(b).build();

  // Sparse rows skip geometrically; dense rows compare one draw per pair.
  const bool skip = p < 0.25;
  const double log1m_p = std::log1p(-p);
  const std::uint64_t threshold = p < 1.0 ? bernoulli_threshold(p) : 0;
  for (Vertex u = 0; u + 1 < n; ++u) {
    if (p == 1.0) {
      for (Vertex v = u + 1; v < n; ++v) b.add_edge(u, v);
      continue;
    }
    SplitMix64 rng(derive_seed(spec.seed, StreamTag::kEdgeRow, u));
    if (skip) {
      std::uint64_t v = u;
      for (;;) {
        const std::uint64_t gap = geometric_skip(rng, log1m_p);
        if (gap >= n) break;
        v += gap + 1;
        if (v >= n) break;
        b.add_edge(u, static_cast<Vertex>(v));
      }
    } else {
      for (Vertex v = u + 1; v < n; ++v) {
        if (rng() < threshold) b.add_edge(u, v);
      }
    }
  }
  return std::move(b).build();
}

Graph graph_minus(const Graph& g, const ConflictGraph& h) {
  if (g.n() != h.graph.n()) {
    throw std::invalid_argument("graph_minus: vertex counts differ (" + std::to_string(g.n()) +
                                " vs " + std::to_string(h.graph.n()) + ")");
  }
  if (g.storage() == Graph::Storage::kDense) {
    GraphBuilder b(g);
    for (Vertex u = 0; u < h.graph.n(); ++u) {
      h.graph.for_each_neighbor(u, [&](Vertex v) {
        if (u < v) b.remove_edge(u, v);
      });
    }
    return std::move(b).build();
  }
  GraphBuilder b(g.n(), g.storage());
  for (Vertex u = 0; u < g.n(); ++u) {
    g.for_each_neighbor(u, [&](Vertex v) {
      if (u < v && !h.graph.has_edge(u, v)) b.add_edge(u, v);
    });
  }
  return std::move(b).build();
}

bool is_dominating(const Graph& g, const VertexSet& s, bool ignore_isolated) {
  Bitset covered(g.n());
  for (const Vertex v : s) {
    if (v >= g.n()) {
      throw std::invalid_argument("is_dominating: vertex " + std::to_string(v) +
                                  " out of range for n = " + std::to_string(g.n()));
    }
    g.add_closed_neighborhood(v, covered);
  }
  bool ok = true;
  covered.for_each_unset([&](std::size_t v) {
    if (!ignore_isolated || g.degree(static_cast<Vertex>(v)) > 0) ok = false;
  });
  return ok;
}

GraphStats stats(const Graph& g) {
  GraphStats s;
  s.edge_count = g.edge_count();
  for (Vertex u = 0; u < g.n(); ++u) {
    const std::size_t d = g.degree(u);
    s.max_degree = std::max(s.max_degree, d);
    if (d == 0) ++s.isolated_vertex_count;
    if (d == 1) {
      g.for_each_neighbor(u, [&](Vertex v) {
        if (u < v && g.degree(v) == 1) ++s.isolated_edge_count;
      });
    }
  }
  return s;
}

Graph resample_vertex_edges(const Graph& g, Vertex j, double p, std::uint64_t seed) {
  if (j >= g.n()) {
    throw std::invalid_argument("resample_vertex_edges: vertex " + std::to_string(j) +
                                " out of range");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("resample_vertex_edges: bad p");
  GraphBuilder b(g.n(), g.storage());
  for (Vertex u = 0; u < g.n(); ++u) {
    if (u == j) continue;
    g.for_each_neighbor(u, [&](Vertex v) {
      if (u < v && v != j) b.add_edge(u, v);
    });
  }
  SplitMix64 rng(derive_seed(seed, StreamTag::kResample, j));
  for (Vertex v = 0; v < g.n(); ++v) {
    if (v == j) continue;
    if (bernoulli(rng, p)) b.add_edge(j, v);
  }
  return std::move(b).build();
}

std::uint64_t fingerprint(const Graph& g) {
  std::uint64_t h = mix64(g.n());
  for (const auto& [u, v] : g.edges()) {
    h = mix64(h ^ ((static_cast<std::uint64_t>(u) << 32) | v));
  }
  return h;
}

}  // namespace robudom
