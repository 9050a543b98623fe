#pragma once

// Undirected simple graphs on vertices 0..n-1, the G(n, p) generator, the
// deterministic conflict graphs H, and the set-difference graph G \ H.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "robudom/bitset.hpp"

namespace robudom {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;  // normalized: first < second

// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  // Sorts and deduplicates.
  static VertexSet from_unsorted(std::vector<Vertex> members);
  static VertexSet range(Vertex n);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Vertex v) const noexcept;
  const std::vector<Vertex>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);

class GraphBuilder;

// Immutable once built. Storage is either bit-packed adjacency rows or a
// compressed sorted neighbor list; both answer the same queries.
class Graph {
 public:
  enum class Storage { kDense, kSparse };

  Graph() = default;

  // Out-of-range endpoints and self-loops throw std::invalid_argument;
  // duplicate pairs collapse.
  static Graph from_edges(Vertex n, std::span<const Edge> edges);
  static Graph empty(Vertex n);
  static Graph complete(Vertex n);
  static Graph cycle(Vertex n);
  static Graph path(Vertex n);

  Vertex n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  Storage storage() const noexcept { return storage_; }

  std::size_t degree(Vertex v) const noexcept { return degree_[v]; }
  bool has_edge(Vertex u, Vertex v) const noexcept;

  template <class F>
  void for_each_neighbor(Vertex v, F&& f) const {
    if (storage_ == Storage::kDense) {
      const Word* row = rows_.data() + static_cast<std::size_t>(v) * words_;
      for (std::size_t k = 0; k < words_; ++k) {
        Word w = row[k];
        while (w != 0) {
          f(static_cast<Vertex>(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w))));
          w &= w - 1;
        }
      }
    } else {
      for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) f(targets_[i]);
    }
  }

  std::vector<Vertex> neighbors(Vertex v) const;

  // covered |= N[v].
  void add_closed_neighborhood(Vertex v, Bitset& covered) const;

  // Sorted (u < v) edge list.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  friend class GraphBuilder;

  Vertex n_ = 0;
  std::size_t edge_count_ = 0;
  Storage storage_ = Storage::kSparse;
  std::size_t words_ = 0;           // words per dense row
  std::vector<Word> rows_;          // dense
  std::vector<std::size_t> offsets_;  // sparse CSR
  std::vector<Vertex> targets_;     // sparse CSR
  std::vector<std::uint32_t> degree_;
};

// Bit rows pay n^2 bits; lists pay 64 bits per edge. Dense rows are always
// used up to 4096 vertices.
Graph::Storage choose_storage(Vertex n, double expected_edges) noexcept;

class GraphBuilder {
 public:
  GraphBuilder(Vertex n, Graph::Storage storage);
  // Starts from a copy of g's edges, in g's storage.
  explicit GraphBuilder(const Graph& g);

  Vertex n() const noexcept { return n_; }
  // No validation; callers guarantee u != v and both < n.
  void add_edge(Vertex u, Vertex v);
  // Dense storage only.
  void remove_edge(Vertex u, Vertex v);
  Graph build() &&;

 private:
  Vertex n_;
  Graph::Storage storage_;
  std::size_t words_ = 0;
  std::vector<Word> rows_;
  std::vector<std::vector<Vertex>> lists_;
};

struct GraphSpec {
  Vertex n = 1;
  double p = 0.0;
  std::uint64_t seed = 0;
};

// Each pair {u, v} is present independently with probability p. The pairs
// of row u (v > u) come from the stream keyed by (seed, u).
Graph gen_bernoulli(const GraphSpec& spec);

struct ConflictGraph {
  Graph graph;
  std::size_t m = 0;
  Vertex delta = 0;
};

ConflictGraph make_conflict(Graph graph);

namespace conflict {
struct Empty {};
struct Star {
  Vertex delta;  // center 0, leaves 1..delta
};
struct Matching {
  std::size_t m;  // pairs (2i, 2i+1)
};
struct RandomRegular {
  Vertex degree;
  std::uint64_t seed;
};
struct EdgeList {
  std::vector<Edge> edges;
};
}  // namespace conflict

using ConflictSpec = std::variant<conflict::Empty, conflict::Star, conflict::Matching,
                                  conflict::RandomRegular, conflict::EdgeList>;

ConflictGraph build_conflict(const ConflictSpec& kind, Vertex n);

// Parses "empty", "star:D", "matching:M", "regular:D[:SEED]". Edge-list
// conflicts come from files and are handled by the caller.
ConflictSpec parse_conflict_spec(const std::string& text);
std::string to_string(const ConflictSpec& kind);

// Edge present iff present in g and absent in h.
Graph graph_minus(const Graph& g, const ConflictGraph& h);

// True iff every vertex outside s has a neighbor in s. With ignore_isolated,
// vertices of degree 0 need not be dominated.
bool is_dominating(const Graph& g, const VertexSet& s, bool ignore_isolated = false);

struct GraphStats {
  std::size_t max_degree = 0;
  std::size_t edge_count = 0;
  std::size_t isolated_edge_count = 0;  // both endpoints of degree 1
  std::size_t isolated_vertex_count = 0;
  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

GraphStats stats(const Graph& g);

// All pairs {j, v} are redrawn iid Bernoulli(p) from the stream keyed by
// (seed, j); every other pair keeps its state.
Graph resample_vertex_edges(const Graph& g, Vertex j, double p, std::uint64_t seed);

// Edge-list text: "n m" then one "u v" line per edge, u < v, sorted.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

// 64-bit digest of n and the sorted edge list; equal graphs hash equal.
std::uint64_t fingerprint(const Graph& g);

}  // namespace robudom
