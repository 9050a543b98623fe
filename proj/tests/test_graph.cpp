#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <set>
#include <sstream>

#include "robudom/graph.hpp"
#include "robudom/rng.hpp"

using namespace robudom;

namespace {

Graph in_storage(const Graph& g, Graph::Storage s) {
  GraphBuilder b(g.n(), s);
  for (const Edge& e : g.edges()) b.add_edge(e.first, e.second);
  return std::move(b).build();
}

std::set<Edge> edge_set(const Graph& g) {
  const auto e = g.edges();
  return {e.begin(), e.end()};
}

}  // namespace

TEST_CASE("VertexSet sorts and deduplicates") {
  const VertexSet s = VertexSet::from_unsorted({5, 1, 3, 1, 5});
  CHECK(s.members() == std::vector<Vertex>{1, 3, 5});
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK(set_union(s, VertexSet::from_unsorted({2, 3})).members() ==
        std::vector<Vertex>{1, 2, 3, 5});
  CHECK(VertexSet::range(3).members() == std::vector<Vertex>{0, 1, 2});
}

TEST_CASE("small named graphs") {
  const Graph c5 = Graph::cycle(5);
  CHECK(c5.n() == 5);
  CHECK(c5.edge_count() == 5);
  for (Vertex v = 0; v < 5; ++v) CHECK(c5.degree(v) == 2);
  CHECK(c5.has_edge(4, 0));
  CHECK(Graph::path(4).edge_count() == 3);
  CHECK(Graph::complete(6).edge_count() == 15);
  CHECK(Graph::empty(7).edge_count() == 0);
}

TEST_CASE("from_edges validates and collapses duplicates") {
  const std::vector<Edge> dup = {{0, 1}, {1, 0}, {0, 1}};
  CHECK(Graph::from_edges(3, dup).edge_count() == 1);
  const std::vector<Edge> loop = {{1, 1}};
  CHECK_THROWS_AS(Graph::from_edges(3, loop), std::invalid_argument);
  const std::vector<Edge> out = {{0, 3}};
  CHECK_THROWS_AS(Graph::from_edges(3, out), std::invalid_argument);
}

TEST_CASE("dense and sparse storage answer identically") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = gen_bernoulli({static_cast<Vertex>(30 + seed * 7), 0.15, seed});
    const Graph d = in_storage(g, Graph::Storage::kDense);
    const Graph s = in_storage(g, Graph::Storage::kSparse);
    CHECK(d.storage() == Graph::Storage::kDense);
    CHECK(s.storage() == Graph::Storage::kSparse);
    CHECK(d == s);
    CHECK(d.edges() == s.edges());
    CHECK(fingerprint(d) == fingerprint(s));
    for (Vertex u = 0; u < g.n(); ++u) {
      CHECK(d.degree(u) == s.degree(u));
      CHECK(d.neighbors(u) == s.neighbors(u));
      for (Vertex v = 0; v < g.n(); v += 3) CHECK(d.has_edge(u, v) == s.has_edge(u, v));
    }
  }
}

TEST_CASE("storage choice") {
  CHECK(choose_storage(100, 10) == Graph::Storage::kDense);
  CHECK(choose_storage(5000, 0.3 * 5000 * 4999 / 2) == Graph::Storage::kDense);
  CHECK(choose_storage(5000, 0.001 * 5000 * 4999 / 2) == Graph::Storage::kSparse);
}

TEST_CASE("gen_bernoulli extremes and determinism") {
  CHECK(gen_bernoulli({5, 0.0, 1}).edge_count() == 0);
  CHECK(gen_bernoulli({9, 1.0, 1}) == Graph::complete(9));
  CHECK(gen_bernoulli({1, 0.5, 1}).edge_count() == 0);
  const Graph a = gen_bernoulli({300, 0.1, 42});
  CHECK(a == gen_bernoulli({300, 0.1, 42}));
  CHECK_FALSE(a == gen_bernoulli({300, 0.1, 43}));
  CHECK_THROWS_AS(gen_bernoulli({10, 1.5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(gen_bernoulli({10, -0.1, 0}), std::invalid_argument);
}

TEST_CASE("gen_bernoulli edge counts match the binomial mean") {
  // Both sampling paths: geometric skipping below p = 1/4, thresholds above.
  for (const double p : {0.002, 0.05, 0.2, 0.3, 0.7}) {
    const Vertex n = 1500;
    const double pairs = n * (n - 1.0) / 2.0;
    double total = 0.0;
    constexpr int kReps = 4;
    for (int r = 0; r < kReps; ++r) {
      total += static_cast<double>(gen_bernoulli({n, p, static_cast<std::uint64_t>(r)}).edge_count());
    }
    const double mean = pairs * p;
    const double sd = std::sqrt(pairs * p * (1 - p) / kReps);
    CHECK(std::abs(total / kReps - mean) < 5.0 * sd);
  }
}

TEST_CASE("gen_bernoulli degree distribution is homogeneous") {
  // Row-keyed streams must not bias low or high indices.
  const Vertex n = 2000;
  const Graph g = gen_bernoulli({n, 0.05, 7});
  double first = 0, last = 0;
  for (Vertex v = 0; v < n / 2; ++v) first += static_cast<double>(g.degree(v));
  for (Vertex v = n / 2; v < n; ++v) last += static_cast<double>(g.degree(v));
  const double mean = (n / 2.0) * (n - 1) * 0.05;
  const double sd = std::sqrt(mean * 0.95 * 2);
  CHECK(std::abs(first - mean) < 5 * sd);
  CHECK(std::abs(last - mean) < 5 * sd);
}

TEST_CASE("conflict families") {
  const ConflictGraph star = build_conflict(conflict::Star{4}, 10);
  CHECK(star.m == 4);
  CHECK(star.delta == 4);
  CHECK(star.graph.has_edge(0, 4));
  CHECK_FALSE(star.graph.has_edge(0, 5));

  const ConflictGraph match = build_conflict(conflict::Matching{3}, 10);
  CHECK(match.m == 3);
  CHECK(match.delta == 1);
  CHECK(match.graph.has_edge(4, 5));

  const ConflictGraph empty = build_conflict(conflict::Empty{}, 10);
  CHECK(empty.m == 0);
  CHECK(empty.delta == 0);

  for (const Vertex d : {1u, 2u, 3u, 7u}) {
    const Vertex n = 40;
    const ConflictGraph reg = build_conflict(conflict::RandomRegular{d, 9}, n);
    CHECK(reg.m == n * d / 2);
    for (Vertex v = 0; v < n; ++v) CHECK(reg.graph.degree(v) == d);
    CHECK(reg.graph == build_conflict(conflict::RandomRegular{d, 9}, n).graph);
  }

  CHECK_THROWS_AS(build_conflict(conflict::Star{10}, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_conflict(conflict::Matching{6}, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_conflict(conflict::RandomRegular{3, 0}, 9), std::invalid_argument);
}

TEST_CASE("conflict spec strings") {
  for (const std::string s : {"empty", "star:5", "matching:3", "regular:4:77"}) {
    CHECK(to_string(parse_conflict_spec(s)) == s);
  }
  CHECK(std::holds_alternative<conflict::RandomRegular>(parse_conflict_spec("regular:2")));
  CHECK_THROWS_AS(parse_conflict_spec("star"), std::invalid_argument);
  CHECK_THROWS_AS(parse_conflict_spec("star:-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_conflict_spec("wheel:3"), std::invalid_argument);
}

TEST_CASE("graph_minus removes exactly the conflict edges") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Vertex n = 60;
    const Graph g = gen_bernoulli({n, 0.3, seed});
    const ConflictGraph h = build_conflict(conflict::RandomRegular{4, seed}, n);
    std::set<Edge> want = edge_set(g);
    for (const Edge& e : h.graph.edges()) want.erase(e);
    const Graph dense = graph_minus(in_storage(g, Graph::Storage::kDense), h);
    const Graph sparse = graph_minus(in_storage(g, Graph::Storage::kSparse), h);
    CHECK(edge_set(dense) == want);
    CHECK(edge_set(sparse) == want);
  }
  CHECK_THROWS_AS(graph_minus(Graph::empty(4), build_conflict(conflict::Empty{}, 5)),
                  std::invalid_argument);
}

TEST_CASE("is_dominating") {
  const Graph c5 = Graph::cycle(5);
  CHECK(is_dominating(c5, VertexSet::from_unsorted({0, 2})));
  CHECK_FALSE(is_dominating(c5, VertexSet::from_unsorted({0})));
  CHECK(is_dominating(c5, VertexSet::range(5)));
  const std::vector<Edge> one = {{0, 1}};
  const Graph g = Graph::from_edges(4, one);  // vertices 2, 3 isolated
  CHECK_FALSE(is_dominating(g, VertexSet::from_unsorted({0})));
  CHECK(is_dominating(g, VertexSet::from_unsorted({0}), true));
  CHECK(is_dominating(g, VertexSet::from_unsorted({0, 2, 3})));
  CHECK_THROWS_AS(is_dominating(g, VertexSet::from_unsorted({9})), std::invalid_argument);
}

TEST_CASE("stats on a union of isolated edges") {
  const std::vector<Edge> edges = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {7, 8}};
  const GraphStats s = stats(Graph::from_edges(12, edges));
  CHECK(s.edge_count == 5);
  CHECK(s.isolated_edge_count == 3);
  CHECK(s.isolated_vertex_count == 3);
  CHECK(s.max_degree == 2);
}

TEST_CASE("resample_vertex_edges only touches pairs at j") {
  const Vertex n = 50;
  const Graph g = gen_bernoulli({n, 0.4, 3});
  for (Vertex j : {0u, 17u, 49u}) {
    const Graph r = resample_vertex_edges(g, j, 0.4, 11);
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (u != j && v != j) CHECK(g.has_edge(u, v) == r.has_edge(u, v));
      }
    }
    CHECK(r == resample_vertex_edges(g, j, 0.4, 11));
    CHECK(resample_vertex_edges(g, j, 0.0, 11).degree(j) == 0);
    CHECK(resample_vertex_edges(g, j, 1.0, 11).degree(j) == n - 1);
  }
  CHECK_THROWS_AS(resample_vertex_edges(g, n, 0.4, 1), std::invalid_argument);
}

TEST_CASE("edge-list round trip and validation") {
  const Graph g = gen_bernoulli({40, 0.2, 5});
  std::stringstream buf;
  write_edge_list(buf, g);
  const Graph back = read_edge_list(buf);
  CHECK(back == g);
  CHECK(fingerprint(back) == fingerprint(g));

  std::stringstream empty5;
  write_edge_list(empty5, gen_bernoulli({5, 0.0, 1}));
  CHECK(empty5.str() == "5 0\n");

  for (const char* bad : {"", "3", "3 1\n0 3\n", "3 2\n0 1\n", "3 1\n0 1\n1 2\n", "3 1\n1 1\n",
                          "x y"}) {
    std::stringstream in(bad);
    CHECK_THROWS_AS(read_edge_list(in), std::invalid_argument);
  }
}

TEST_CASE("derived seeds and streams") {
  CHECK(derive_seed(1, StreamTag::kEdgeRow, 0) != derive_seed(1, StreamTag::kEdgeRow, 1));
  CHECK(derive_seed(1, StreamTag::kEdgeRow, 0) != derive_seed(2, StreamTag::kEdgeRow, 0));
  CHECK(derive_seed(1, StreamTag::kEdgeRow, 5) != derive_seed(1, StreamTag::kResample, 5));
  SplitMix64 rng(123);
  std::size_t hits = 0;
  for (int i = 0; i < 100000; ++i) hits += uniform_below(rng, 10) == 3;
  CHECK(std::abs(static_cast<double>(hits) - 10000.0) < 5 * std::sqrt(9000.0));
}
