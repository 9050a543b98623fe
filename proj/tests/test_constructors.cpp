#include <doctest.h>

#include <array>
#include <cmath>

#include "robudom/constructors.hpp"
#include "robudom/exact.hpp"
#include "robudom/regime.hpp"
#include "robudom/rng.hpp"

using namespace robudom;

namespace {

std::string failed_hypothesis(Method m, const Graph& g, const ConflictGraph& h, double p,
                              const ConstructorParams& params) {
  try {
    construct(m, g, h, p, params);
  } catch (const HypothesisError& e) {
    return e.hypothesis();
  }
  return "";
}

ConflictGraph empty_h(Vertex n) { return build_conflict(conflict::Empty{}, n); }

}  // namespace

TEST_CASE("method names") {
  for (const Method m : {Method::kAlteration, Method::kSampling, Method::kIterative,
                         Method::kDistinctTuple, Method::kSparse, Method::kGreedy, Method::kAuto}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(to_string(Method::kDistinctTuple) == "distinct");
  CHECK_FALSE(parse_method("simulated_annealing").has_value());
}

TEST_CASE("sizing rules against independent evaluation") {
  CHECK(sizing::alteration_size(5000, 0.2, 0.2, 50) == 88);
  CHECK(sizing::sampling_one_minus_zeta(0.1, 0.1) == doctest::Approx(0.654545454545455));
  CHECK(sizing::sampling_draws(2000, 0.05, 0.1, 0.1) == 138);
  CHECK(sizing::iterative_theta1(2000, 0.05, 0.1, 10) == doctest::Approx(0.0405));
  CHECK(sizing::iterative_draws(2000, 0.05, 0.1, 10) == 124);
  CHECK(sizing::distinct_q1(1000, 0.999, 0) == doctest::Approx(0.001));
  CHECK(sizing::distinct_draws(1000, 0.999, 0.1, 0) == 2);
  CHECK(sizing::distinct_q1(10000, 0.9999, 30) == doctest::Approx(0.003));
  CHECK(sizing::distinct_draws(10000, 0.9999, 0.5, 30) == 3);
  CHECK(sizing::distinct_draws(100, 1.0, 0.1, 0) == 1);
}

TEST_CASE("every constructor returns a dominating set of G \\ H") {
  const std::vector<Method> methods = {Method::kAlteration, Method::kSampling,
                                       Method::kIterative,  Method::kDistinctTuple,
                                       Method::kSparse,     Method::kGreedy,
                                       Method::kAuto};
  std::size_t emitted = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    SplitMix64 rng(derive_seed(5, StreamTag::kCheck, i));
    const auto n = static_cast<Vertex>(10 + uniform_below(rng, 200));
    const double p = std::array{0.3 / n, 2.0 / n, 0.05, 0.4, 0.9, 0.999}[uniform_below(rng, 6)];
    const Graph g = gen_bernoulli({n, p, rng()});
    const ConflictGraph h = build_conflict(conflict::Star{static_cast<Vertex>(uniform_below(rng, n / 3))}, n);
    const Graph g_eff = graph_minus(g, h);
    for (const Method m : methods) {
      for (const bool pre : {false, true}) {
        ConstructorParams params;
        params.seed = rng();
        params.preprocess = pre;
        try {
          const ConstructionResult r = construct(m, g, h, p, params);
          ++emitted;
          CHECK(is_dominating(g_eff, r.dominating_set));
          CHECK(r.size() <= r.core_size + r.repair_size + r.preprocessed_size);
        } catch (const HypothesisError&) {
        }
      }
    }
  }
  CHECK(emitted > 2000);
}

TEST_CASE("constructors are deterministic in the seed") {
  const Graph g = gen_bernoulli({400, 0.2, 1});
  const ConflictGraph h = build_conflict(conflict::Matching{50}, 400);
  ConstructorParams a;
  a.seed = 77;
  for (const Method m : {Method::kSampling, Method::kIterative, Method::kAuto}) {
    CHECK(construct(m, g, h, 0.2, a).dominating_set == construct(m, g, h, 0.2, a).dominating_set);
  }
  ConstructorParams b = a;
  b.seed = 78;
  CHECK_FALSE(construct(Method::kIterative, g, h, 0.2, a).dominating_set ==
              construct(Method::kIterative, g, h, 0.2, b).dominating_set);
}

TEST_CASE("hypothesis failures are named") {
  ConstructorParams params;
  const Graph sparse = gen_bernoulli({100, 0.005, 1});
  CHECK(failed_hypothesis(Method::kAlteration, sparse, empty_h(100), 0.005, params) ==
        "np > 1 and p < 1");

  const Graph dense = gen_bernoulli({200, 0.3, 2});
  const ConflictGraph big_star = build_conflict(conflict::Star{150}, 200);
  CHECK(failed_hypothesis(Method::kSampling, dense, big_star, 0.3, params) ==
        "Delta <= r0 n - 1");
  CHECK(failed_hypothesis(Method::kIterative, dense, big_star, 0.3, params) == "theta1 > 0");
  CHECK(failed_hypothesis(Method::kDistinctTuple, dense, empty_h(200), 0.3, params) ==
        "q1 <= 2^(-2/eps-2)");

  const Graph mid = gen_bernoulli({100, 0.02, 3});
  CHECK(failed_hypothesis(Method::kAlteration, mid, build_conflict(conflict::Star{70}, 100), 0.02,
                          params) == "(1+eps) u_n + Delta <= n");
  ConstructorParams wide = params;
  wide.epsilon = 0.45;  // 1 - zeta = 0.062, so t = u_n / 0.062 exceeds n
  CHECK(failed_hypothesis(Method::kSampling, mid, empty_h(100), 0.02, wide) == "t < n");
}

TEST_CASE("alteration takes the highest H-degree vertices first") {
  const Vertex n = 500;
  const Graph g = gen_bernoulli({n, 0.2, 4});
  const ConflictGraph h = build_conflict(conflict::Star{20}, n);
  ConstructorParams params;
  const ConstructionResult r = construct_alteration(g, h, 0.2, params);
  CHECK(r.dominating_set.contains(0));
  CHECK(r.core_size == sizing::alteration_size(n, 0.2, 0.1, 20));
  for (Vertex v = 0; v <= 20; ++v) CHECK(r.dominating_set.contains(v));
}

TEST_CASE("iterative construction stops once everything is covered") {
  const Graph k = Graph::complete(50);
  ConstructorParams params;
  const ConstructionResult r = construct_iterative(k, empty_h(50), 1.0, params);
  CHECK(r.size() == 1);
  CHECK(r.repair_size == 0);

  const Graph g = gen_bernoulli({1000, 0.3, 9});
  const ConstructionResult s = construct_iterative(g, empty_h(1000), 0.3, params);
  CHECK(s.coverage_trace.size() == s.samples);
  for (std::size_t j = 1; j < s.coverage_trace.size(); ++j) {
    CHECK(s.coverage_trace[j] >= s.coverage_trace[j - 1]);
  }
  if (s.repair_size == 0) CHECK(s.coverage_trace.back() == 1000);
}

TEST_CASE("preprocessing splits by H-degree") {
  const ConflictGraph h = build_conflict(conflict::Star{50}, 100);
  const DegreeSplit split = preprocess_high_degree(h, 0.1);
  CHECK(split.high.members() == std::vector<Vertex>{0});
  CHECK(split.low.size() == 99);
  CHECK(split.low_delta == 1);

  const Graph g = gen_bernoulli({100, 0.5, 2});
  ConstructorParams params;
  params.preprocess = true;
  const ConstructionResult r = construct_iterative(g, h, 0.5, params);
  CHECK(r.preprocessed_size == 1);
  CHECK(r.dominating_set.contains(0));
}

TEST_CASE("sparse construction on isolated edges") {
  // 10 isolated edges and 5 isolated vertices.
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 10; ++i) edges.push_back({2 * i, 2 * i + 1});
  const Graph g = Graph::from_edges(25, edges);
  const ConstructionResult with = construct_sparse(g, empty_h(25), false);
  const ConstructionResult without = construct_sparse(g, empty_h(25), true);
  CHECK(with.size() == 15);
  CHECK(without.size() == 10);
  CHECK(without.ignore_isolated);
  CHECK(is_dominating(g, without.dominating_set, true));
  CHECK_FALSE(is_dominating(g, without.dominating_set, false));
}

TEST_CASE("sparse construction is exact on small components") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Graph g = gen_bernoulli({kSparseExactLimit, 0.1, i});
    const ConstructionResult r = construct_sparse(g, empty_h(kSparseExactLimit), false);
    CHECK(r.size() == exact_domination(g).gamma);
  }
}

TEST_CASE("greedy baseline") {
  std::vector<Edge> star;
  for (Vertex v = 1; v < 10; ++v) star.push_back({0, v});
  CHECK(greedy_baseline(Graph::from_edges(10, star)).members() == std::vector<Vertex>{0});
  CHECK(greedy_baseline(Graph::empty(4)).size() == 4);
  const Graph g = gen_bernoulli({300, 0.05, 3});
  CHECK(is_dominating(g, greedy_baseline(g)));
}

TEST_CASE("auto routing by regime") {
  ConstructorParams params;
  auto method_for = [&](Vertex n, double p) {
    const Graph g = gen_bernoulli({n, p, 1});
    return construct_auto(g, empty_h(n), p, params).method;
  };
  CHECK(method_for(3000, 1e-5) == Method::kSparse);
  CHECK(method_for(2000, 0.5 / 2000) == Method::kSparse);
  CHECK(method_for(2000, 5.0 / 2000) == Method::kAlteration);
  CHECK(method_for(1000, 0.3) == Method::kIterative);
  CHECK(method_for(1000, 1.0 - 1e-7) == Method::kDistinctTuple);
  CHECK(method_for(1000, 0.999) == Method::kGreedy);  // q1 = 1e-3 is above 2^-22
  CHECK(method_for(3000, 0.008) == Method::kSampling);

  // The alteration route fails its size hypothesis and falls back to greedy.
  const Graph g = gen_bernoulli({100, 0.02, 3});
  const ConflictGraph h = build_conflict(conflict::Star{70}, 100);
  const ConstructionResult r = construct_auto(g, h, 0.02, params);
  CHECK(r.method == Method::kGreedy);
  CHECK(r.fallback_reason.find("(1+eps) u_n + Delta <= n") != std::string::npos);
  CHECK(is_dominating(graph_minus(g, h), r.dominating_set));
}
