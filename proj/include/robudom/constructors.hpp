#pragma once

// Randomized dominating-set constructions for G \ H.
//
// Every constructor takes the realized graph G, the conflict graph H and the
// model edge probability p (needed for u_n and the derived sample counts),
// works on G \ H, and returns a set that dominates it. Constructions whose
// hypotheses fail throw HypothesisError naming the hypothesis.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robudom/error.hpp"
#include "robudom/graph.hpp"

namespace robudom {

enum class Method {
  kAlteration,
  kSampling,
  kIterative,
  kDistinctTuple,
  kSparse,
  kGreedy,
  kAuto,
};

std::string_view to_string(Method method);
// Accepts the CLI names: alteration, sampling, iterative, distinct, sparse,
// greedy, auto.
std::optional<Method> parse_method(std::string_view name);

struct ConstructorParams {
  double epsilon = 0.1;
  double r0 = 0.1;
  std::uint64_t seed = 0;
  // Force-include vertices of H-degree above epsilon n and sample only
  // among the rest (sampling, iterative and distinct-tuple constructions).
  bool preprocess = false;
  // Sparse construction only: isolated vertices of G \ H need not be
  // dominated.
  bool ignore_isolated = false;
};

struct ConstructionResult {
  VertexSet dominating_set;
  std::size_t core_size = 0;          // sampled or selected vertices
  std::size_t repair_size = 0;        // leftovers added to finish the cover
  std::size_t preprocessed_size = 0;  // force-included high-degree vertices
  Method method = Method::kGreedy;
  std::size_t samples = 0;            // draws made (t), where applicable
  // Iterative construction: #B_j after draw j, j = 1..t.
  std::vector<std::size_t> coverage_trace;
  bool ignore_isolated = false;
  // construct_auto: the routed method's error when it fell back to greedy.
  std::string fallback_reason;

  std::size_t size() const noexcept { return dominating_set.size(); }
};

// Sample-count rules, exposed for tests and reports.
namespace sizing {
// ceil((1 + eps) u_n) + delta.
std::size_t alteration_size(double n, double p, double epsilon, Vertex delta);
// 1 - zeta = (1 - 2 eps)(1 - r0) / (1 + eps).
double sampling_one_minus_zeta(double epsilon, double r0);
// ceil(u_n / (1 - zeta)).
std::size_t sampling_draws(double n, double p, double epsilon, double r0);
// theta1 = p (1 - eps) - (delta - 1) / n.
double iterative_theta1(double n, double p, double epsilon, Vertex delta);
// ceil((1 + eps) log(np) / |log(1 - theta1)|) + 1.
std::size_t iterative_draws(double n, double p, double epsilon, Vertex delta);
// q1 = max(1 - p, delta / n).
double distinct_q1(double n, double p, Vertex delta);
// max(1, ceil((1 + eps/2) log(np) / |log(2 q1)|)).
std::size_t distinct_draws(double n, double p, double epsilon, Vertex delta);
}  // namespace sizing

// Fixed set D of ceil((1 + eps) u_n) + Delta vertices, largest H-degree
// first (ties by smaller index), plus every vertex D leaves undominated.
// Requires 1 < np and p < 1.
ConstructionResult construct_alteration(const Graph& g, const ConflictGraph& h, double p,
                                        const ConstructorParams& params);

// t = ceil(u_n / (1 - zeta)) iid uniform draws, deduplicated, plus repair.
// Requires Delta + 1 <= r0 n and t < n.
ConstructionResult construct_sampling(const Graph& g, const ConflictGraph& h, double p,
                                      const ConstructorParams& params);

// Draws X_1, X_2, ... iid uniform and grows B_j = N[X_1] u ... u N[X_j] until
// B_j = V or j = t, then adds V \ B_t. Requires theta1 > 0.
ConstructionResult construct_iterative(const Graph& g, const ConflictGraph& h, double p,
                                       const ConstructorParams& params);

// t distinct uniform vertices plus repair. Requires q1 <= 2^(-2/eps - 2)
// and t <= 2 log n.
ConstructionResult construct_distinct_tuple(const Graph& g, const ConflictGraph& h, double p,
                                            const ConstructorParams& params);

struct DegreeSplit {
  VertexSet low;   // H-degree <= eps n, the sampling pool
  VertexSet high;  // force-included
  Vertex low_delta = 0;  // max H-degree over `low`
};

DegreeSplit preprocess_high_degree(const ConflictGraph& h, double epsilon);

// Exact per connected component of G \ H up to kSparseExactLimit vertices,
// greedy above. Isolated vertices are included unless ignore_isolated.
inline constexpr Vertex kSparseExactLimit = 20;
ConstructionResult construct_sparse(const Graph& g, const ConflictGraph& h,
                                    bool ignore_isolated);

// Repeatedly takes the vertex whose closed neighborhood covers the most
// undominated vertices, smallest index on ties.
VertexSet greedy_baseline(const Graph& g_eff);

// Routes by classify_regime(n, p):
//   sparse_zero, sparse_lambda with lambda <= 1 -> sparse (all vertices dominated)
//   sparse_lambda with lambda > 1              -> alteration
//   dense_p0_zero -> sampling, dense_p0_mid -> iterative, dense_p0_one -> distinct
// Dense routes preprocess when some vertex has H-degree above eps n. Any
// HypothesisError falls back to greedy and is kept in fallback_reason.
ConstructionResult construct_auto(const Graph& g, const ConflictGraph& h, double p,
                                  const ConstructorParams& params);

// Dispatch by tag. kSparse honours params.ignore_isolated.
ConstructionResult construct(Method method, const Graph& g, const ConflictGraph& h, double p,
                             const ConstructorParams& params);

}  // namespace robudom
