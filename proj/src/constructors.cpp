#include "robudom/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "robudom/exact.hpp"
#include "robudom/regime.hpp"
#include "robudom/rng.hpp"

namespace robudom {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void require_model(double n, double p) {
  if (!(p > 0.0 && p < 1.0) || !(n * p > 1.0)) {
    throw HypothesisError("np > 1 and p < 1",
                          "u_n needs np > 1 and 0 < p < 1 (n = " + fmt(n) + ", p = " + fmt(p) + ")");
  }
}

void require_epsilon(double epsilon, double upper) {
  if (!(epsilon > 0.0 && epsilon < upper)) {
    throw std::invalid_argument("epsilon must lie in (0, " + fmt(upper) + "), got " + fmt(epsilon));
  }
}

// Dominating set D plus the vertices D leaves uncovered in g_eff.
struct Completion {
  VertexSet set;
  std::size_t repair = 0;
};

Completion complete_cover(const Graph& g_eff, const VertexSet& chosen) {
  Bitset covered(g_eff.n());
  for (const Vertex v : chosen) g_eff.add_closed_neighborhood(v, covered);
  std::vector<Vertex> members(chosen.begin(), chosen.end());
  std::size_t repair = 0;
  covered.for_each_unset([&](std::size_t v) {
    members.push_back(static_cast<Vertex>(v));
    ++repair;
  });
  return {VertexSet::from_unsorted(std::move(members)), repair};
}

struct Pool {
  std::vector<Vertex> candidates;
  VertexSet forced;
  Vertex delta = 0;
};

Pool sampling_pool(const ConflictGraph& h, const ConstructorParams& params) {
  Pool pool;
  if (params.preprocess) {
    DegreeSplit split = preprocess_high_degree(h, params.epsilon);
    pool.candidates = split.low.members();
    pool.forced = std::move(split.high);
    pool.delta = split.low_delta;
  } else {
    pool.candidates = VertexSet::range(h.graph.n()).members();
    pool.delta = h.delta;
  }
  return pool;
}

std::uint64_t method_stream(const ConstructorParams& params, Method method) {
  return derive_seed(params.seed, StreamTag::kSampling, static_cast<std::uint64_t>(method));
}

ConstructionResult finish(Method method, const Graph& g_eff, std::vector<Vertex> drawn,
                          const VertexSet& forced) {
  const VertexSet core = VertexSet::from_unsorted(std::move(drawn));
  const Completion done = complete_cover(g_eff, set_union(core, forced));
  ConstructionResult r;
  r.method = method;
  r.dominating_set = done.set;
  r.preprocessed_size = forced.size();
  r.core_size = core.size();
  r.repair_size = done.repair;
  return r;
}

Graph induced_subgraph(const Graph& g, const std::vector<Vertex>& vertices) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < vertices.size(); ++i) {
    g.for_each_neighbor(vertices[i], [&](Vertex w) {
      const auto it = std::lower_bound(vertices.begin(), vertices.end(), w);
      const auto j = static_cast<Vertex>(it - vertices.begin());
      if (i < j) edges.emplace_back(i, j);
    });
  }
  return Graph::from_edges(static_cast<Vertex>(vertices.size()), edges);
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kAlteration: return "alteration";
    case Method::kSampling: return "sampling";
    case Method::kIterative: return "iterative";
    case Method::kDistinctTuple: return "distinct";
    case Method::kSparse: return "sparse";
    case Method::kGreedy: return "greedy";
    case Method::kAuto: return "auto";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const Method m : {Method::kAlteration, Method::kSampling, Method::kIterative,
                         Method::kDistinctTuple, Method::kSparse, Method::kGreedy, Method::kAuto}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace sizing {

std::size_t alteration_size(double n, double p, double epsilon, Vertex delta) {
  return static_cast<std::size_t>(std::ceil((1.0 + epsilon) * u_n(n, p))) + delta;
}

double sampling_one_minus_zeta(double epsilon, double r0) {
  return (1.0 - 2.0 * epsilon) * (1.0 - r0) / (1.0 + epsilon);
}

std::size_t sampling_draws(double n, double p, double epsilon, double r0) {
  return static_cast<std::size_t>(std::ceil(u_n(n, p) / sampling_one_minus_zeta(epsilon, r0)));
}

double iterative_theta1(double n, double p, double epsilon, Vertex delta) {
  return p * (1.0 - epsilon) - (static_cast<double>(delta) - 1.0) / n;
}

std::size_t iterative_draws(double n, double p, double epsilon, Vertex delta) {
  const double theta1 = iterative_theta1(n, p, epsilon, delta);
  const double rate = -std::log1p(-std::min(theta1, 1.0));
  const double steps = std::ceil((1.0 + epsilon) * std::log(n * p) / rate);
  return static_cast<std::size_t>(std::max(steps, 0.0)) + 1;
}

double distinct_q1(double n, double p, Vertex delta) {
  return std::max(1.0 - p, static_cast<double>(delta) / n);
}

std::size_t distinct_draws(double n, double p, double epsilon, Vertex delta) {
  const double q1 = distinct_q1(n, p, delta);
  const double rate = -std::log(2.0 * q1);  // +inf when q1 = 0
  const double steps = std::ceil((1.0 + epsilon / 2.0) * std::log(n * p) / rate);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(steps, 0.0)));
}

}  // namespace sizing

ConstructionResult construct_alteration(const Graph& g, const ConflictGraph& h, double p,
                                        const ConstructorParams& params) {
  require_epsilon(params.epsilon, INFINITY);
  const double n = g.n();
  require_model(n, p);
  const std::size_t size = sizing::alteration_size(n, p, params.epsilon, h.delta);
  if (size > g.n()) {
    throw HypothesisError("(1+eps) u_n + Delta <= n",
                          "alteration needs " + std::to_string(size) + " vertices but n = " +
                              std::to_string(g.n()) + "; use sampling or greedy instead");
  }
  const Graph g_eff = graph_minus(g, h);

  std::vector<Vertex> order(g.n());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return h.graph.degree(a) > h.graph.degree(b);
  });
  order.resize(size);

  ConstructionResult r = finish(Method::kAlteration, g_eff, std::move(order), VertexSet{});
  r.samples = size;
  return r;
}

ConstructionResult construct_sampling(const Graph& g, const ConflictGraph& h, double p,
                                      const ConstructorParams& params) {
  require_epsilon(params.epsilon, 0.5);
  if (!(params.r0 > 0.0 && params.r0 < 1.0)) throw std::invalid_argument("r0 must lie in (0, 1)");
  const double n = g.n();
  require_model(n, p);
  Pool pool = sampling_pool(h, params);
  if (!(pool.delta + 1.0 <= params.r0 * n)) {
    throw HypothesisError("Delta <= r0 n - 1", "Delta = " + std::to_string(pool.delta) +
                                                   ", r0 n = " + fmt(params.r0 * n));
  }
  const std::size_t t = sizing::sampling_draws(n, p, params.epsilon, params.r0);
  if (t >= g.n()) {
    throw HypothesisError("t < n", "t = " + std::to_string(t) + " draws for n = " +
                                       std::to_string(g.n()) + " (np too small)");
  }
  const Graph g_eff = graph_minus(g, h);

  SplitMix64 rng(method_stream(params, Method::kSampling));
  std::vector<Vertex> drawn;
  drawn.reserve(t);
  if (!pool.candidates.empty()) {
    for (std::size_t i = 0; i < t; ++i) {
      drawn.push_back(pool.candidates[uniform_below(rng, pool.candidates.size())]);
    }
  }
  ConstructionResult r = finish(Method::kSampling, g_eff, std::move(drawn), pool.forced);
  r.samples = t;
  return r;
}

ConstructionResult construct_iterative(const Graph& g, const ConflictGraph& h, double p,
                                       const ConstructorParams& params) {
  require_epsilon(params.epsilon, 1.0);
  if (!(p > 0.0 && p <= 1.0)) throw HypothesisError("0 < p <= 1", "p = " + fmt(p));
  const double n = g.n();
  Pool pool = sampling_pool(h, params);
  const double theta1 = sizing::iterative_theta1(n, p, params.epsilon, pool.delta);
  if (!(theta1 > 0.0)) {
    throw HypothesisError("theta1 > 0", "theta1 = p(1-eps) - (Delta-1)/n = " + fmt(theta1) +
                                            "; conflict graph too dense for this regime");
  }
  const std::size_t t = sizing::iterative_draws(n, p, params.epsilon, pool.delta);
  const Graph g_eff = graph_minus(g, h);

  Bitset covered(g.n());
  for (const Vertex v : pool.forced) g_eff.add_closed_neighborhood(v, covered);
  std::size_t covered_count = covered.count();

  SplitMix64 rng(method_stream(params, Method::kIterative));
  std::vector<Vertex> drawn;
  std::vector<std::size_t> trace;
  trace.reserve(t);
  for (std::size_t j = 0; j < t && !pool.candidates.empty(); ++j) {
    if (covered_count == g.n()) {
      trace.push_back(covered_count);
      continue;
    }
    const Vertex x = pool.candidates[uniform_below(rng, pool.candidates.size())];
    drawn.push_back(x);
    g_eff.add_closed_neighborhood(x, covered);
    covered_count = covered.count();
    trace.push_back(covered_count);
  }
  ConstructionResult r = finish(Method::kIterative, g_eff, std::move(drawn), pool.forced);
  r.samples = t;
  r.coverage_trace = std::move(trace);
  return r;
}

ConstructionResult construct_distinct_tuple(const Graph& g, const ConflictGraph& h, double p,
                                            const ConstructorParams& params) {
  require_epsilon(params.epsilon, INFINITY);
  const double n = g.n();
  if (!(p > 0.0 && p <= 1.0) || !(n * p > 1.0)) {
    throw HypothesisError("np > 1", "n = " + fmt(n) + ", p = " + fmt(p));
  }
  Pool pool = sampling_pool(h, params);
  const double q1 = sizing::distinct_q1(n, p, pool.delta);
  const double q1_max = std::exp2(-2.0 / params.epsilon - 2.0);
  if (!(q1 <= q1_max)) {
    throw HypothesisError("q1 <= 2^(-2/eps-2)",
                          "q1 = max(1-p, Delta/n) = " + fmt(q1) + " > " + fmt(q1_max));
  }
  const std::size_t t = sizing::distinct_draws(n, p, params.epsilon, pool.delta);
  if (!(static_cast<double>(t) <= 2.0 * std::log(n))) {
    throw HypothesisError("t <= 2 log n", "t = " + std::to_string(t) + ", 2 log n = " +
                                              fmt(2.0 * std::log(n)));
  }
  if (t > pool.candidates.size()) {
    throw HypothesisError("t <= |pool|", "t = " + std::to_string(t) + " exceeds the " +
                                             std::to_string(pool.candidates.size()) +
                                             " candidate vertices");
  }
  const Graph g_eff = graph_minus(g, h);

  // Partial Fisher-Yates: the first t entries are a uniform t-subset.
  SplitMix64 rng(method_stream(params, Method::kDistinctTuple));
  std::vector<Vertex> candidates = std::move(pool.candidates);
  for (std::size_t i = 0; i < t; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(t);
  ConstructionResult r =
      finish(Method::kDistinctTuple, g_eff, std::move(candidates), pool.forced);
  r.samples = t;
  return r;
}

DegreeSplit preprocess_high_degree(const ConflictGraph& h, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("preprocess_high_degree: epsilon must lie in (0, 1)");
  }
  const double limit = epsilon * h.graph.n();
  std::vector<Vertex> low;
  std::vector<Vertex> high;
  DegreeSplit split;
  for (Vertex v = 0; v < h.graph.n(); ++v) {
    const std::size_t d = h.graph.degree(v);
    if (static_cast<double>(d) <= limit) {
      low.push_back(v);
      split.low_delta = std::max(split.low_delta, static_cast<Vertex>(d));
    } else {
      high.push_back(v);
    }
  }
  split.low = VertexSet::from_unsorted(std::move(low));
  split.high = VertexSet::from_unsorted(std::move(high));
  return split;
}

ConstructionResult construct_sparse(const Graph& g, const ConflictGraph& h,
                                    bool ignore_isolated) {
  const Graph g_eff = graph_minus(g, h);
  const Vertex n = g_eff.n();
  std::vector<bool> seen(n, false);
  std::vector<Vertex> chosen;
  std::vector<Vertex> component;
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    if (g_eff.degree(s) == 0) {
      seen[s] = true;
      if (!ignore_isolated) chosen.push_back(s);
      continue;
    }
    component.clear();
    queue.assign(1, s);
    seen[s] = true;
    while (!queue.empty()) {
      const Vertex v = queue.back();
      queue.pop_back();
      component.push_back(v);
      g_eff.for_each_neighbor(v, [&](Vertex w) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      });
    }
    std::sort(component.begin(), component.end());
    const Graph local = induced_subgraph(g_eff, component);
    const VertexSet local_set = component.size() <= kSparseExactLimit
                                    ? exact_domination(local).witness
                                    : greedy_baseline(local);
    for (const Vertex i : local_set) chosen.push_back(component[i]);
  }
  ConstructionResult r;
  r.method = Method::kSparse;
  r.dominating_set = VertexSet::from_unsorted(std::move(chosen));
  r.core_size = r.dominating_set.size();
  r.ignore_isolated = ignore_isolated;
  return r;
}

VertexSet greedy_baseline(const Graph& g_eff) {
  const Vertex n = g_eff.n();
  std::vector<std::size_t> gain(n);
  for (Vertex v = 0; v < n; ++v) gain[v] = g_eff.degree(v) + 1;
  std::vector<bool> covered(n, false);

  // Max gain first, smaller index on ties. Gains only shrink, so stale
  // entries are refreshed when they surface.
  using Entry = std::pair<std::size_t, Vertex>;
  auto worse = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (Vertex v = 0; v < n; ++v) heap.emplace(gain[v], v);

  auto cover = [&](Vertex y) {
    if (covered[y]) return;
    covered[y] = true;
    --gain[y];
    g_eff.for_each_neighbor(y, [&](Vertex z) { --gain[z]; });
  };

  std::vector<Vertex> chosen;
  while (!heap.empty()) {
    const auto [g, v] = heap.top();
    heap.pop();
    if (g != gain[v]) {
      if (gain[v] > 0) heap.emplace(gain[v], v);
      continue;
    }
    if (g == 0) break;
    chosen.push_back(v);
    cover(v);
    g_eff.for_each_neighbor(v, [&](Vertex w) { cover(w); });
  }
  return VertexSet::from_unsorted(std::move(chosen));
}

ConstructionResult construct_auto(const Graph& g, const ConflictGraph& h, double p,
                                  const ConstructorParams& params) {
  const RegimeParams regime = classify_regime(g.n(), p);
  ConstructorParams routed = params;
  Method method = Method::kGreedy;
  switch (regime.regime) {
    case RegimeKind::kSparseZero:
      method = Method::kSparse;
      break;
    case RegimeKind::kSparseLambda:
      method = regime.parameter <= 1.0 ? Method::kSparse : Method::kAlteration;
      break;
    case RegimeKind::kDenseP0Zero:
      method = Method::kSampling;
      break;
    case RegimeKind::kDenseP0Mid:
      method = Method::kIterative;
      break;
    case RegimeKind::kDenseP0One:
      method = Method::kDistinctTuple;
      break;
  }
  if (method == Method::kSampling || method == Method::kIterative ||
      method == Method::kDistinctTuple) {
    const double limit = params.epsilon * g.n();
    routed.preprocess = static_cast<double>(h.delta) > limit && params.epsilon < 1.0;
  }
  routed.ignore_isolated = false;
  try {
    return construct(method, g, h, p, routed);
  } catch (const std::exception& e) {
    if (g.n() != h.graph.n()) throw;
    ConstructionResult r;
    r.method = Method::kGreedy;
    r.dominating_set = greedy_baseline(graph_minus(g, h));
    r.core_size = r.dominating_set.size();
    r.fallback_reason = std::string(to_string(method)) + ": " + e.what();
    return r;
  }
}

ConstructionResult construct(Method method, const Graph& g, const ConflictGraph& h, double p,
                             const ConstructorParams& params) {
  switch (method) {
    case Method::kAlteration: return construct_alteration(g, h, p, params);
    case Method::kSampling: return construct_sampling(g, h, p, params);
    case Method::kIterative: return construct_iterative(g, h, p, params);
    case Method::kDistinctTuple: return construct_distinct_tuple(g, h, p, params);
    case Method::kSparse: return construct_sparse(g, h, params.ignore_isolated);
    case Method::kAuto: return construct_auto(g, h, p, params);
    case Method::kGreedy: break;
  }
  ConstructionResult r;
  r.method = Method::kGreedy;
  r.dominating_set = greedy_baseline(graph_minus(g, h));
  r.core_size = r.dominating_set.size();
  return r;
}

}  // namespace robudom
