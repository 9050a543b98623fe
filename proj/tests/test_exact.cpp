#include <doctest.h>

#include <bit>
#include <stdexcept>

#include "robudom/exact.hpp"
#include "robudom/rng.hpp"

using namespace robudom;

namespace {

// Smallest dominating set size by enumerating every subset.
std::size_t brute_force_gamma(const Graph& g) {
  const Vertex n = g.n();
  std::vector<std::uint32_t> closed(n);
  for (Vertex v = 0; v < n; ++v) {
    closed[v] = 1u << v;
    g.for_each_neighbor(v, [&](Vertex w) { closed[v] |= 1u << w; });
  }
  const std::uint32_t all = (1u << n) - 1;
  std::size_t best = n;
  for (std::uint32_t s = 0; s <= all; ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if (size >= best) continue;
    std::uint32_t covered = 0;
    for (std::uint32_t m = s; m; m &= m - 1) covered |= closed[std::countr_zero(m)];
    if (covered == all) best = size;
  }
  return best;
}

}  // namespace

TEST_CASE("named graphs") {
  CHECK(exact_domination(Graph::cycle(5)).gamma == 2);
  CHECK(exact_domination(Graph::complete(9)).gamma == 1);
  CHECK(exact_domination(Graph::empty(6)).gamma == 6);
  for (Vertex n = 1; n <= 20; ++n) CHECK(exact_domination(Graph::path(n)).gamma == (n + 2) / 3);
  for (Vertex n = 3; n <= 32; n += 7) {
    CHECK(exact_domination(Graph::cycle(n)).gamma == (n + 2) / 3);
  }
}

TEST_CASE("agrees with brute force on random graphs") {
  for (std::uint64_t i = 0; i < 500; ++i) {
    SplitMix64 rng(derive_seed(99, StreamTag::kCheck, i));
    const auto n = static_cast<Vertex>(1 + uniform_below(rng, 12));
    const double p = uniform01(rng);
    const Graph g = gen_bernoulli({n, p, rng()});
    const ExactResult r = exact_domination(g);
    CHECK(r.gamma == brute_force_gamma(g));
    CHECK(r.witness.size() == r.gamma);
    CHECK(is_dominating(g, r.witness));
  }
}

TEST_CASE("removing edges never lowers the domination number") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    SplitMix64 rng(derive_seed(7, StreamTag::kCheck, i));
    const auto n = static_cast<Vertex>(4 + uniform_below(rng, 17));
    const Graph g = gen_bernoulli({n, uniform01(rng), rng()});
    const ConflictGraph h = make_conflict(gen_bernoulli({n, 0.2, rng()}));
    const GammaPair gp = exact_gamma_pair(g, h);
    CHECK(gp.gamma_gh >= gp.gamma_g);
  }
}

TEST_CASE("vertex limit") {
  CHECK(exact_domination(gen_bernoulli({32, 0.2, 1})).gamma >= 1);
  CHECK_THROWS_AS(exact_domination(Graph::empty(33)), std::invalid_argument);
}
