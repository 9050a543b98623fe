#pragma once

// Exact domination numbers for graphs of at most 32 vertices.

#include <cstdint>

#include "robudom/graph.hpp"

namespace robudom {

inline constexpr Vertex kExactMaxVertices = 32;

struct ExactResult {
  std::size_t gamma = 0;
  VertexSet witness;
  std::uint64_t nodes_explored = 0;
};

// Branch and bound over closed-neighborhood bitmasks. At each node the
// undominated vertex with the fewest possible dominators is branched on,
// trying its closed neighborhood in increasing vertex order; a node is cut
// when chosen + ceil(undominated / best single cover) cannot beat the
// incumbent. The search starts from a greedy cover, so the witness is that
// cover when it is already minimum and otherwise the first strictly smaller
// set met in the branching order; either way it is deterministic.
// Throws std::invalid_argument for n > 32.
ExactResult exact_domination(const Graph& g);

struct GammaPair {
  std::size_t gamma_g = 0;
  std::size_t gamma_gh = 0;
};

// (gamma(G), gamma(G \ H)); removing edges never helps, so gamma_gh >= gamma_g.
GammaPair exact_gamma_pair(const Graph& g, const ConflictGraph& h);

}  // namespace robudom
