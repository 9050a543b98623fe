#include "robudom/exact.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <vector>

namespace robudom {
namespace {

using Mask = std::uint64_t;

class DominationSearch {
 public:
  explicit DominationSearch(const Graph& g) : n_(g.n()), closed_(g.n()) {
    for (Vertex v = 0; v < n_; ++v) {
      closed_[v] = Mask{1} << v;
      g.for_each_neighbor(v, [&](Vertex w) { closed_[v] |= Mask{1} << w; });
    }
  }

  ExactResult run() {
    const Mask all = n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1;
    best_ = n_ + 1;
    best_set_ = all;
    seed_with_greedy(all);
    search(all, 0, 0);
    ExactResult r;
    r.gamma = best_;
    std::vector<Vertex> members;
    for (Mask m = best_set_; m != 0; m &= m - 1) {
      members.push_back(static_cast<Vertex>(std::countr_zero(m)));
    }
    r.witness = VertexSet::from_unsorted(std::move(members));
    r.nodes_explored = nodes_;
    return r;
  }

 private:
  // Incumbent from a greedy cover so the first descent is already pruned.
  void seed_with_greedy(Mask all) {
    Mask undominated = all;
    Mask chosen = 0;
    std::size_t count = 0;
    while (undominated != 0) {
      Vertex pick = 0;
      int gain = -1;
      for (Vertex w = 0; w < n_; ++w) {
        const int c = std::popcount(closed_[w] & undominated);
        if (c > gain) {
          gain = c;
          pick = w;
        }
      }
      chosen |= Mask{1} << pick;
      undominated &= ~closed_[pick];
      ++count;
    }
    best_ = count;
    best_set_ = chosen;
  }

  void search(Mask undominated, Mask chosen, std::size_t count) {
    ++nodes_;
    if (undominated == 0) {
      if (count < best_) {
        best_ = count;
        best_set_ = chosen;
      }
      return;
    }
    if (count + 1 >= best_) return;

    int max_cover = 0;
    for (Vertex w = 0; w < n_; ++w) {
      max_cover = std::max(max_cover, std::popcount(closed_[w] & undominated));
    }
    const auto remaining = static_cast<std::size_t>(std::popcount(undominated));
    const std::size_t lower = (remaining + static_cast<std::size_t>(max_cover) - 1) /
                              static_cast<std::size_t>(max_cover);
    if (count + lower >= best_) return;

    Vertex branch = 0;
    int fewest = 65;
    for (Mask m = undominated; m != 0; m &= m - 1) {
      const auto u = static_cast<Vertex>(std::countr_zero(m));
      const int c = std::popcount(closed_[u]);
      if (c < fewest) {
        fewest = c;
        branch = u;
      }
    }
    for (Mask m = closed_[branch]; m != 0; m &= m - 1) {
      const auto w = static_cast<Vertex>(std::countr_zero(m));
      search(undominated & ~closed_[w], chosen | (Mask{1} << w), count + 1);
      if (count + 1 >= best_) return;
    }
  }

  Vertex n_;
  std::vector<Mask> closed_;
  std::size_t best_ = 0;
  Mask best_set_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ExactResult exact_domination(const Graph& g) {
  if (g.n() > kExactMaxVertices) {
    throw std::invalid_argument("exact_domination: n = " + std::to_string(g.n()) +
                                " exceeds the limit of " + std::to_string(kExactMaxVertices));
  }
  return DominationSearch(g).run();
}

GammaPair exact_gamma_pair(const Graph& g, const ConflictGraph& h) {
  GammaPair pair;
  pair.gamma_g = exact_domination(g).gamma;
  pair.gamma_gh = exact_domination(graph_minus(g, h)).gamma;
  return pair;
}

}  // namespace robudom
