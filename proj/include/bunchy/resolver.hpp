#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "bunchy/errors.hpp"
#include "bunchy/graph.hpp"

namespace bunchy {

// A surjective graph homomorphism whose edge map restricts to a bijection
// E_v(domain) -> E_{vertex_map(v)}(codomain) at every domain vertex.
// Instances only exist after validation.
class RightResolver {
 public:
  // Checks every clause and throws InvalidResolver naming the first failure.
  static RightResolver validate(Graph domain, Graph codomain, std::vector<Vertex> vertex_map,
                                std::vector<EdgeId> edge_map);
  static RightResolver identity(const Graph& g);

  const Graph& domain() const noexcept { return domain_; }
  const Graph& codomain() const noexcept { return codomain_; }
  const std::vector<Vertex>& vertex_map() const noexcept { return vertex_map_; }
  const std::vector<EdgeId>& edge_map() const noexcept { return edge_map_; }
  Vertex vertex_image(Vertex v) const { return vertex_map_[v]; }
  EdgeId edge_image(EdgeId e) const { return edge_map_[e]; }

  // Unique out-edge of v mapping to codomain edge c; c must leave vertex_image(v).
  EdgeId lift_edge(Vertex v, EdgeId c) const {
    return lift_[lift_offset_[v] + codomain_.out_rank(c)];
  }
  // v ._Phi c
  Vertex step(Vertex v, EdgeId c) const { return domain_.target(lift_edge(v, c)); }

  // Domain vertices over codomain vertex k, ascending.
  const std::vector<Vertex>& fiber(Vertex k) const { return fibers_[k]; }
  const std::vector<std::vector<Vertex>>& fibers() const noexcept { return fibers_; }

  friend bool operator==(const RightResolver& a, const RightResolver& b) {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ &&
           a.vertex_map_ == b.vertex_map_ && a.edge_map_ == b.edge_map_;
  }

 private:
  RightResolver() = default;

  Graph domain_;
  Graph codomain_;
  std::vector<Vertex> vertex_map_;
  std::vector<EdgeId> edge_map_;
  std::vector<std::size_t> lift_offset_;
  std::vector<EdgeId> lift_;
  std::vector<std::vector<Vertex>> fibers_;
};

class InvalidResolver : public Error {
 public:
  using Error::Error;
};

struct ResolverKind {
  bool right_resolving = true;
  bool left_resolving = false;
  bool bi_resolving = false;
};

ResolverKind kind(const RightResolver& phi);

// psi o phi. Throws Error unless codomain(phi) == domain(psi).
RightResolver compose(const RightResolver& psi, const RightResolver& phi);

struct Lift {
  Vertex terminal;
  std::vector<EdgeId> edges;  // domain edge ids of the lifted path
};

// The unique lift of w starting at `start`; w must start at vertex_image(start).
Lift lift_forward(const RightResolver& phi, Vertex start, const Path& w);

// u ._Phi end: vertices over i(u) whose lift of u ends at `end`.
// t(u) must equal vertex_image(end).
std::vector<Vertex> lift_backward(const RightResolver& phi, const Path& u, Vertex end);

// Uniformly random right resolver g -> b with the given vertex map: each
// (vertex, target fiber) group of out-edges gets an independent uniform
// bijection onto the matching parallel codomain edges.
RightResolver random_right_resolver(const Graph& g, const Graph& b,
                                    const std::vector<Vertex>& vertex_map, std::mt19937_64& rng);
RightResolver random_right_resolver(const Graph& g, const Graph& b,
                                    const std::vector<Vertex>& vertex_map, std::uint64_t seed);

inline constexpr std::size_t kBiResolverSearchBudget = 2'000'000;

// Backtracking search for a bi-resolver g -> h with the given vertex map.
// Each (vertex, target fiber) group of out-edges is assigned a bijection
// onto its parallel codomain edges while keeping every vertex's in-edge
// images distinct. Returns nullopt when the search space is exhausted and
// throws BoundExceeded when `budget` search nodes are used up.
std::optional<RightResolver> search_bi_resolver(const Graph& g, const Graph& h,
                                                const std::vector<Vertex>& vertex_map,
                                                std::size_t budget = kBiResolverSearchBudget);

// Uniform integer in [0, bound) with a fixed algorithm, so streams are
// identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
// splitmix64 finalizer, for deriving per-unit seeds from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace bunchy
