#pragma once

// Stability of right resolvers. Everything here is driven by the pair graph:
// nodes are unordered pairs of distinct vertices in a common fiber plus one
// diagonal node, and codomain edge c sends {a, b} to {a.c, b.c}. A pair is
// synchronizable iff it reaches the diagonal, and stable iff every pair it
// reaches is synchronizable. Since pair orbits live in this finite graph, the
// unbounded "for every prefix word" quantifier reduces to reachability.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bunchy/graph.hpp"
#include "bunchy/resolver.hpp"

namespace bunchy {

class PairGraph {
 public:
  static constexpr std::size_t kDiagonal = 0;
  static constexpr std::size_t kNone = SIZE_MAX;

  explicit PairGraph(const RightResolver& phi);

  std::size_t node_count() const noexcept { return pairs_.size(); }
  // Node of {a, b}: kDiagonal if a == b, kNone if the fibers differ.
  std::size_t node(Vertex a, Vertex b) const;
  // Members of a non-diagonal node, first < second.
  std::pair<Vertex, Vertex> members(std::size_t node) const { return pairs_[node]; }
  // Common codomain vertex of a non-diagonal node.
  Vertex image(std::size_t node) const;
  // Successor along codomain edge c, which must leave image(node).
  std::size_t next(std::size_t node, EdgeId c) const;

  const RightResolver& resolver() const noexcept { return *phi_; }

 private:
  const RightResolver* phi_;
  std::vector<std::pair<Vertex, Vertex>> pairs_;  // index 0 unused (diagonal)
  std::vector<std::size_t> index_;                // n x n
};

// Shortest synchronizing words for every pair of a resolver.
class PairSynchronizer {
 public:
  explicit PairSynchronizer(const RightResolver& phi);

  const PairGraph& pairs() const noexcept { return graph_; }
  bool synchronizable(std::size_t node) const { return dist_[node] != SIZE_MAX; }
  // Word from image(node) collapsing the pair; nullopt if none exists.
  std::optional<Path> witness(std::size_t node) const;

 private:
  PairGraph graph_;
  std::vector<std::size_t> dist_;
  std::vector<EdgeId> via_;
};

// Throws Error if a and b lie in different fibers.
std::optional<Path> pair_synchronizable(const RightResolver& phi, Vertex a, Vertex b);

struct PairWitness {
  Vertex first;
  Vertex second;
  Path word;
};

struct StabilityReport {
  VertexPartition partition;  // stability classes, numbered by smallest member
  bool synchronizing = false;
  // Stable pairs of distinct vertices, first < second, with a shortest word
  // collapsing each one.
  std::vector<PairWitness> stable_pairs;

  bool stable(Vertex a, Vertex b) const { return a == b || partition[a] == partition[b]; }
  bool trivial() const { return partition.is_discrete(); }
};

// Throws TheoremViolation if the computed relation fails to be an
// equivalence or a congruence.
StabilityReport compute_stability(const RightResolver& phi);

bool is_synchronizing(const RightResolver& phi);

inline constexpr std::size_t kSubsetSearchBound = 1u << 20;

// Independent characterization: every fiber can be driven to a single
// vertex by one codomain word. Exhaustive subset search; throws
// BoundExceeded past 64 domain vertices or kSubsetSearchBound states.
bool every_fiber_collapses(const RightResolver& phi);

struct StabilityQuotient {
  Graph quotient;
  RightResolver psi;    // G -> G/~, synchronizing
  RightResolver delta;  // G/~ -> H, trivial stability, phi = delta o psi
  StabilityReport report;
};

// Vertices are stability classes; edge [e] is keyed by (class of i(e), phi(e)),
// ordered by class then codomain out-edge order.
StabilityQuotient stability_quotient(const RightResolver& phi);

struct MinimalImage {
  Vertex anchor = 0;  // codomain vertex whose fiber was collapsed
  Path word;          // from anchor
  std::vector<Vertex> members;
};

// One minimal image per codomain vertex: its fiber is pushed along shortest
// pair-collapsing words until no two members can be merged.
std::vector<MinimalImage> minimal_images(const RightResolver& phi);

// u ._Phi S for a set of vertices in one fiber and codomain edge u.
std::vector<Vertex> lift_set_backward(const RightResolver& phi, EdgeId u, const std::vector<Vertex>& set);
// S ._Phi w; the result is sorted and duplicate-free.
std::vector<Vertex> push_set(const RightResolver& phi, std::vector<Vertex> set, const Path& w);

struct MssOptions {
  std::size_t max_vertices = 12;
  std::size_t max_fiber = 8;
};

struct SynchronizedSet {
  std::vector<Vertex> members;
  Vertex end = 0;  // members = word ._Phi end
  Path word;
};

// Every maximal synchronized set inside the fiber over `fiber`. Throws
// BoundExceeded beyond the options' sizes.
std::vector<SynchronizedSet> maximal_synchronized_sets(const RightResolver& phi, Vertex fiber,
                                                       const MssOptions& options = {});

// A word from `fiber` whose synchronization classes on that fiber are all
// maximal synchronized sets. Requires a bunchy codomain and a bi-resolver
// onto it with phi's vertex map; throws Error otherwise.
Path mss_partition_word(const RightResolver& phi, Vertex fiber, const MssOptions& options = {});

}  // namespace bunchy
