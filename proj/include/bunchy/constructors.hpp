#pragma once

// Constructive routes to a synchronizing right resolver G -> B(G): the
// weakly-almost-bunchy colouring with a forced stable pair, the colour swap
// on bi-resolvers, and the quotient-and-recurse pipeline built on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bunchy/graph.hpp"
#include "bunchy/resolver.hpp"
#include "bunchy/stability.hpp"

namespace bunchy {

// A vertex with two out-edges to distinct followers in the same Sigma_G class.
struct NonBunchyWitness {
  Vertex parent;
  EdgeId first_edge;
  EdgeId second_edge;
  Vertex first_follower;
  Vertex second_follower;
  friend bool operator==(const NonBunchyWitness&, const NonBunchyWitness&) = default;
};

// Smallest (parent, first_edge, second_edge); nullopt iff g is bunchy.
std::optional<NonBunchyWitness> find_nonbunchy_witness(const Graph& g);

// Right resolver g -> M(g) with non-trivial stability, for strongly
// connected weakly almost bunchy g that is not bunchy. Throws Error on a
// violated precondition and TheoremViolation if stability comes out trivial.
RightResolver wab_stable_resolver(const Graph& g);

// A bi-resolver g -> B(g) with the canonical vertex map, or nullopt.
// Throws BoundExceeded if the search budget runs out.
std::optional<RightResolver> find_biresolver(const Graph& g);

struct SwapResult {
  RightResolver resolver;  // phi with the colours of the witness edges exchanged
  NonBunchyWitness witness;
  StabilityQuotient quotient;  // quotient.delta is bi-resolving
};

// phi must be a bi-resolver from non-bunchy g onto a bunchy graph.
SwapResult biresolving_swap(const Graph& g, const RightResolver& phi);

enum class SynthesisRoute { already_bunchy, weakly_almost_bunchy, bi_resolving, heuristic };

std::string to_string(SynthesisRoute route);

struct SynthesisStep {
  Graph graph;               // graph at the start of the step
  RightResolver resolver;    // resolver with non-trivial stability
  VertexPartition classes;   // its stability classes
  Graph quotient;            // strictly smaller
};

struct SynthesisTrace {
  SynthesisRoute route = SynthesisRoute::already_bunchy;
  std::vector<SynthesisStep> steps;
  std::optional<RightResolver> final_resolver;  // G -> B(G), synchronizing
  std::size_t heuristic_trials = 0;

  bool heuristic() const { return route == SynthesisRoute::heuristic; }
};

struct SynthesisOptions {
  std::uint64_t seed = 0;
  std::size_t heuristic_cap = 10'000;
  // Quotients up to this many edges are re-searched for a bi-resolver.
  std::size_t biresolver_recheck_edges = 40;
};

// Throws Error unless g is strongly connected, TheoremViolation when a
// proven step fails, and ConjectureFailure when the heuristic fallback
// exhausts its cap.
SynthesisTrace synthesize_synchronizer(const Graph& g, const SynthesisOptions& options = {});

}  // namespace bunchy
