#pragma once

#include "bunchy/graph.hpp"
#include "bunchy/resolver.hpp"

namespace bunchy {

struct BunchyFactorResult {
  Graph b_graph;
  VertexPartition classes;  // canonical vertex map G -> B(G)
  RightResolver witness;    // G -> b_graph with vertex map `classes`
};

// B(G): the quotient by the smallest equivalence closed under "followers of
// related vertices that share a Sigma_G class are related". Throws Error
// unless g is strongly connected.
BunchyFactorResult compute_bunchy_factor(const Graph& g);

struct BunchyFactorization {
  RightResolver psi;    // G -> B(G)
  RightResolver delta;  // B(G) -> H
};

// Splits phi: G -> H (H bunchy) as phi = delta o psi through B(G).
// Throws Error if H is not bunchy, TheoremViolation if the split fails.
BunchyFactorization factor_through_bunchy(const RightResolver& phi);
BunchyFactorization factor_through_bunchy(const RightResolver& phi, const BunchyFactorResult& b);

}  // namespace bunchy
