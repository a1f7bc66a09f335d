#pragma once

#include "bunchy/graph.hpp"
#include "bunchy/resolver.hpp"

namespace bunchy {

struct MinimalFactorResult {
  Graph m_graph;
  VertexPartition sigma;  // class c of G corresponds to vertex c of m_graph
  RightResolver witness;  // G -> m_graph with vertex map sigma
};

// Coarsest partition in which all vertices of a class have the same number
// of out-edges into every class, found by iterated splitting from the
// one-class partition. Classes are numbered by smallest member.
VertexPartition coarsest_out_equitable(const Graph& g);

// Quotient of g by an out-equitable partition: one vertex per class and
// E_C^D equal to the common per-vertex count. Edges ordered by (C, D).
Graph equitable_quotient(const Graph& g, const VertexPartition& p);

// The canonical right resolver g -> equitable_quotient(g, p): within each
// (vertex, target class) group edges are paired in edge id order.
RightResolver quotient_resolver(const Graph& g, const VertexPartition& p, const Graph& q);

bool is_out_equitable(const Graph& g, const VertexPartition& p);

// M(G) and Sigma_G. Throws Error unless g is strongly connected.
MinimalFactorResult compute_minimal_factor(const Graph& g);

// True iff g is its own minimal factor (refinement separates all vertices).
bool is_minimal(const Graph& g);

// Isomorphism of minimal graphs by joint refinement of the disjoint union.
// Throws Error if either input is not minimal.
bool minimal_iso(const Graph& m1, const Graph& m2);

struct BunchyClass {
  bool is_bunchy = false;
  bool is_almost_bunchy = false;
  bool is_weakly_almost_bunchy = false;
};

// Throws Error unless g is strongly connected.
BunchyClass classify(const Graph& g);

}  // namespace bunchy
