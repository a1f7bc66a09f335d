#pragma once

// Fixtures, independent oracles and generators shared by the test programs.
// The oracles deliberately avoid the library's own algorithms: they work
// from the definitions with plain set and path searches.

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "bunchy/graph.hpp"
#include "bunchy/resolver.hpp"

namespace bunchy::testing {

Graph mk(std::size_t k);  // one vertex, k loops
Graph m2();
Graph c2x2();
Graph k3();
Graph w3();
Graph t1();
Graph t2();
Graph t3();
Graph directed_cycle(std::size_t n);

// W3 -> M2 with colours r = 0, b = 1.
RightResolver phi_w3();
// K3 -> M2 where each colour is a vertex permutation.
RightResolver k3_two_permutation();

bool oracle_strongly_connected(const Graph& g);
// gcd of simple cycle lengths, by exhaustive cycle enumeration.
std::size_t oracle_period(const Graph& g);

// Some codomain word sends a and b to one vertex (forward set search).
bool oracle_pair_synchronizable(const RightResolver& phi, Vertex a, Vertex b);
// Stability straight from the definition: every pair reachable from {a, b}
// by a word of length at most (same-fiber pair count + 1) is synchronizable.
bool oracle_stable(const RightResolver& phi, Vertex a, Vertex b);
// Class label per vertex, from oracle_stable on all pairs.
std::vector<std::size_t> oracle_stability_labels(const RightResolver& phi);
// Some word collapses each fiber to a single vertex.
bool oracle_every_fiber_collapses(const RightResolver& phi);

// Every strongly connected graph with 1..max_vertices vertices and
// 1..max_edges edges, one per isomorphism class.
std::vector<Graph> strongly_connected_graphs(std::size_t max_vertices, std::size_t max_edges);

// Random strongly connected graph: a Hamiltonian cycle on a random vertex
// count plus random extra edges.
Graph random_strongly_connected(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_edges);
// Random strongly connected graph with constant out-degree 2.
Graph random_out_degree_two(std::mt19937_64& rng, std::size_t n);

// A random right resolver onto the quotient by a random out-equitable
// partition of g.
RightResolver random_resolver(const Graph& g, std::mt19937_64& rng);

// Calls visit on every right resolver out of g whose codomain is the
// quotient by one of g's out-equitable partitions.
void for_each_quotient_resolver(const Graph& g, const std::function<void(const RightResolver&)>& visit);

}  // namespace bunchy::testing
