#include <doctest.h>

#include <random>

#include "bunchy/bunchy_factor.hpp"
#include "bunchy/constructors.hpp"
#include "bunchy/errors.hpp"
#include "bunchy/io.hpp"
#include "bunchy/minimal_factor.hpp"
#include "bunchy/reports.hpp"
#include "bunchy/stability.hpp"
#include "support.hpp"

using namespace bunchy;
using namespace bunchy::testing;

TEST_CASE("find_nonbunchy_witness") {
  CHECK_FALSE(find_nonbunchy_witness(c2x2()));
  const auto w = find_nonbunchy_witness(w3());
  REQUIRE(w);
  CHECK(*w == NonBunchyWitness{0, 0, 1, 1, 2});
  const auto k = find_nonbunchy_witness(k3());
  REQUIRE(k);
  CHECK(k->parent == 0);
  CHECK(k->first_follower == 1);
  CHECK(k->second_follower == 2);
}

TEST_CASE("wab_stable_resolver on W3") {
  const RightResolver phi = wab_stable_resolver(w3());
  CHECK(phi.codomain() == m2());
  const StabilityReport r = compute_stability(phi);
  CHECK(r.partition.class_count() == 1);
  CHECK(r.synchronizing);
  // Either order of the two colours on the pinned pair gives non-trivial
  // stability.
  std::vector<EdgeId> e = phi.edge_map();
  std::swap(e[0], e[1]);
  CHECK_FALSE(compute_stability(RightResolver::validate(w3(), m2(), {0, 0, 0}, e)).trivial());
  CHECK_THROWS_AS(wab_stable_resolver(k3()), Error);
  CHECK_THROWS_AS(wab_stable_resolver(c2x2()), Error);
}

TEST_CASE("find_biresolver") {
  const auto k = find_biresolver(k3());
  REQUIRE(k);
  CHECK(kind(*k).bi_resolving);
  CHECK(k->codomain() == m2());
  CHECK_FALSE(find_biresolver(w3()));
  const auto c = find_biresolver(c2x2());
  REQUIRE(c);
  CHECK(c->codomain() == c2x2());
}

TEST_CASE("biresolving_swap on K3") {
  const SwapResult s = biresolving_swap(k3(), k3_two_permutation());
  CHECK(s.witness.parent == 0);
  std::vector<EdgeId> expected = k3_two_permutation().edge_map();
  std::swap(expected[0], expected[1]);
  CHECK(s.resolver.edge_map() == expected);
  CHECK(s.quotient.report.stable(1, 2));
  CHECK(s.quotient.report.stable(0, 2));
  CHECK(s.quotient.quotient == m2());
  CHECK(is_synchronizing(s.resolver));
  CHECK_THROWS_AS(biresolving_swap(c2x2(), RightResolver::identity(c2x2())), Error);
  CHECK_THROWS_AS(biresolving_swap(w3(), phi_w3()), Error);
}

TEST_CASE("synthesize_synchronizer fixtures") {
  const SynthesisTrace w = synthesize_synchronizer(w3());
  CHECK(w.route == SynthesisRoute::weakly_almost_bunchy);
  CHECK(w.steps.size() == 1);
  CHECK(w.steps[0].quotient == m2());
  REQUIRE(w.final_resolver);
  CHECK(w.final_resolver->codomain() == m2());
  CHECK(is_synchronizing(*w.final_resolver));

  const SynthesisTrace k = synthesize_synchronizer(k3());
  CHECK(k.route == SynthesisRoute::bi_resolving);
  CHECK(k.steps.size() == 1);
  CHECK(k.steps[0].quotient == m2());
  REQUIRE(k.final_resolver);
  CHECK(is_synchronizing(*k.final_resolver));

  const SynthesisTrace c = synthesize_synchronizer(c2x2());
  CHECK(c.route == SynthesisRoute::already_bunchy);
  CHECK(c.steps.empty());
  REQUIRE(c.final_resolver);
  CHECK(*c.final_resolver == RightResolver::identity(c2x2()));

  CHECK_THROWS_AS(synthesize_synchronizer(Graph(2, {{0, 1}, {1, 1}})), Error);
}

TEST_CASE("synthesis trace JSON") {
  const Json j = synthesis_trace_to_json(synthesize_synchronizer(w3()));
  CHECK(j["route"] == "weakly-almost-bunchy");
  CHECK(j["steps"].size() == 1);
  CHECK(j["final"]["codomain"]["num_vertices"] == 1);
  CHECK(j["heuristic"] == false);
}

TEST_CASE("synthesize_synchronizer on random small graphs") {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 150; ++i) {
    const Graph g = random_strongly_connected(rng, 6, 12);
    CAPTURE(write_graph(g));
    const SynthesisTrace t = synthesize_synchronizer(g);
    REQUIRE(t.final_resolver);
    CHECK(is_synchronizing(*t.final_resolver));
    CHECK(t.final_resolver->codomain() == compute_bunchy_factor(g).b_graph);
    std::size_t last = g.vertex_count();
    for (const SynthesisStep& s : t.steps) {
      CHECK(s.quotient.vertex_count() < s.graph.vertex_count());
      CHECK(s.graph.vertex_count() == last);
      last = s.quotient.vertex_count();
    }
  }
}
