#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "bunchy/bunchy_factor.hpp"
#include "bunchy/constructors.hpp"
#include "bunchy/errors.hpp"
#include "bunchy/experiments.hpp"
#include "bunchy/io.hpp"
#include "bunchy/minimal_factor.hpp"
#include "bunchy/stability.hpp"
#include "support.hpp"

using namespace bunchy;
using namespace bunchy::testing;

namespace {

RightResolver c2x2_onto_m2() {
  return RightResolver::validate(c2x2(), m2(), {0, 0}, {0, 1, 0, 1});
}

RightResolver k3_swapped() {
  std::vector<EdgeId> e = k3_two_permutation().edge_map();
  std::swap(e[0], e[1]);
  return RightResolver::validate(k3(), m2(), {0, 0, 0}, e);
}

// Members of each synchronization class: vertices of the fiber with equal
// image under w.
std::vector<std::vector<Vertex>> classes_under(const RightResolver& phi, Vertex fiber, const Path& w) {
  std::map<Vertex, std::vector<Vertex>> by_end;
  for (Vertex v : phi.fiber(fiber)) by_end[lift_forward(phi, v, w).terminal].push_back(v);
  std::vector<std::vector<Vertex>> out;
  for (auto& [end, members] : by_end) out.push_back(members);
  return out;
}

}  // namespace

TEST_CASE("pair_synchronizable") {
  const auto w = pair_synchronizable(phi_w3(), 0, 1);
  REQUIRE(w);
  CHECK(w->edges == std::vector<EdgeId>{1});
  CHECK_FALSE(pair_synchronizable(c2x2_onto_m2(), 0, 1));
  const auto same = pair_synchronizable(phi_w3(), 2, 2);
  REQUIRE(same);
  CHECK(same->empty());
  CHECK_THROWS_AS(pair_synchronizable(RightResolver::identity(c2x2()), 0, 1), Error);
}

TEST_CASE("compute_stability on the fixtures") {
  const StabilityReport id = compute_stability(RightResolver::identity(k3()));
  CHECK(id.trivial());
  CHECK(id.synchronizing);

  const StabilityReport w = compute_stability(phi_w3());
  CHECK(w.partition.class_count() == 1);
  CHECK(w.synchronizing);
  CHECK(w.stable_pairs.size() == 3);

  const StabilityReport c = compute_stability(c2x2_onto_m2());
  CHECK(c.trivial());
  CHECK_FALSE(c.synchronizing);
}

TEST_CASE("stable pair witnesses collapse their pair") {
  const RightResolver phi = phi_w3();
  for (const PairWitness& p : compute_stability(phi).stable_pairs) {
    CHECK(lift_forward(phi, p.first, p.word).terminal == lift_forward(phi, p.second, p.word).terminal);
  }
  // b r b collapses the whole fiber.
  CHECK(push_set(phi, {0, 1, 2}, Path{0, {1, 0, 1}}).size() == 1);
}

TEST_CASE("is_synchronizing agrees with the fiber-collapse characterization") {
  CHECK(is_synchronizing(phi_w3()));
  CHECK_FALSE(is_synchronizing(c2x2_onto_m2()));
  CHECK(is_synchronizing(RightResolver::identity(w3())));
  std::mt19937_64 rng(41);
  for (int i = 0; i < 300; ++i) {
    const RightResolver phi = random_resolver(random_strongly_connected(rng, 6, 12), rng);
    const bool s = is_synchronizing(phi);
    CHECK(s == every_fiber_collapses(phi));
    CHECK(s == oracle_every_fiber_collapses(phi));
  }
}

TEST_CASE("stability matches the definition on random resolvers") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 200; ++i) {
    const RightResolver phi = random_resolver(random_strongly_connected(rng, 6, 12), rng);
    CAPTURE(write_resolver(phi));
    CHECK(compute_stability(phi).partition.labels() == oracle_stability_labels(phi));
    const PairSynchronizer sync(phi);
    const PairGraph& pg = sync.pairs();
    for (std::size_t node = 1; node < pg.node_count(); ++node) {
      const auto [a, b] = pg.members(node);
      CHECK(sync.synchronizable(node) == oracle_pair_synchronizable(phi, a, b));
    }
  }
}

TEST_CASE("stability_quotient") {
  const StabilityQuotient w = stability_quotient(phi_w3());
  CHECK(w.quotient == m2());
  CHECK(compose(w.delta, w.psi) == phi_w3());
  CHECK(w.delta.domain().vertex_count() == 1);

  const StabilityQuotient id = stability_quotient(RightResolver::identity(k3()));
  CHECK(id.quotient == k3());
  CHECK(id.psi == RightResolver::identity(k3()));

  const StabilityQuotient s = stability_quotient(k3_swapped());
  CHECK(s.quotient == m2());
  CHECK(is_synchronizing(s.psi));
}

TEST_CASE("swapped K3 resolver relates every pair") {
  const StabilityReport r = compute_stability(k3_swapped());
  CHECK(r.stable(1, 2));
  CHECK(r.stable(0, 2));
  CHECK(r.synchronizing);
}

TEST_CASE("minimal images") {
  const auto c = minimal_images(c2x2_onto_m2());
  REQUIRE(c.size() == 1);
  CHECK(c[0].members == std::vector<Vertex>{0, 1});

  for (const MinimalImage& m : minimal_images(phi_w3())) CHECK(m.members.size() == 1);
  const auto id = minimal_images(RightResolver::identity(k3()));
  REQUIRE(id.size() == 3);
  for (Vertex k = 0; k < 3; ++k) CHECK(id[k].members == std::vector<Vertex>{k});

  std::mt19937_64 rng(47);
  for (int i = 0; i < 100; ++i) {
    const RightResolver phi = random_resolver(random_strongly_connected(rng, 6, 12), rng);
    for (const MinimalImage& m : minimal_images(phi)) {
      CHECK(push_set(phi, phi.fiber(m.anchor), m.word) == m.members);
      // No pair in a minimal image can be merged.
      for (std::size_t a = 0; a < m.members.size(); ++a)
        for (std::size_t b = a + 1; b < m.members.size(); ++b)
          CHECK_FALSE(oracle_pair_synchronizable(phi, m.members[a], m.members[b]));
    }
  }
}

TEST_CASE("maximal synchronized sets") {
  for (const SynchronizedSet& s : maximal_synchronized_sets(RightResolver::identity(k3()), 1)) {
    CHECK(s.members == std::vector<Vertex>{1});
  }
  for (const SynchronizedSet& s : maximal_synchronized_sets(k3_two_permutation(), 0)) {
    CHECK(s.members.size() == 1);
  }
  const RightResolver swapped = k3_swapped();
  const auto sets = maximal_synchronized_sets(swapped, 0);
  REQUIRE_FALSE(sets.empty());
  for (const SynchronizedSet& s : sets) {
    CHECK(s.members.size() >= 2);
    CHECK(lift_backward(swapped, s.word, s.end) == s.members);
  }
  CHECK_THROWS_AS(maximal_synchronized_sets(swapped, 0, MssOptions{2, 8}), BoundExceeded);
}

TEST_CASE("mss_partition_word") {
  CHECK(mss_partition_word(RightResolver::identity(c2x2()), 0).empty());
  CHECK(mss_partition_word(k3_two_permutation(), 0).empty());

  const RightResolver swapped = k3_swapped();
  const Path w = mss_partition_word(swapped, 0);
  std::set<std::vector<Vertex>> mss;
  for (const SynchronizedSet& s : maximal_synchronized_sets(swapped, 0)) mss.insert(s.members);
  for (const auto& cls : classes_under(swapped, 0, w)) CHECK(mss.count(cls) == 1);

  // W3 admits no bi-resolver onto M2.
  CHECK_THROWS_AS(mss_partition_word(phi_w3(), 0), Error);
}

TEST_CASE("mss_partition_word on random bi-resolving extensions") {
  std::mt19937_64 rng(53);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 40; ++i) {
    const Graph g = random_strongly_connected(rng, 6, 12);
    if (g.vertex_count() > 6) continue;
    std::optional<RightResolver> bi;
    try {
      bi = find_biresolver(g);
    } catch (const BoundExceeded&) {
      continue;
    }
    if (!bi) continue;
    const BunchyFactorResult bf = compute_bunchy_factor(g);
    std::vector<Vertex> vmap(g.vertex_count());
    for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(bf.classes[v]);
    const RightResolver phi = random_right_resolver(g, bf.b_graph, vmap, rng);
    for (Vertex k = 0; k < bf.b_graph.vertex_count(); ++k) {
      const Path w = mss_partition_word(phi, k);
      std::set<std::vector<Vertex>> mss;
      for (const SynchronizedSet& s : maximal_synchronized_sets(phi, k)) mss.insert(s.members);
      for (const auto& cls : classes_under(phi, k, w)) CHECK(mss.count(cls) == 1);
    }
    ++checked;
  }
  CHECK(checked > 10);
}
