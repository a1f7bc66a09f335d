#include <doctest.h>

#include <random>

#include "bunchy/errors.hpp"
#include "bunchy/graph.hpp"
#include "support.hpp"

using namespace bunchy;
using namespace bunchy::testing;

TEST_CASE("read_graph parses the fixture forms") {
  CHECK(read_graph(R"({"num_vertices":1,"edges":[[0,0],[0,0]]})") == m2());
  CHECK(read_graph(R"({"num_vertices":3,"edges":[[0,1],[0,2],[1,2],[1,2],[2,0],[2,0]]})") == w3());
}

TEST_CASE("read_graph rejects out-of-range endpoints and malformed text") {
  try {
    read_graph(R"({"num_vertices":2,"edges":[[0,1],[1,5]]})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("vertex index 5 out of range") != std::string::npos);
  }
  CHECK_THROWS_AS(read_graph("{"), Error);
  CHECK_THROWS_AS(read_graph(R"({"num_vertices":2})"), Error);
  CHECK_THROWS_AS(read_graph(R"({"num_vertices":2,"edges":[[0]]})"), Error);
  CHECK_THROWS_AS(read_graph(R"({"num_vertices":-1,"edges":[]})"), Error);
}

TEST_CASE("write_graph is the canonical compact form and round-trips") {
  const std::string text = R"({"num_vertices":3,"edges":[[0,1],[0,2],[1,2],[1,2],[2,0],[2,0]]})";
  CHECK(write_graph(read_graph(text)) == text);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Graph g = random_strongly_connected(rng, 6, 12);
    CHECK(read_graph(write_graph(g)) == g);
  }
}

TEST_CASE("edge ids are positional and adjacency lists are ordered") {
  const Graph g = w3();
  CHECK(g.edge_count() == 6);
  CHECK(std::vector<EdgeId>(g.out_edges(1).begin(), g.out_edges(1).end()) == std::vector<EdgeId>{2, 3});
  CHECK(std::vector<EdgeId>(g.in_edges(0).begin(), g.in_edges(0).end()) == std::vector<EdgeId>{4, 5});
  CHECK(g.out_rank(3) == 1);
  CHECK(g.multiplicity(1, 2) == 2);
  CHECK(g.multiplicity(2, 1) == 0);
}

TEST_CASE("graph_from_adjacency emits row-major parallel copies") {
  const Graph g = t1();
  CHECK(g.edges() == std::vector<Edge>{{0, 0}, {0, 0}, {0, 1}, {1, 0}});
  CHECK(g.adjacency() == std::vector<std::size_t>{2, 1, 1, 0});
}

TEST_CASE("is_strongly_connected") {
  CHECK(is_strongly_connected(k3()));
  CHECK_FALSE(is_strongly_connected(Graph(2, {{0, 1}})));
  CHECK(is_strongly_connected(c2x2()));
  CHECK(is_strongly_connected(Graph(1, {})));
  CHECK_FALSE(is_strongly_connected(Graph(2, {})));
}

TEST_CASE("period") {
  CHECK(period(directed_cycle(3)) == 3);
  CHECK(period(t3()) == 2);
  CHECK(period(w3()) == 1);
  CHECK(period(m2()) == 1);
  CHECK_THROWS_AS(period(Graph(1, {})), Error);
  CHECK_THROWS_AS(period(Graph(2, {{0, 1}})), Error);
}

TEST_CASE("period and connectivity agree with exhaustive oracles") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + uniform_below(rng, 6);
    std::vector<Edge> edges;
    const std::size_t m = uniform_below(rng, 13);
    for (std::size_t k = 0; k < m; ++k)
      edges.push_back({static_cast<Vertex>(uniform_below(rng, n)), static_cast<Vertex>(uniform_below(rng, n))});
    const Graph g(n, edges);
    REQUIRE(is_strongly_connected(g) == oracle_strongly_connected(g));
    if (is_strongly_connected(g) && g.edge_count() > 0) CHECK(period(g) == oracle_period(g));
  }
}

TEST_CASE("brute_force_isomorphic") {
  CHECK(brute_force_isomorphic(t1(), t1()));
  CHECK_FALSE(brute_force_isomorphic(t1(), t2()));
  CHECK_FALSE(brute_force_isomorphic(m2(), c2x2()));
  const Graph relabelled(3, {{1, 0}, {1, 2}, {0, 2}, {0, 2}, {2, 1}, {2, 1}});
  CHECK(brute_force_isomorphic(w3(), relabelled));
  CHECK_FALSE(brute_force_isomorphic(w3(), k3()));
  CHECK_THROWS_AS(brute_force_isomorphic(directed_cycle(9), directed_cycle(9)), BoundExceeded);
}

TEST_CASE("paths") {
  const Graph g = w3();
  CHECK(terminal(g, Path{0, {1, 4}}) == 0);
  CHECK(terminal(g, Path{2, {}}) == 2);
  CHECK_NOTHROW(check_path(g, Path{0, {0, 2, 5}}));
  CHECK_THROWS_AS(check_path(g, Path{0, {0, 4}}), Error);
  CHECK_THROWS_AS(check_path(g, Path{1, {0}}), Error);
}

TEST_CASE("vertex partitions") {
  CHECK_THROWS_AS(VertexPartition({0, 2}), Error);
  const VertexPartition p = VertexPartition::normalized(std::vector<std::size_t>{7, 3, 7, 1});
  CHECK(p.labels() == std::vector<std::size_t>{0, 1, 0, 2});
  CHECK(p.class_count() == 3);
  CHECK_FALSE(p.is_discrete());
  CHECK(p.classes() == std::vector<std::vector<Vertex>>{{0, 2}, {1}, {3}});
}
