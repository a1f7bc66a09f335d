#pragma once

// Finite directed multigraphs with loops and parallel edges. Edges are
// identified by their position in the edge list; every morphism in this
// library refers to edges by id, never by endpoint pair.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bunchy {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex source;
  Vertex target;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class Graph {
 public:
  Graph() = default;
  // Throws Error if an endpoint is out of range.
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  Vertex source(EdgeId e) const { return edges_[e].source; }
  Vertex target(EdgeId e) const { return edges_[e].target; }

  // Out- and in-edges of a vertex, in increasing edge id order.
  std::span<const EdgeId> out_edges(Vertex v) const;
  std::span<const EdgeId> in_edges(Vertex v) const;
  std::size_t out_degree(Vertex v) const { return out_edges(v).size(); }
  std::size_t in_degree(Vertex v) const { return in_edges(v).size(); }

  // Position of e within out_edges(source(e)).
  std::size_t out_rank(EdgeId e) const { return out_rank_[e]; }

  // Number of parallel edges u -> v.
  std::size_t multiplicity(Vertex u, Vertex v) const;
  // Row-major vertex_count x vertex_count edge multiplicities.
  std::vector<std::size_t> adjacency() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offset_;
  std::vector<EdgeId> out_list_;
  std::vector<std::size_t> in_offset_;
  std::vector<EdgeId> in_list_;
  std::vector<std::size_t> out_rank_;
};

// Graph with adjacency-matrix multiplicities; edges emitted in row-major
// order, parallel copies adjacent.
Graph graph_from_adjacency(std::size_t n, std::span<const std::size_t> matrix);

// A path anchored at `start`; consecutive edges must be adjacent.
struct Path {
  Vertex start = 0;
  std::vector<EdgeId> edges;

  bool empty() const noexcept { return edges.empty(); }
  friend bool operator==(const Path&, const Path&) = default;
};

// Throws Error unless p is a path in g.
void check_path(const Graph& g, const Path& p);
// Terminal vertex t(p); start for the empty path.
Vertex terminal(const Graph& g, const Path& p);

// A partition of vertices into classes numbered 0..class_count-1.
class VertexPartition {
 public:
  VertexPartition() = default;
  // Throws Error unless the labels are exactly 0..k-1 for some k.
  explicit VertexPartition(std::vector<std::size_t> class_of);

  // Relabels arbitrary class ids so classes are numbered by smallest member.
  static VertexPartition normalized(std::span<const std::size_t> labels);

  std::size_t size() const noexcept { return class_of_.size(); }
  std::size_t class_count() const noexcept { return class_count_; }
  std::size_t operator[](Vertex v) const { return class_of_[v]; }
  const std::vector<std::size_t>& labels() const noexcept { return class_of_; }
  std::vector<std::vector<Vertex>> classes() const;
  bool is_discrete() const noexcept { return class_count_ == class_of_.size(); }

  friend bool operator==(const VertexPartition&, const VertexPartition&) = default;

 private:
  std::vector<std::size_t> class_of_;
  std::size_t class_count_ = 0;
};

// JSON form {"num_vertices": n, "edges": [[s,t],...]}, written compactly.
Graph read_graph(std::string_view text);
std::string write_graph(const Graph& g);

bool is_strongly_connected(const Graph& g);

// gcd of cycle lengths. Throws Error unless g is strongly connected with at
// least one edge.
std::size_t period(const Graph& g);

inline constexpr std::size_t kBruteForceIsoBound = 8;

// Exhaustive search over vertex bijections. Throws BoundExceeded above
// kBruteForceIsoBound vertices.
bool brute_force_isomorphic(const Graph& g, const Graph& h);

}  // namespace bunchy
