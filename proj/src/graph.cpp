#include "bunchy/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "bunchy/errors.hpp"
#include "bunchy/io.hpp"

namespace bunchy {

namespace {

void build_index(std::size_t n, const std::vector<Edge>& edges, bool by_source,
                 std::vector<std::size_t>& offset, std::vector<EdgeId>& list) {
  offset.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++offset[(by_source ? e.source : e.target) + 1];
  }
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  list.resize(edges.size());
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Vertex v = by_source ? edges[id].source : edges[id].target;
    list[fill[v]++] = id;
  }
}

}  // namespace

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    for (Vertex v : {e.source, e.target}) {
      if (v >= vertex_count_) {
        std::ostringstream msg;
        msg << "vertex index " << v << " out of range (edge " << i
            << ", num_vertices " << vertex_count_ << ")";
        throw Error(msg.str());
      }
    }
  }
  build_index(vertex_count_, edges_, true, out_offset_, out_list_);
  build_index(vertex_count_, edges_, false, in_offset_, in_list_);
  out_rank_.assign(edges_.size(), 0);
  for (Vertex v = 0; v < vertex_count_; ++v) {
    auto out = out_edges(v);
    for (std::size_t k = 0; k < out.size(); ++k) out_rank_[out[k]] = k;
  }
}

std::span<const EdgeId> Graph::out_edges(Vertex v) const {
  return {out_list_.data() + out_offset_[v], out_offset_[v + 1] - out_offset_[v]};
}

std::span<const EdgeId> Graph::in_edges(Vertex v) const {
  return {in_list_.data() + in_offset_[v], in_offset_[v + 1] - in_offset_[v]};
}

std::size_t Graph::multiplicity(Vertex u, Vertex v) const {
  std::size_t count = 0;
  for (EdgeId e : out_edges(u)) count += edges_[e].target == v;
  return count;
}

std::vector<std::size_t> Graph::adjacency() const {
  std::vector<std::size_t> m(vertex_count_ * vertex_count_, 0);
  for (const Edge& e : edges_) ++m[e.source * vertex_count_ + e.target];
  return m;
}

Graph graph_from_adjacency(std::size_t n, std::span<const std::size_t> matrix) {
  if (matrix.size() != n * n) throw Error("adjacency matrix has wrong size");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < matrix[u * n + v]; ++k) edges.push_back({u, v});
    }
  }
  return Graph(n, std::move(edges));
}

void check_path(const Graph& g, const Path& p) {
  if (p.start >= g.vertex_count()) throw Error("path anchor out of range");
  Vertex at = p.start;
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    const EdgeId e = p.edges[k];
    if (e >= g.edge_count()) throw Error("path edge id out of range");
    if (g.source(e) != at) {
      std::ostringstream msg;
      msg << "path is not adjacent at step " << k << " (edge " << e << ")";
      throw Error(msg.str());
    }
    at = g.target(e);
  }
}

Vertex terminal(const Graph& g, const Path& p) {
  return p.edges.empty() ? p.start : g.target(p.edges.back());
}

VertexPartition::VertexPartition(std::vector<std::size_t> class_of)
    : class_of_(std::move(class_of)) {
  std::size_t k = 0;
  for (std::size_t c : class_of_) k = std::max(k, c + 1);
  std::vector<bool> seen(k, false);
  for (std::size_t c : class_of_) seen[c] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error("partition class indices are not contiguous");
  }
  class_count_ = k;
}

VertexPartition VertexPartition::normalized(std::span<const std::size_t> labels) {
  std::vector<std::size_t> out(labels.size());
  std::vector<std::pair<std::size_t, std::size_t>> seen;  // (raw, new)
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& p) { return p.first == labels[v]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[v], seen.size());
      out[v] = seen.back().second;
    } else {
      out[v] = it->second;
    }
  }
  return VertexPartition(std::move(out));
}

std::vector<std::vector<Vertex>> VertexPartition::classes() const {
  std::vector<std::vector<Vertex>> out(class_count_);
  for (Vertex v = 0; v < class_of_.size(); ++v) out[class_of_[v]].push_back(v);
  return out;
}

Graph read_graph(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed graph JSON: ") + e.what());
  }
  return graph_from_json(j);
}

std::string write_graph(const Graph& g) { return graph_to_json(g).dump(); }

namespace {

std::vector<bool> reachable(const Graph& g, Vertex from, bool forward) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<Vertex> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (EdgeId e : forward ? g.out_edges(v) : g.in_edges(v)) {
      const Vertex w = forward ? g.target(e) : g.source(e);
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_strongly_connected(const Graph& g) {
  if (g.vertex_count() <= 1) return true;
  auto all = [](const std::vector<bool>& s) {
    return std::all_of(s.begin(), s.end(), [](bool b) { return b; });
  };
  return all(reachable(g, 0, true)) && all(reachable(g, 0, false));
}

std::size_t period(const Graph& g) {
  if (g.edge_count() == 0) throw Error("period of an edgeless graph is undefined");
  if (!is_strongly_connected(g)) throw Error("period requires a strongly connected graph");
  std::vector<std::size_t> level(g.vertex_count(), SIZE_MAX);
  std::queue<Vertex> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const Vertex v = q.front();
    q.pop();
    for (EdgeId e : g.out_edges(v)) {
      const Vertex w = g.target(e);
      if (level[w] == SIZE_MAX) {
        level[w] = level[v] + 1;
        q.push(w);
      }
    }
  }
  std::size_t d = 0;
  for (const Edge& e : g.edges()) {
    const auto lu = static_cast<long long>(level[e.source]) + 1;
    const auto lv = static_cast<long long>(level[e.target]);
    d = std::gcd(d, static_cast<std::size_t>(lu > lv ? lu - lv : lv - lu));
  }
  return d;
}

bool brute_force_isomorphic(const Graph& g, const Graph& h) {
  if (g.vertex_count() > kBruteForceIsoBound || h.vertex_count() > kBruteForceIsoBound) {
    throw BoundExceeded("brute-force isomorphism is limited to 8 vertices");
  }
  if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return false;
  const std::size_t n = g.vertex_count();
  const auto a = g.adjacency();
  const auto b = h.adjacency();
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u) {
      for (std::size_t v = 0; v < n && ok; ++v) {
        ok = a[u * n + v] == b[perm[u] * n + perm[v]];
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace bunchy
