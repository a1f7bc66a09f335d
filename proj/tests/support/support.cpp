#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "bunchy/experiments.hpp"
#include "bunchy/minimal_factor.hpp"

namespace bunchy::testing {

Graph mk(std::size_t k) { return Graph(1, std::vector<Edge>(k, Edge{0, 0})); }
Graph m2() { return mk(2); }
Graph c2x2() { return Graph(2, {{0, 1}, {0, 1}, {1, 0}, {1, 0}}); }
Graph k3() { return Graph(3, {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}); }
Graph w3() { return Graph(3, {{0, 1}, {0, 2}, {1, 2}, {1, 2}, {2, 0}, {2, 0}}); }

namespace {
Graph two_by_two(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const std::vector<std::size_t> m{a, b, c, d};
  return graph_from_adjacency(2, m);
}
}  // namespace

Graph t1() { return two_by_two(2, 1, 1, 0); }
Graph t2() { return two_by_two(1, 2, 1, 0); }
Graph t3() { return two_by_two(0, 3, 1, 0); }

Graph directed_cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.push_back({v, static_cast<Vertex>((v + 1) % n)});
  return Graph(n, e);
}

RightResolver phi_w3() { return RightResolver::validate(w3(), m2(), {0, 0, 0}, {0, 1, 0, 1, 0, 1}); }

RightResolver k3_two_permutation() {
  return RightResolver::validate(k3(), m2(), {0, 0, 0}, {0, 1, 1, 0, 0, 1});
}

bool oracle_strongly_connected(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (Vertex v = 0; v < n; ++v) reach[v][v] = true;
  for (const Edge& e : g.edges()) reach[e.source][e.target] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!reach[i][j]) return false;
  return true;
}

std::size_t oracle_period(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::size_t gcd = 0;
  // Simple cycles whose smallest vertex is `root`.
  std::vector<bool> on_path(n, false);
  std::function<void(Vertex, Vertex, std::size_t)> dfs = [&](Vertex root, Vertex v, std::size_t len) {
    for (EdgeId e : g.out_edges(v)) {
      const Vertex t = g.target(e);
      if (t == root) {
        gcd = std::gcd(gcd, len + 1);
      } else if (t > root && !on_path[t]) {
        on_path[t] = true;
        dfs(root, t, len + 1);
        on_path[t] = false;
      }
    }
  };
  for (Vertex r = 0; r < n; ++r) {
    on_path[r] = true;
    dfs(r, r, 0);
    on_path[r] = false;
  }
  return gcd;
}

namespace {

using OrderedPair = std::pair<Vertex, Vertex>;

std::vector<OrderedPair> successors(const RightResolver& phi, OrderedPair p) {
  std::vector<OrderedPair> out;
  const Graph& g = phi.domain();
  for (EdgeId c : phi.codomain().out_edges(phi.vertex_image(p.first))) {
    Vertex a = 0;
    Vertex b = 0;
    for (EdgeId e : g.out_edges(p.first))
      if (phi.edge_image(e) == c) a = g.target(e);
    for (EdgeId e : g.out_edges(p.second))
      if (phi.edge_image(e) == c) b = g.target(e);
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

bool oracle_pair_synchronizable(const RightResolver& phi, Vertex a, Vertex b) {
  std::set<OrderedPair> seen{{a, b}};
  std::queue<OrderedPair> q;
  q.push({a, b});
  while (!q.empty()) {
    const OrderedPair p = q.front();
    q.pop();
    if (p.first == p.second) return true;
    for (const OrderedPair& s : successors(phi, p)) {
      if (seen.insert(s).second) q.push(s);
    }
  }
  return false;
}

bool oracle_stable(const RightResolver& phi, Vertex a, Vertex b) {
  std::size_t same_fiber_pairs = 1;
  for (const auto& f : phi.fibers()) same_fiber_pairs += f.size() * (f.size() - 1) / 2;
  // Pairs reached by words of length exactly k, for k = 0..bound.
  std::set<OrderedPair> level{{a, b}};
  std::set<OrderedPair> all = level;
  for (std::size_t k = 0; k < same_fiber_pairs + 1; ++k) {
    std::set<OrderedPair> next;
    for (const OrderedPair& p : level)
      for (const OrderedPair& s : successors(phi, p)) next.insert(s);
    all.insert(next.begin(), next.end());
    level = std::move(next);
  }
  return std::all_of(all.begin(), all.end(),
                     [&](const OrderedPair& p) { return oracle_pair_synchronizable(phi, p.first, p.second); });
}

std::vector<std::size_t> oracle_stability_labels(const RightResolver& phi) {
  const std::size_t n = phi.domain().vertex_count();
  std::vector<std::size_t> label(n);
  for (Vertex v = 0; v < n; ++v) {
    label[v] = v;
    for (Vertex u = 0; u < v; ++u) {
      if (phi.vertex_image(u) == phi.vertex_image(v) && oracle_stable(phi, u, v)) {
        label[v] = label[u];
        break;
      }
    }
  }
  std::vector<std::size_t> renumber(n, n);
  std::size_t next = 0;
  for (auto& l : label) {
    if (renumber[l] == n) renumber[l] = next++;
    l = renumber[l];
  }
  return label;
}

bool oracle_every_fiber_collapses(const RightResolver& phi) {
  const Graph& h = phi.codomain();
  for (Vertex k = 0; k < h.vertex_count(); ++k) {
    using State = std::pair<std::set<Vertex>, Vertex>;
    const std::set<Vertex> start(phi.fiber(k).begin(), phi.fiber(k).end());
    std::set<State> seen{{start, k}};
    std::queue<State> q;
    q.push({start, k});
    bool ok = false;
    while (!q.empty() && !ok) {
      const State s = q.front();
      q.pop();
      if (s.first.size() == 1) {
        ok = true;
        break;
      }
      for (EdgeId c : h.out_edges(s.second)) {
        std::set<Vertex> image;
        for (Vertex v : s.first) image.insert(phi.step(v, c));
        State t{image, h.target(c)};
        if (seen.insert(t).second) q.push(t);
      }
    }
    if (!ok) return false;
  }
  return true;
}

namespace {

std::vector<std::size_t> canonical_matrix(const std::vector<std::size_t>& m, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best;
  std::vector<std::size_t> cur(n * n);
  do {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cur[i * n + j] = m[perm[i] * n + perm[j]];
    if (best.empty() || cur < best) best = cur;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<Graph> strongly_connected_graphs(std::size_t max_vertices, std::size_t max_edges) {
  std::vector<Graph> out;
  for (std::size_t n = 1; n <= max_vertices; ++n) {
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::size_t> m(n * n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t cell, std::size_t used) {
      if (cell == n * n) {
        if (used == 0) return;
        const Graph g = graph_from_adjacency(n, m);
        if (!oracle_strongly_connected(g)) return;
        seen.insert(canonical_matrix(m, n));
        return;
      }
      for (std::size_t k = 0; used + k <= max_edges; ++k) {
        m[cell] = k;
        rec(cell + 1, used + k);
      }
      m[cell] = 0;
    };
    rec(0, 0);
    for (const auto& c : seen) out.push_back(graph_from_adjacency(n, c));
  }
  return out;
}

Graph random_strongly_connected(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_edges) {
  const std::size_t n = 1 + uniform_below(rng, max_vertices);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({order[i], order[(i + 1) % n]});
  const std::size_t extra = uniform_below(rng, max_edges - n + 1);
  for (std::size_t i = 0; i < extra; ++i) {
    edges.push_back({static_cast<Vertex>(uniform_below(rng, n)), static_cast<Vertex>(uniform_below(rng, n))});
  }
  for (std::size_t i = edges.size(); i > 1; --i) std::swap(edges[i - 1], edges[uniform_below(rng, i)]);
  return Graph(n, edges);
}

Graph random_out_degree_two(std::mt19937_64& rng, std::size_t n) {
  while (true) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v)
      for (int k = 0; k < 2; ++k) edges.push_back({v, static_cast<Vertex>(uniform_below(rng, n))});
    Graph g(n, edges);
    if (oracle_strongly_connected(g)) return g;
  }
}

RightResolver random_resolver(const Graph& g, std::mt19937_64& rng) {
  const std::vector<VertexPartition> parts = out_equitable_partitions(g);
  const VertexPartition& p = parts[uniform_below(rng, parts.size())];
  const Graph h = equitable_quotient(g, p);
  std::vector<Vertex> vmap(g.vertex_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(p[v]);
  return random_right_resolver(g, h, vmap, rng);
}

void for_each_quotient_resolver(const Graph& g, const std::function<void(const RightResolver&)>& visit) {
  for (const VertexPartition& p : out_equitable_partitions(g)) {
    const Graph h = equitable_quotient(g, p);
    std::vector<Vertex> vmap(g.vertex_count());
    for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(p[v]);
    for_each_right_resolver(
        g, h,
        [&](const RightResolver& r) {
          visit(r);
          return true;
        },
        vmap);
  }
}

}  // namespace bunchy::testing
