#include "bunchy/minimal_factor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bunchy/errors.hpp"

namespace bunchy {

namespace {

// One splitting pass: new class = (old class, counts into each old class).
std::vector<std::size_t> refine_once(const Graph& g, const std::vector<std::size_t>& cls,
                                     std::size_t k) {
  std::map<std::vector<std::size_t>, std::size_t> ids;
  std::vector<std::size_t> next(g.vertex_count());
  std::vector<std::size_t> sig(k + 1);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::fill(sig.begin(), sig.end(), 0);
    sig[0] = cls[v];
    for (EdgeId e : g.out_edges(v)) ++sig[1 + cls[g.target(e)]];
    auto [it, fresh] = ids.try_emplace(sig, ids.size());
    next[v] = it->second;
  }
  return next;
}

std::vector<std::size_t> refine_to_fixpoint(const Graph& g) {
  std::vector<std::size_t> cls(g.vertex_count(), 0);
  std::size_t k = g.vertex_count() == 0 ? 0 : 1;
  while (true) {
    auto next = VertexPartition::normalized(refine_once(g, cls, k));
    if (next.class_count() == k) return next.labels();
    cls = next.labels();
    k = next.class_count();
  }
}

void require_strongly_connected(const Graph& g, const char* what) {
  if (!is_strongly_connected(g)) throw Error(std::string(what) + " requires a strongly connected graph");
}

}  // namespace

VertexPartition coarsest_out_equitable(const Graph& g) {
  return VertexPartition(refine_to_fixpoint(g));
}

bool is_out_equitable(const Graph& g, const VertexPartition& p) {
  const std::size_t k = p.class_count();
  std::vector<std::size_t> first(k * k, SIZE_MAX);
  std::vector<std::size_t> counts(k);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::fill(counts.begin(), counts.end(), 0);
    for (EdgeId e : g.out_edges(v)) ++counts[p[g.target(e)]];
    for (std::size_t d = 0; d < k; ++d) {
      auto& ref = first[p[v] * k + d];
      if (ref == SIZE_MAX) ref = counts[d];
      if (ref != counts[d]) return false;
    }
  }
  return true;
}

Graph equitable_quotient(const Graph& g, const VertexPartition& p) {
  const std::size_t k = p.class_count();
  std::vector<Vertex> rep(k, 0);
  for (Vertex v = g.vertex_count(); v-- > 0;) rep[p[v]] = v;
  std::vector<std::size_t> matrix(k * k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    for (EdgeId e : g.out_edges(rep[c])) ++matrix[c * k + p[g.target(e)]];
  }
  return graph_from_adjacency(k, matrix);
}

RightResolver quotient_resolver(const Graph& g, const VertexPartition& p, const Graph& q) {
  std::vector<Vertex> vmap(g.vertex_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(p[v]);
  std::vector<EdgeId> emap(g.edge_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    // Out-edges are in id order; so are the parallel edges of q.
    std::map<Vertex, std::vector<EdgeId>> groups;
    for (EdgeId c : q.out_edges(vmap[v])) groups[q.target(c)].push_back(c);
    std::map<Vertex, std::size_t> used;
    for (EdgeId e : g.out_edges(v)) {
      const Vertex d = vmap[g.target(e)];
      auto it = groups.find(d);
      std::size_t& u = used[d];
      if (it == groups.end() || u >= it->second.size()) {
        throw Error("partition is not out-equitable at vertex " + std::to_string(v));
      }
      emap[e] = it->second[u++];
    }
  }
  return RightResolver::validate(g, q, std::move(vmap), std::move(emap));
}

MinimalFactorResult compute_minimal_factor(const Graph& g) {
  require_strongly_connected(g, "compute_minimal_factor");
  VertexPartition sigma = coarsest_out_equitable(g);
  Graph m = equitable_quotient(g, sigma);
  RightResolver witness = quotient_resolver(g, sigma, m);
  return {std::move(m), std::move(sigma), std::move(witness)};
}

bool is_minimal(const Graph& g) { return coarsest_out_equitable(g).is_discrete(); }

bool minimal_iso(const Graph& m1, const Graph& m2) {
  if (!is_minimal(m1) || !is_minimal(m2)) throw Error("minimal_iso requires minimal graphs");
  if (m1.vertex_count() != m2.vertex_count() || m1.edge_count() != m2.edge_count()) return false;
  const std::size_t n = m1.vertex_count();
  std::vector<Edge> edges = m1.edges();
  for (const Edge& e : m2.edges()) {
    edges.push_back({static_cast<Vertex>(e.source + n), static_cast<Vertex>(e.target + n)});
  }
  const Graph joint(2 * n, std::move(edges));
  const VertexPartition p = coarsest_out_equitable(joint);
  std::vector<Vertex> left(p.class_count(), UINT32_MAX);
  std::vector<Vertex> right(p.class_count(), UINT32_MAX);
  for (Vertex v = 0; v < 2 * n; ++v) {
    auto& slot = v < n ? left[p[v]] : right[p[v]];
    if (slot != UINT32_MAX) return false;
    slot = v < n ? v : v - static_cast<Vertex>(n);
  }
  std::vector<Vertex> pair(n);
  for (std::size_t c = 0; c < p.class_count(); ++c) {
    if (left[c] == UINT32_MAX || right[c] == UINT32_MAX) return false;
    pair[left[c]] = right[c];
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (m1.multiplicity(u, v) != m2.multiplicity(pair[u], pair[v])) return false;
    }
  }
  return true;
}

BunchyClass classify(const Graph& g) {
  const MinimalFactorResult mf = compute_minimal_factor(g);
  const VertexPartition& sigma = mf.sigma;
  const Graph& m = mf.m_graph;
  const std::size_t k = sigma.class_count();

  // spread[v * k + J] = |Sigma^{-1}(J) ∩ F(v)|
  std::vector<std::size_t> spread(g.vertex_count() * k, 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::set<Vertex> followers;
    for (EdgeId e : g.out_edges(v)) followers.insert(g.target(e));
    for (Vertex f : followers) ++spread[v * k + sigma[f]];
  }

  BunchyClass out{true, true, true};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t mult = m.multiplicity(static_cast<Vertex>(i), static_cast<Vertex>(j));
      std::size_t spread_count = 0;
      std::size_t full_count = 0;
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (sigma[v] != i) continue;
        const std::size_t s = spread[v * k + j];
        if (s >= 2) {
          out.is_bunchy = false;
          ++spread_count;
        }
        if (mult >= 2 && s == mult) ++full_count;
      }
      if (spread_count > 1) out.is_almost_bunchy = false;
      if (full_count > 1) out.is_weakly_almost_bunchy = false;
    }
  }
  return out;
}

}  // namespace bunchy
