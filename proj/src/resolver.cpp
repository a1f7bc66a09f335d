#include "bunchy/resolver.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bunchy {

namespace {

[[noreturn]] void invalid(const std::string& clause, const std::string& detail) {
  throw InvalidResolver("invalid resolver: " + clause + ": " + detail);
}

std::string at_vertex(Vertex v) { return "at vertex " + std::to_string(v); }
std::string at_edge(EdgeId e) { return "at edge " + std::to_string(e); }

}  // namespace

RightResolver RightResolver::validate(Graph domain, Graph codomain,
                                      std::vector<Vertex> vertex_map,
                                      std::vector<EdgeId> edge_map) {
  const std::size_t n = domain.vertex_count();
  if (vertex_map.size() != n) invalid("vertex map", "wrong length");
  if (edge_map.size() != domain.edge_count()) invalid("edge map", "wrong length");
  for (Vertex v = 0; v < n; ++v) {
    if (vertex_map[v] >= codomain.vertex_count()) invalid("vertex map", "image out of range " + at_vertex(v));
  }
  for (EdgeId e = 0; e < edge_map.size(); ++e) {
    if (edge_map[e] >= codomain.edge_count()) invalid("edge map", "image out of range " + at_edge(e));
    const Edge& img = codomain.edge(edge_map[e]);
    if (img.source != vertex_map[domain.source(e)] || img.target != vertex_map[domain.target(e)]) {
      invalid("not a homomorphism", at_edge(e));
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    const auto out = domain.out_edges(v);
    if (out.size() != codomain.out_degree(vertex_map[v])) {
      invalid("out-edge restriction is not a bijection", at_vertex(v) + " (degree mismatch)");
    }
    std::vector<EdgeId> images;
    images.reserve(out.size());
    for (EdgeId e : out) images.push_back(edge_map[e]);
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
      invalid("out-edge restriction is not a bijection", at_vertex(v) + " (duplicate image)");
    }
  }
  std::vector<bool> hit_v(codomain.vertex_count(), false);
  std::vector<bool> hit_e(codomain.edge_count(), false);
  for (Vertex im : vertex_map) hit_v[im] = true;
  for (EdgeId im : edge_map) hit_e[im] = true;
  for (Vertex k = 0; k < hit_v.size(); ++k) {
    if (!hit_v[k]) invalid("not surjective", "codomain vertex " + std::to_string(k) + " missed");
  }
  for (EdgeId c = 0; c < hit_e.size(); ++c) {
    if (!hit_e[c]) invalid("not surjective", "codomain edge " + std::to_string(c) + " missed");
  }

  RightResolver r;
  r.lift_offset_.resize(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) r.lift_offset_[v + 1] = r.lift_offset_[v] + domain.out_degree(v);
  r.lift_.resize(r.lift_offset_[n]);
  for (EdgeId e = 0; e < edge_map.size(); ++e) {
    r.lift_[r.lift_offset_[domain.source(e)] + codomain.out_rank(edge_map[e])] = e;
  }
  r.fibers_.resize(codomain.vertex_count());
  for (Vertex v = 0; v < n; ++v) r.fibers_[vertex_map[v]].push_back(v);
  r.domain_ = std::move(domain);
  r.codomain_ = std::move(codomain);
  r.vertex_map_ = std::move(vertex_map);
  r.edge_map_ = std::move(edge_map);
  return r;
}

RightResolver RightResolver::identity(const Graph& g) {
  std::vector<Vertex> vmap(g.vertex_count());
  std::vector<EdgeId> emap(g.edge_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = v;
  for (EdgeId e = 0; e < emap.size(); ++e) emap[e] = e;
  return validate(g, g, std::move(vmap), std::move(emap));
}

ResolverKind kind(const RightResolver& phi) {
  const Graph& g = phi.domain();
  const Graph& h = phi.codomain();
  ResolverKind k;
  k.left_resolving = true;
  for (Vertex v = 0; v < g.vertex_count() && k.left_resolving; ++v) {
    const auto in = g.in_edges(v);
    if (in.size() != h.in_degree(phi.vertex_image(v))) {
      k.left_resolving = false;
      break;
    }
    std::vector<EdgeId> images;
    for (EdgeId e : in) images.push_back(phi.edge_image(e));
    std::sort(images.begin(), images.end());
    k.left_resolving = std::adjacent_find(images.begin(), images.end()) == images.end();
  }
  k.bi_resolving = k.right_resolving && k.left_resolving;
  return k;
}

RightResolver compose(const RightResolver& psi, const RightResolver& phi) {
  if (!(phi.codomain() == psi.domain())) {
    throw Error("compose: codomain of the inner resolver differs from domain of the outer");
  }
  std::vector<Vertex> vmap(phi.domain().vertex_count());
  std::vector<EdgeId> emap(phi.domain().edge_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = psi.vertex_image(phi.vertex_image(v));
  for (EdgeId e = 0; e < emap.size(); ++e) emap[e] = psi.edge_image(phi.edge_image(e));
  return RightResolver::validate(phi.domain(), psi.codomain(), std::move(vmap), std::move(emap));
}

Lift lift_forward(const RightResolver& phi, Vertex start, const Path& w) {
  check_path(phi.codomain(), w);
  if (start >= phi.domain().vertex_count()) throw Error("lift_forward: start vertex out of range");
  if (w.start != phi.vertex_image(start)) {
    throw Error("lift_forward: word does not start at the image of the start vertex");
  }
  Lift out{start, {}};
  out.edges.reserve(w.edges.size());
  for (EdgeId c : w.edges) {
    const EdgeId e = phi.lift_edge(out.terminal, c);
    out.edges.push_back(e);
    out.terminal = phi.domain().target(e);
  }
  return out;
}

std::vector<Vertex> lift_backward(const RightResolver& phi, const Path& u, Vertex end) {
  check_path(phi.codomain(), u);
  if (end >= phi.domain().vertex_count()) throw Error("lift_backward: end vertex out of range");
  if (terminal(phi.codomain(), u) != phi.vertex_image(end)) {
    throw Error("lift_backward: word does not end at the image of the end vertex");
  }
  std::vector<Vertex> out;
  for (Vertex v : phi.fiber(u.start)) {
    if (lift_forward(phi, v, u).terminal == end) out.push_back(v);
  }
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RightResolver random_right_resolver(const Graph& g, const Graph& b,
                                    const std::vector<Vertex>& vertex_map, std::mt19937_64& rng) {
  if (vertex_map.size() != g.vertex_count()) throw Error("random_right_resolver: vertex map has wrong length");
  for (Vertex im : vertex_map) {
    if (im >= b.vertex_count()) throw Error("random_right_resolver: vertex map image out of range");
  }
  std::vector<EdgeId> emap(g.edge_count());
  std::map<Vertex, std::vector<EdgeId>> domain_groups;
  std::map<Vertex, std::vector<EdgeId>> codomain_groups;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    domain_groups.clear();
    codomain_groups.clear();
    for (EdgeId e : g.out_edges(v)) domain_groups[vertex_map[g.target(e)]].push_back(e);
    for (EdgeId c : b.out_edges(vertex_map[v])) codomain_groups[b.target(c)].push_back(c);
    if (domain_groups.size() != codomain_groups.size()) {
      throw Error("random_right_resolver: vertex map incompatible " + at_vertex(v));
    }
    for (auto& [target, dom] : domain_groups) {
      auto it = codomain_groups.find(target);
      if (it == codomain_groups.end() || it->second.size() != dom.size()) {
        throw Error("random_right_resolver: edge counts differ " + at_vertex(v));
      }
      auto& cod = it->second;
      for (std::size_t i = cod.size(); i > 1; --i) {
        std::swap(cod[i - 1], cod[uniform_below(rng, i)]);
      }
      for (std::size_t i = 0; i < dom.size(); ++i) emap[dom[i]] = cod[i];
    }
  }
  return RightResolver::validate(g, b, vertex_map, std::move(emap));
}

RightResolver random_right_resolver(const Graph& g, const Graph& b,
                                    const std::vector<Vertex>& vertex_map, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_right_resolver(g, b, vertex_map, rng);
}

}  // namespace bunchy

namespace bunchy {

namespace {

struct BiSearch {
  const Graph& g;
  const Graph& h;
  std::vector<EdgeId> order;                  // domain edges in search order
  std::vector<const std::vector<EdgeId>*> candidates;  // per position
  std::vector<std::size_t> group_of;          // per position
  std::vector<std::vector<char>> group_used;  // per group, per candidate slot
  std::vector<char> in_used;                  // domain vertex x codomain edge
  std::vector<EdgeId> emap;
  std::size_t budget;
  std::size_t spent = 0;

  bool run(std::size_t pos) {
    if (pos == order.size()) return true;
    if (++spent > budget) throw BoundExceeded("bi-resolver search exceeded its node budget");
    const EdgeId e = order[pos];
    const auto& cands = *candidates[pos];
    auto& used = group_used[group_of[pos]];
    const std::size_t row = g.target(e) * h.edge_count();
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const EdgeId c = cands[k];
      if (used[k] || in_used[row + c]) continue;
      used[k] = 1;
      in_used[row + c] = 1;
      emap[e] = c;
      if (run(pos + 1)) return true;
      used[k] = 0;
      in_used[row + c] = 0;
    }
    return false;
  }
};

}  // namespace

std::optional<RightResolver> search_bi_resolver(const Graph& g, const Graph& h,
                                                const std::vector<Vertex>& vertex_map,
                                                std::size_t budget) {
  if (vertex_map.size() != g.vertex_count()) throw Error("search_bi_resolver: vertex map has wrong length");
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (vertex_map[v] >= h.vertex_count()) throw Error("search_bi_resolver: vertex map image out of range");
    if (g.in_degree(v) != h.in_degree(vertex_map[v])) return std::nullopt;
  }
  BiSearch s{g, h, {}, {}, {}, {}, std::vector<char>(g.vertex_count() * h.edge_count(), 0),
             std::vector<EdgeId>(g.edge_count()), budget};
  std::vector<std::vector<EdgeId>> groups;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::map<Vertex, std::vector<EdgeId>> dom;
    std::map<Vertex, std::vector<EdgeId>> cod;
    for (EdgeId e : g.out_edges(v)) dom[vertex_map[g.target(e)]].push_back(e);
    for (EdgeId c : h.out_edges(vertex_map[v])) cod[h.target(c)].push_back(c);
    if (dom.size() != cod.size()) return std::nullopt;
    for (auto& [d, list] : dom) {
      auto it = cod.find(d);
      if (it == cod.end() || it->second.size() != list.size()) return std::nullopt;
      groups.push_back(it->second);
      for (EdgeId e : list) {
        s.order.push_back(e);
        s.group_of.push_back(groups.size() - 1);
      }
    }
  }
  for (std::size_t pos = 0; pos < s.order.size(); ++pos) s.candidates.push_back(&groups[s.group_of[pos]]);
  for (const auto& grp : groups) s.group_used.emplace_back(grp.size(), 0);
  if (!s.run(0)) return std::nullopt;
  try {
    return RightResolver::validate(g, h, vertex_map, std::move(s.emap));
  } catch (const InvalidResolver&) {
    // Not surjective: the vertex map misses part of h.
    return std::nullopt;
  }
}

}  // namespace bunchy
