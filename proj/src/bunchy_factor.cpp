#include "bunchy/bunchy_factor.hpp"

#include <map>
#include <numeric>

#include "bunchy/errors.hpp"
#include "bunchy/io.hpp"
#include "bunchy/minimal_factor.hpp"

namespace bunchy {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Edges grouped by endpoints, in id order; position[e] is e's index within
// its group.
struct ParallelGroups {
  std::map<std::pair<Vertex, Vertex>, std::vector<EdgeId>> by_ends;
  std::vector<std::size_t> position;

  explicit ParallelGroups(const Graph& g) : position(g.edge_count()) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto& list = by_ends[{g.source(e), g.target(e)}];
      position[e] = list.size();
      list.push_back(e);
    }
  }
  const std::vector<EdgeId>* find(Vertex u, Vertex v) const {
    auto it = by_ends.find({u, v});
    return it == by_ends.end() ? nullptr : &it->second;
  }
};

}  // namespace

BunchyFactorResult compute_bunchy_factor(const Graph& g) {
  const MinimalFactorResult mf = compute_minimal_factor(g);
  const VertexPartition& sigma = mf.sigma;
  const std::size_t n = g.vertex_count();

  DisjointSets sets(n);
  bool changed = true;
  std::map<std::pair<std::size_t, std::size_t>, Vertex> first_follower;
  while (changed) {
    changed = false;
    first_follower.clear();
    for (Vertex v = 0; v < n; ++v) {
      const std::size_t root = sets.find(v);
      for (EdgeId e : g.out_edges(v)) {
        const Vertex t = g.target(e);
        auto [it, fresh] = first_follower.try_emplace({root, sigma[t]}, t);
        if (!fresh) changed |= sets.unite(it->second, t);
      }
    }
  }

  std::vector<std::size_t> roots(n);
  for (Vertex v = 0; v < n; ++v) roots[v] = sets.find(v);
  VertexPartition classes = VertexPartition::normalized(roots);
  if (!is_out_equitable(g, classes)) {
    throw TheoremViolation("bunchy closure is not out-equitable: " + write_graph(g));
  }
  Graph b = equitable_quotient(g, classes);
  RightResolver witness = quotient_resolver(g, classes, b);
  if (!classify(b).is_bunchy) {
    throw TheoremViolation("bunchy closure quotient is not bunchy: " + write_graph(g));
  }
  return {std::move(b), std::move(classes), std::move(witness)};
}

BunchyFactorization factor_through_bunchy(const RightResolver& phi) {
  return factor_through_bunchy(phi, compute_bunchy_factor(phi.domain()));
}

BunchyFactorization factor_through_bunchy(const RightResolver& phi, const BunchyFactorResult& bf) {
  const Graph& g = phi.domain();
  const Graph& h = phi.codomain();
  const Graph& b = bf.b_graph;
  if (!classify(h).is_bunchy) throw Error("factor_through_bunchy: codomain is not bunchy");

  std::vector<Vertex> dvmap(b.vertex_count(), UINT32_MAX);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    Vertex& slot = dvmap[bf.classes[v]];
    if (slot == UINT32_MAX) slot = phi.vertex_image(v);
    if (slot != phi.vertex_image(v)) {
      throw TheoremViolation("bunchy closure class straddles two fibers of a resolver onto a bunchy graph: " +
                             write_resolver(phi));
    }
  }

  const ParallelGroups bgroups(b);
  const ParallelGroups hgroups(h);
  std::vector<EdgeId> demap(b.edge_count());
  for (const auto& [ends, list] : bgroups.by_ends) {
    const auto* hlist = hgroups.find(dvmap[ends.first], dvmap[ends.second]);
    if (hlist == nullptr || hlist->size() != list.size()) {
      throw TheoremViolation("parallel edge groups of B(G) and the bunchy codomain differ: " +
                             write_resolver(phi));
    }
    for (std::size_t i = 0; i < list.size(); ++i) demap[list[i]] = (*hlist)[i];
  }

  std::vector<Vertex> pvmap(g.vertex_count());
  std::vector<EdgeId> pemap(g.edge_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) pvmap[v] = static_cast<Vertex>(bf.classes[v]);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto* blist = bgroups.find(pvmap[g.source(e)], pvmap[g.target(e)]);
    const std::size_t pos = hgroups.position[phi.edge_image(e)];
    if (blist == nullptr || pos >= blist->size()) {
      throw TheoremViolation("edge has no counterpart in B(G): " + write_resolver(phi));
    }
    pemap[e] = (*blist)[pos];
  }

  auto checked = [&](Graph dom, Graph cod, std::vector<Vertex> vm, std::vector<EdgeId> em) {
    try {
      return RightResolver::validate(std::move(dom), std::move(cod), std::move(vm), std::move(em));
    } catch (const InvalidResolver& e) {
      throw TheoremViolation(std::string("factor through B(G) is not a right resolver (") + e.what() +
                             "): " + write_resolver(phi));
    }
  };
  BunchyFactorization out{checked(g, b, std::move(pvmap), std::move(pemap)),
                          checked(b, h, std::move(dvmap), std::move(demap))};
  if (!(compose(out.delta, out.psi) == phi)) {
    throw TheoremViolation("factorization through B(G) does not recompose: " + write_resolver(phi));
  }
  return out;
}

}  // namespace bunchy
