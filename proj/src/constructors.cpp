#include "bunchy/constructors.hpp"

#include <map>
#include <set>

#include "bunchy/bunchy_factor.hpp"
#include "bunchy/errors.hpp"
#include "bunchy/io.hpp"
#include "bunchy/minimal_factor.hpp"

namespace bunchy {

namespace {

std::optional<NonBunchyWitness> first_spread_pair(const Graph& g, const VertexPartition& sigma, Vertex v,
                                                  std::optional<std::size_t> target_class) {
  const auto out = g.out_edges(v);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      const Vertex a = g.target(out[i]);
      const Vertex b = g.target(out[j]);
      if (a == b || sigma[a] != sigma[b]) continue;
      if (target_class && sigma[a] != *target_class) continue;
      return NonBunchyWitness{v, out[i], out[j], a, b};
    }
  }
  return std::nullopt;
}

std::optional<NonBunchyWitness> nonbunchy_witness(const Graph& g, const VertexPartition& sigma) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (auto w = first_spread_pair(g, sigma, v, std::nullopt)) return w;
  }
  return std::nullopt;
}

}  // namespace

std::optional<NonBunchyWitness> find_nonbunchy_witness(const Graph& g) {
  return nonbunchy_witness(g, compute_minimal_factor(g).sigma);
}

RightResolver wab_stable_resolver(const Graph& g) {
  const BunchyClass cls = classify(g);
  if (!cls.is_weakly_almost_bunchy) throw Error("wab_stable_resolver: graph is not weakly almost bunchy");
  if (cls.is_bunchy) throw Error("wab_stable_resolver: graph is already bunchy");
  const MinimalFactorResult mf = compute_minimal_factor(g);
  const VertexPartition& sigma = mf.sigma;
  const Graph& m = mf.m_graph;

  NonBunchyWitness w = *nonbunchy_witness(g, sigma);
  const std::size_t from_class = sigma[w.parent];
  const std::size_t to_class = sigma[w.first_follower];

  std::vector<EdgeId> m_edges;  // E_I^J(M) in id order
  for (EdgeId a : m.out_edges(static_cast<Vertex>(from_class))) {
    if (m.target(a) == to_class) m_edges.push_back(a);
  }
  auto spread = [&](Vertex v) {
    std::set<Vertex> f;
    for (EdgeId e : g.out_edges(v)) {
      if (sigma[g.target(e)] == to_class) f.insert(g.target(e));
    }
    return f.size();
  };
  // Prefer a vertex whose followers in the target class are all distinct.
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (sigma[v] == from_class && spread(v) == m_edges.size()) {
      w = *first_spread_pair(g, sigma, v, to_class);
      break;
    }
  }

  std::vector<EdgeId> emap(g.edge_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::map<std::size_t, std::vector<EdgeId>> dom;
    std::map<std::size_t, std::vector<EdgeId>> cod;
    for (EdgeId e : g.out_edges(v)) dom[sigma[g.target(e)]].push_back(e);
    for (EdgeId a : m.out_edges(static_cast<Vertex>(sigma[v]))) cod[m.target(a)].push_back(a);
    for (auto& [target, edges] : dom) {
      std::vector<EdgeId>& images = cod.at(target);
      std::vector<EdgeId> order = edges;
      if (sigma[v] == from_class && target == to_class) {
        // Pinned pair first: (e1, e2) at the chosen parent, otherwise two
        // distinct edges sharing a target.
        std::optional<std::pair<EdgeId, EdgeId>> pinned;
        if (v == w.parent) {
          pinned.emplace(w.first_edge, w.second_edge);
        } else {
          for (std::size_t i = 0; i < edges.size() && !pinned; ++i) {
            for (std::size_t j = i + 1; j < edges.size() && !pinned; ++j) {
              if (g.target(edges[i]) == g.target(edges[j])) pinned.emplace(edges[i], edges[j]);
            }
          }
          if (!pinned) {
            throw TheoremViolation("weakly almost bunchy fiber vertex has no repeated target: " + write_graph(g));
          }
        }
        order.clear();
        order.push_back(pinned->first);
        order.push_back(pinned->second);
        for (EdgeId e : edges) {
          if (e != pinned->first && e != pinned->second) order.push_back(e);
        }
      }
      for (std::size_t i = 0; i < order.size(); ++i) emap[order[i]] = images[i];
    }
  }
  std::vector<Vertex> vmap(g.vertex_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(sigma[v]);
  RightResolver phi = RightResolver::validate(g, m, std::move(vmap), std::move(emap));
  if (compute_stability(phi).trivial()) {
    throw TheoremViolation("weakly almost bunchy construction produced trivial stability: " + write_graph(g));
  }
  return phi;
}

std::optional<RightResolver> find_biresolver(const Graph& g) {
  const BunchyFactorResult bf = compute_bunchy_factor(g);
  std::vector<Vertex> vmap(g.vertex_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(bf.classes[v]);
  return search_bi_resolver(g, bf.b_graph, vmap);
}

SwapResult biresolving_swap(const Graph& g, const RightResolver& phi) {
  if (!(phi.domain() == g)) throw Error("biresolving_swap: resolver domain differs from the graph");
  if (classify(g).is_bunchy) throw Error("biresolving_swap: graph is bunchy");
  if (!kind(phi).bi_resolving) throw Error("biresolving_swap: resolver is not bi-resolving");
  if (!classify(phi.codomain()).is_bunchy) throw Error("biresolving_swap: codomain is not bunchy");

  const NonBunchyWitness w = *find_nonbunchy_witness(g);
  if (phi.vertex_image(w.first_follower) != phi.vertex_image(w.second_follower)) {
    throw TheoremViolation("witness followers lie in different fibers of a bi-resolver onto a bunchy graph: " +
                           write_resolver(phi));
  }
  std::vector<EdgeId> emap = phi.edge_map();
  std::swap(emap[w.first_edge], emap[w.second_edge]);
  RightResolver swapped = RightResolver::validate(g, phi.codomain(), phi.vertex_map(), std::move(emap));
  StabilityQuotient quotient = stability_quotient(swapped);
  if (!quotient.report.stable(w.first_follower, w.second_follower)) {
    throw TheoremViolation("colour swap did not make the witness followers stable: " + write_resolver(swapped));
  }
  if (!kind(quotient.delta).bi_resolving) {
    throw TheoremViolation("colour swap quotient is not bi-resolving: " + write_resolver(swapped));
  }
  return {std::move(swapped), w, std::move(quotient)};
}

std::string to_string(SynthesisRoute route) {
  switch (route) {
    case SynthesisRoute::already_bunchy: return "already-bunchy";
    case SynthesisRoute::weakly_almost_bunchy: return "weakly-almost-bunchy";
    case SynthesisRoute::bi_resolving: return "bi-resolving";
    case SynthesisRoute::heuristic: return "heuristic";
  }
  return "unknown";
}

SynthesisTrace synthesize_synchronizer(const Graph& g, const SynthesisOptions& options) {
  if (!is_strongly_connected(g)) throw Error("synthesize_synchronizer requires a strongly connected graph");
  const BunchyFactorResult bf = compute_bunchy_factor(g);
  const BunchyClass cls = classify(g);
  SynthesisTrace trace;

  std::optional<RightResolver> bi;
  if (cls.is_bunchy) {
    trace.route = SynthesisRoute::already_bunchy;
  } else if (cls.is_weakly_almost_bunchy) {
    trace.route = SynthesisRoute::weakly_almost_bunchy;
  } else {
    try {
      bi = find_biresolver(g);
    } catch (const BoundExceeded&) {
      bi.reset();
    }
    trace.route = bi ? SynthesisRoute::bi_resolving : SynthesisRoute::heuristic;
  }

  if (trace.heuristic()) {
    std::vector<Vertex> vmap(g.vertex_count());
    for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(bf.classes[v]);
    for (std::size_t t = 0; t < options.heuristic_cap; ++t) {
      RightResolver r = random_right_resolver(g, bf.b_graph, vmap, derive_seed(options.seed, t));
      trace.heuristic_trials = t + 1;
      if (is_synchronizing(r)) {
        trace.final_resolver = std::move(r);
        return trace;
      }
    }
    throw ConjectureFailure("no synchronizing right resolver onto B(G) found within " +
                                std::to_string(options.heuristic_cap) + " random trials",
                            write_graph(g));
  }

  Graph current = g;
  std::optional<RightResolver> composite;
  while (!classify(current).is_bunchy) {
    StabilityQuotient quotient = [&] {
      if (trace.route == SynthesisRoute::weakly_almost_bunchy) {
        if (!classify(current).is_weakly_almost_bunchy) {
          throw TheoremViolation("quotient of a weakly almost bunchy graph is not weakly almost bunchy: " +
                                 write_graph(current));
        }
        RightResolver phi = wab_stable_resolver(current);
        return stability_quotient(phi);
      }
      SwapResult swap = biresolving_swap(current, *bi);
      bi = swap.quotient.delta;
      return std::move(swap.quotient);
    }();
    // The resolver that produced this quotient is delta o psi.
    RightResolver used = compose(quotient.delta, quotient.psi);
    if (quotient.quotient.vertex_count() >= current.vertex_count()) {
      throw TheoremViolation("stability quotient did not shrink the graph: " + write_graph(current));
    }
    trace.steps.push_back({current, used, quotient.report.partition, quotient.quotient});
    composite = composite ? compose(quotient.psi, *composite) : quotient.psi;
    current = quotient.quotient;

    if (trace.route == SynthesisRoute::bi_resolving) {
      // B(current) ~ B(G): a right resolver between them of equal size.
      const BunchyFactorResult next_bf = compute_bunchy_factor(current);
      factor_through_bunchy(*bi, next_bf);
      if (next_bf.b_graph.vertex_count() != bf.b_graph.vertex_count() ||
          next_bf.b_graph.edge_count() != bf.b_graph.edge_count()) {
        throw TheoremViolation("bunchy factor changed along the bi-resolving pipeline: " + write_graph(current));
      }
      if (current.edge_count() <= options.biresolver_recheck_edges && !find_biresolver(current)) {
        throw TheoremViolation("bi-resolving quotient admits no bi-resolver onto its bunchy factor: " +
                               write_graph(current));
      }
    }
  }

  const RightResolver to_bunchy = composite ? *composite : RightResolver::identity(g);
  if (!is_synchronizing(to_bunchy)) {
    throw TheoremViolation("composite of stability quotient maps is not synchronizing: " + write_graph(g));
  }
  RightResolver final_resolver = factor_through_bunchy(to_bunchy, bf).psi;
  if (!is_synchronizing(final_resolver)) {
    throw TheoremViolation("resolver onto B(G) is not synchronizing: " + write_resolver(final_resolver));
  }
  trace.final_resolver = std::move(final_resolver);
  return trace;
}

}  // namespace bunchy
