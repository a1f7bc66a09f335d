#include "bunchy/stability.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_set>

#include "bunchy/errors.hpp"
#include "bunchy/io.hpp"
#include "bunchy/minimal_factor.hpp"

namespace bunchy {

PairGraph::PairGraph(const RightResolver& phi) : phi_(&phi) {
  const std::size_t n = phi.domain().vertex_count();
  index_.assign(n * n, kNone);
  pairs_.emplace_back(0, 0);
  for (Vertex a = 0; a < n; ++a) {
    index_[a * n + a] = kDiagonal;
    for (Vertex b = a + 1; b < n; ++b) {
      if (phi.vertex_image(a) != phi.vertex_image(b)) continue;
      index_[a * n + b] = index_[b * n + a] = pairs_.size();
      pairs_.emplace_back(a, b);
    }
  }
}

std::size_t PairGraph::node(Vertex a, Vertex b) const {
  return index_[a * phi_->domain().vertex_count() + b];
}

Vertex PairGraph::image(std::size_t node) const { return phi_->vertex_image(pairs_[node].first); }

std::size_t PairGraph::next(std::size_t node, EdgeId c) const {
  if (node == kDiagonal) return kDiagonal;
  const auto [a, b] = pairs_[node];
  return this->node(phi_->step(a, c), phi_->step(b, c));
}

PairSynchronizer::PairSynchronizer(const RightResolver& phi)
    : graph_(phi), dist_(graph_.node_count(), SIZE_MAX), via_(graph_.node_count(), 0) {
  const Graph& h = phi.codomain();
  const std::size_t count = graph_.node_count();
  // Reverse adjacency, filled in node then edge order so BFS ties break
  // towards smaller ids.
  std::vector<std::vector<std::pair<std::size_t, EdgeId>>> rev(count);
  for (std::size_t p = 1; p < count; ++p) {
    for (EdgeId c : h.out_edges(graph_.image(p))) rev[graph_.next(p, c)].emplace_back(p, c);
  }
  std::queue<std::size_t> q;
  dist_[PairGraph::kDiagonal] = 0;
  q.push(PairGraph::kDiagonal);
  while (!q.empty()) {
    const std::size_t at = q.front();
    q.pop();
    for (auto [p, c] : rev[at]) {
      if (dist_[p] != SIZE_MAX) continue;
      dist_[p] = dist_[at] + 1;
      via_[p] = c;
      q.push(p);
    }
  }
}

std::optional<Path> PairSynchronizer::witness(std::size_t node) const {
  if (!synchronizable(node)) return std::nullopt;
  Path w;
  if (node == PairGraph::kDiagonal) return w;
  w.start = graph_.image(node);
  while (node != PairGraph::kDiagonal) {
    w.edges.push_back(via_[node]);
    node = graph_.next(node, via_[node]);
  }
  return w;
}

std::optional<Path> pair_synchronizable(const RightResolver& phi, Vertex a, Vertex b) {
  const std::size_t n = phi.domain().vertex_count();
  if (a >= n || b >= n) throw Error("pair_synchronizable: vertex out of range");
  if (phi.vertex_image(a) != phi.vertex_image(b)) {
    throw Error("pair_synchronizable: vertices lie in different fibers");
  }
  if (a == b) return Path{phi.vertex_image(a), {}};
  PairSynchronizer sync(phi);
  return sync.witness(sync.pairs().node(a, b));
}

StabilityReport compute_stability(const RightResolver& phi) {
  const PairSynchronizer sync(phi);
  const PairGraph& pg = sync.pairs();
  const Graph& h = phi.codomain();
  const std::size_t count = pg.node_count();
  const std::size_t n = phi.domain().vertex_count();

  // Unstable = can reach an unsynchronizable pair.
  std::vector<std::vector<std::size_t>> rev(count);
  for (std::size_t p = 1; p < count; ++p) {
    for (EdgeId c : h.out_edges(pg.image(p))) rev[pg.next(p, c)].push_back(p);
  }
  std::vector<char> unstable(count, 0);
  std::vector<std::size_t> stack;
  for (std::size_t p = 1; p < count; ++p) {
    if (!sync.synchronizable(p)) {
      unstable[p] = 1;
      stack.push_back(p);
    }
  }
  while (!stack.empty()) {
    const std::size_t at = stack.back();
    stack.pop_back();
    for (std::size_t p : rev[at]) {
      if (!unstable[p]) {
        unstable[p] = 1;
        stack.push_back(p);
      }
    }
  }

  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  StabilityReport report;
  for (std::size_t p = 1; p < count; ++p) {
    if (unstable[p]) continue;
    const auto [a, b] = pg.members(p);
    const std::size_t ra = find(a);
    const std::size_t rb = find(b);
    if (ra != rb) root[std::max(ra, rb)] = std::min(ra, rb);
    report.stable_pairs.push_back({a, b, *sync.witness(p)});
  }
  std::vector<std::size_t> labels(n);
  for (Vertex v = 0; v < n; ++v) labels[v] = find(v);
  report.partition = VertexPartition::normalized(labels);

  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (report.partition[a] != report.partition[b]) continue;
      const std::size_t p = pg.node(a, b);
      if (p == PairGraph::kNone || unstable[p]) {
        throw TheoremViolation("stability relation is not transitive: " + write_resolver(phi));
      }
      for (EdgeId c : h.out_edges(pg.image(p))) {
        const std::size_t q = pg.next(p, c);
        if (q != PairGraph::kDiagonal && unstable[q]) {
          throw TheoremViolation("stability relation is not a congruence: " + write_resolver(phi));
        }
      }
    }
  }

  report.synchronizing = true;
  for (const auto& fiber : phi.fibers()) {
    for (Vertex v : fiber) {
      if (report.partition[v] != report.partition[fiber.front()]) report.synchronizing = false;
    }
  }
  return report;
}

bool is_synchronizing(const RightResolver& phi) { return compute_stability(phi).synchronizing; }

bool every_fiber_collapses(const RightResolver& phi) {
  const std::size_t n = phi.domain().vertex_count();
  if (n > 64) throw BoundExceeded("every_fiber_collapses is limited to 64 vertices");
  const Graph& h = phi.codomain();
  for (Vertex k = 0; k < h.vertex_count(); ++k) {
    std::uint64_t start = 0;
    for (Vertex v : phi.fiber(k)) start |= std::uint64_t{1} << v;
    std::unordered_set<std::uint64_t> seen{start};
    std::queue<std::pair<std::uint64_t, Vertex>> q;
    q.emplace(start, k);
    bool collapsed = false;
    while (!q.empty() && !collapsed) {
      const auto [set, at] = q.front();
      q.pop();
      if ((set & (set - 1)) == 0) {
        collapsed = true;
        break;
      }
      for (EdgeId c : h.out_edges(at)) {
        std::uint64_t image = 0;
        for (std::uint64_t rest = set; rest != 0; rest &= rest - 1) {
          image |= std::uint64_t{1} << phi.step(static_cast<Vertex>(__builtin_ctzll(rest)), c);
        }
        if (seen.insert(image).second) {
          if (seen.size() > kSubsetSearchBound) throw BoundExceeded("subset search exceeded its state bound");
          q.emplace(image, h.target(c));
        }
      }
    }
    if (!collapsed) return false;
  }
  return true;
}

StabilityQuotient stability_quotient(const RightResolver& phi) {
  StabilityReport report = compute_stability(phi);
  const Graph& g = phi.domain();
  const Graph& h = phi.codomain();
  const VertexPartition& cls = report.partition;
  const std::size_t k = cls.class_count();

  std::vector<Vertex> rep(k);
  for (Vertex v = g.vertex_count(); v-- > 0;) rep[cls[v]] = v;
  std::vector<Edge> qedges;
  std::vector<std::size_t> first_edge(k);
  std::vector<EdgeId> demap;
  for (std::size_t c = 0; c < k; ++c) {
    first_edge[c] = qedges.size();
    for (EdgeId he : h.out_edges(phi.vertex_image(rep[c]))) {
      qedges.push_back({static_cast<Vertex>(c), static_cast<Vertex>(cls[phi.step(rep[c], he)])});
      demap.push_back(he);
    }
  }
  Graph q(k, std::move(qedges));

  std::vector<Vertex> pvmap(g.vertex_count());
  std::vector<EdgeId> pemap(g.edge_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) pvmap[v] = static_cast<Vertex>(cls[v]);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    pemap[e] = static_cast<EdgeId>(first_edge[cls[g.source(e)]] + h.out_rank(phi.edge_image(e)));
  }
  std::vector<Vertex> dvmap(k);
  for (std::size_t c = 0; c < k; ++c) dvmap[c] = phi.vertex_image(rep[c]);

  auto checked = [&](Graph dom, Graph cod, std::vector<Vertex> vm, std::vector<EdgeId> em) {
    try {
      return RightResolver::validate(std::move(dom), std::move(cod), std::move(vm), std::move(em));
    } catch (const InvalidResolver& e) {
      throw TheoremViolation(std::string("stability quotient map is not a right resolver (") + e.what() +
                             "): " + write_resolver(phi));
    }
  };
  StabilityQuotient out{q, checked(g, q, std::move(pvmap), std::move(pemap)),
                        checked(q, h, std::move(dvmap), std::move(demap)), std::move(report)};
  if (!(compose(out.delta, out.psi) == phi)) {
    throw TheoremViolation("stability quotient does not recompose: " + write_resolver(phi));
  }
  if (!is_synchronizing(out.psi)) {
    throw TheoremViolation("stability quotient map is not synchronizing: " + write_resolver(phi));
  }
  if (!compute_stability(out.delta).trivial()) {
    throw TheoremViolation("induced map from the stability quotient has non-trivial stability: " +
                           write_resolver(phi));
  }
  return out;
}

std::vector<Vertex> push_set(const RightResolver& phi, std::vector<Vertex> set, const Path& w) {
  for (EdgeId c : w.edges) {
    for (Vertex& v : set) v = phi.step(v, c);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return set;
}

std::vector<Vertex> lift_set_backward(const RightResolver& phi, EdgeId u, const std::vector<Vertex>& set) {
  std::vector<Vertex> out;
  for (Vertex v : phi.fiber(phi.codomain().source(u))) {
    if (std::binary_search(set.begin(), set.end(), phi.step(v, u))) out.push_back(v);
  }
  return out;
}

std::vector<MinimalImage> minimal_images(const RightResolver& phi) {
  const PairSynchronizer sync(phi);
  const PairGraph& pg = sync.pairs();
  std::vector<MinimalImage> out;
  for (Vertex k = 0; k < phi.codomain().vertex_count(); ++k) {
    MinimalImage img{k, Path{k, {}}, phi.fiber(k)};
    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < img.members.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < img.members.size() && !merged; ++j) {
          const std::size_t p = pg.node(img.members[i], img.members[j]);
          if (!sync.synchronizable(p)) continue;
          const Path w = *sync.witness(p);
          img.members = push_set(phi, std::move(img.members), w);
          img.word.edges.insert(img.word.edges.end(), w.edges.begin(), w.edges.end());
          merged = true;
        }
      }
    }
    out.push_back(std::move(img));
  }
  return out;
}

namespace {

// All non-empty synchronized sets, found by backward exploration from
// singletons, with the MSS flag of each.
struct SynchronizedSetGraph {
  std::vector<SynchronizedSet> sets;
  std::vector<std::uint32_t> mask;
  std::vector<bool> maximal;
  std::map<std::uint32_t, std::size_t> index;

  SynchronizedSetGraph(const RightResolver& phi, const MssOptions& options) {
    const Graph& g = phi.domain();
    const Graph& h = phi.codomain();
    if (g.vertex_count() > options.max_vertices || g.vertex_count() > 32) {
      throw BoundExceeded("maximal synchronized set search: too many vertices");
    }
    for (const auto& f : phi.fibers()) {
      if (f.size() > options.max_fiber) throw BoundExceeded("maximal synchronized set search: fiber too large");
    }
    auto to_mask = [](const std::vector<Vertex>& s) {
      std::uint32_t m = 0;
      for (Vertex v : s) m |= 1u << v;
      return m;
    };
    std::vector<std::vector<std::size_t>> succ;
    auto add = [&](SynchronizedSet s) -> std::size_t {
      const std::uint32_t m = to_mask(s.members);
      auto [it, fresh] = index.try_emplace(m, sets.size());
      if (fresh) {
        sets.push_back(std::move(s));
        mask.push_back(m);
        succ.emplace_back();
      }
      return it->second;
    };
    for (Vertex v = 0; v < g.vertex_count(); ++v) add({{v}, v, Path{phi.vertex_image(v), {}}});
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const Vertex at = phi.vertex_image(sets[i].members.front());
      for (EdgeId u : h.in_edges(at)) {
        std::vector<Vertex> pre = lift_set_backward(phi, u, sets[i].members);
        if (pre.empty()) continue;
        Path word{h.source(u), {u}};
        word.edges.insert(word.edges.end(), sets[i].word.edges.begin(), sets[i].word.edges.end());
        const std::size_t j = add({std::move(pre), sets[i].end, std::move(word)});
        succ[i].push_back(j);
      }
    }
    // Largest set reachable from each set, by monotone relaxation.
    std::vector<std::size_t> best(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) best[i] = sets[i].members.size();
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j : succ[i]) {
          if (best[j] > best[i]) {
            best[i] = best[j];
            changed = true;
          }
        }
      }
    }
    maximal.resize(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) maximal[i] = best[i] <= sets[i].members.size();
  }

  std::optional<std::size_t> find(const std::vector<Vertex>& members) const {
    std::uint32_t m = 0;
    for (Vertex v : members) m |= 1u << v;
    auto it = index.find(m);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

std::vector<EdgeId> domain_path(const Graph& g, Vertex from, Vertex to) {
  std::vector<EdgeId> via(g.vertex_count(), UINT32_MAX);
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<Vertex> q;
  seen[from] = true;
  q.push(from);
  while (!q.empty() && !seen[to]) {
    const Vertex v = q.front();
    q.pop();
    for (EdgeId e : g.out_edges(v)) {
      if (!seen[g.target(e)]) {
        seen[g.target(e)] = true;
        via[g.target(e)] = e;
        q.push(g.target(e));
      }
    }
  }
  if (!seen[to]) throw Error("domain is not strongly connected");
  std::vector<EdgeId> path;
  for (Vertex at = to; at != from; at = g.source(via[at])) path.push_back(via[at]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<SynchronizedSet> maximal_synchronized_sets(const RightResolver& phi, Vertex fiber,
                                                       const MssOptions& options) {
  if (fiber >= phi.codomain().vertex_count()) throw Error("maximal_synchronized_sets: fiber out of range");
  const SynchronizedSetGraph graph(phi, options);
  std::vector<SynchronizedSet> out;
  for (std::size_t i = 0; i < graph.sets.size(); ++i) {
    if (graph.maximal[i] && phi.vertex_image(graph.sets[i].members.front()) == fiber) {
      out.push_back(graph.sets[i]);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SynchronizedSet& a, const SynchronizedSet& b) { return a.members < b.members; });
  return out;
}

Path mss_partition_word(const RightResolver& phi, Vertex fiber, const MssOptions& options) {
  const Graph& g = phi.domain();
  if (fiber >= phi.codomain().vertex_count()) throw Error("mss_partition_word: fiber out of range");
  if (!classify(phi.codomain()).is_bunchy) throw Error("mss_partition_word: codomain is not bunchy");
  if (!search_bi_resolver(g, phi.codomain(), phi.vertex_map())) {
    throw Error("mss_partition_word: no bi-resolver shares this resolver's vertex map");
  }
  const SynchronizedSetGraph graph(phi, options);
  const std::vector<Vertex>& members = phi.fiber(fiber);

  std::optional<Path> seed_word;
  for (std::size_t i = 0; i < graph.sets.size() && !seed_word; ++i) {
    if (graph.maximal[i] && phi.vertex_image(graph.sets[i].members.front()) == fiber) {
      seed_word = graph.sets[i].word;
    }
  }
  if (!seed_word) throw TheoremViolation("fiber contains no maximal synchronized set: " + write_resolver(phi));
  Path w = *seed_word;

  std::size_t previous = 0;
  while (true) {
    // Synchronization classes of w on the fiber, keyed by their end vertex.
    std::map<Vertex, std::vector<Vertex>> classes;
    for (Vertex v : members) classes[push_set(phi, {v}, w).front()].push_back(v);
    std::vector<bool> covered(g.vertex_count(), false);
    std::size_t maximal_count = 0;
    std::optional<Vertex> anchor_end;
    for (const auto& [end, cls] : classes) {
      const auto id = graph.find(cls);
      if (!id || !graph.maximal[*id]) continue;
      ++maximal_count;
      if (!anchor_end) anchor_end = end;
      for (Vertex v : cls) covered[v] = true;
    }
    if (maximal_count == classes.size()) return w;
    if (maximal_count <= previous || !anchor_end) {
      throw TheoremViolation("partition word extension made no progress: " + write_resolver(phi));
    }
    previous = maximal_count;
    const Vertex uncovered = *std::find_if(members.begin(), members.end(), [&](Vertex v) { return !covered[v]; });
    Path u{terminal(phi.codomain(), w), {}};
    for (EdgeId e : domain_path(g, *anchor_end, uncovered)) u.edges.push_back(phi.edge_image(e));
    Path next{fiber, w.edges};
    next.edges.insert(next.edges.end(), u.edges.begin(), u.edges.end());
    next.edges.insert(next.edges.end(), w.edges.begin(), w.edges.end());
    w = std::move(next);
  }
}

}  // namespace bunchy
