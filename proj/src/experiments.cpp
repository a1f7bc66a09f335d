#include "bunchy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "bunchy/bunchy_factor.hpp"
#include "bunchy/errors.hpp"
#include "bunchy/io.hpp"
#include "bunchy/minimal_factor.hpp"
#include "bunchy/stability.hpp"

namespace bunchy {

namespace {

// Uniform multiset of `count` draws from {0..slots-1}, returned sorted:
// stars and bars with a uniformly chosen set of bar positions.
std::vector<std::size_t> uniform_composition(std::mt19937_64& rng, std::size_t count, std::size_t slots) {
  std::vector<std::size_t> pos(count + slots - 1);
  std::iota(pos.begin(), pos.end(), 0);
  for (std::size_t i = 0; i + 1 < slots; ++i) std::swap(pos[i], pos[i + uniform_below(rng, pos.size() - i)]);
  std::vector<bool> bar(pos.size(), false);
  for (std::size_t i = 0; i + 1 < slots; ++i) bar[pos[i]] = true;
  std::vector<std::size_t> out;
  std::size_t bucket = 0;
  for (bool b : bar) {
    if (b) {
      ++bucket;
    } else {
      out.push_back(bucket);
    }
  }
  return out;
}

}  // namespace

Graph sample_extension(const ExtensionSpec& spec) {
  const Graph& m = spec.m;
  const std::size_t k = m.vertex_count();
  if (k == 0 || !is_strongly_connected(m)) throw Error("sample_extension: m must be strongly connected");
  if (!is_minimal(m)) throw Error("sample_extension: m must be a minimal graph");
  if (spec.n < k) throw Error("sample_extension: n is smaller than |V(m)|");

  std::mt19937_64 rng(spec.seed);
  std::vector<std::size_t> sigma(spec.n);
  std::vector<std::vector<Vertex>> fiber(k);
  for (std::size_t attempt = 0; attempt < kExtensionRejectionBudget; ++attempt) {
    do {
      for (auto& f : fiber) f.clear();
      for (Vertex v = 0; v < spec.n; ++v) {
        sigma[v] = uniform_below(rng, k);
        fiber[sigma[v]].push_back(v);
      }
    } while (std::any_of(fiber.begin(), fiber.end(), [](const auto& f) { return f.empty(); }));

    std::vector<Edge> edges;
    for (Vertex v = 0; v < spec.n; ++v) {
      std::map<Vertex, std::size_t> group;  // fiber -> number of m-edges into it
      for (EdgeId a : m.out_edges(static_cast<Vertex>(sigma[v]))) ++group[m.target(a)];
      for (const auto& [j, count] : group) {
        const auto& targets = fiber[j];
        if (spec.model == SamplingModel::per_edge) {
          for (std::size_t r = 0; r < count; ++r) edges.push_back({v, targets[uniform_below(rng, targets.size())]});
        } else {
          for (std::size_t t : uniform_composition(rng, count, targets.size())) edges.push_back({v, targets[t]});
        }
      }
    }
    Graph g(spec.n, std::move(edges));
    if (!is_strongly_connected(g)) continue;
    if (!minimal_iso(compute_minimal_factor(g).m_graph, m)) {
      throw TheoremViolation("sampled extension has the wrong minimal factor: " + write_graph(g));
    }
    return g;
  }
  std::ostringstream msg;
  msg << "sample_extension: no strongly connected extension after " << kExtensionRejectionBudget
      << " draws (m = " << write_graph(m) << ", n = " << spec.n << ")";
  throw Error(msg.str());
}

SyncProbabilityEstimate estimate_sync_probability(const Graph& g, std::size_t target_successes,
                                                  std::size_t cap, std::uint64_t seed) {
  const BunchyFactorResult bf = compute_bunchy_factor(g);
  std::vector<Vertex> vmap(g.vertex_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(bf.classes[v]);
  SyncProbabilityEstimate est;
  while (est.successes < target_successes && est.trials < cap) {
    const RightResolver r = random_right_resolver(g, bf.b_graph, vmap, derive_seed(seed, est.trials));
    ++est.trials;
    if (is_synchronizing(r)) ++est.successes;
  }
  est.capped = est.successes < target_successes;
  est.p_hat = est.trials == 0 ? 0.0 : static_cast<double>(est.successes) / static_cast<double>(est.trials);
  return est;
}

std::size_t TableResult::capped_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.estimate.capped; }));
}

TableResult run_table_experiment(const Graph& m, std::string m_name, std::size_t n, std::size_t graphs,
                                 const TableOptions& options) {
  TableResult result{std::move(m_name), n, graphs, 0.0, std::vector<ExperimentRecord>(graphs)};
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= graphs) return;
      try {
        const auto start = std::chrono::steady_clock::now();
        ExperimentRecord& rec = result.records[i];
        rec.graph_id = i;
        rec.seed = options.seed;
        rec.graph = sample_extension({m, n, derive_seed(options.seed, 2 * i), options.model});
        rec.estimate = estimate_sync_probability(rec.graph, options.target_successes, options.cap,
                                                 derive_seed(options.seed, 2 * i + 1));
        rec.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = graphs;
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, graphs));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  double sum = 0.0;
  for (const auto& rec : result.records) sum += rec.estimate.p_hat;
  result.mean_p = graphs == 0 ? 0.0 : sum / static_cast<double>(graphs);
  return result;
}

std::string table_csv(const std::vector<TableResult>& rows) {
  std::ostringstream out;
  out << "m_name,n,graphs,mean_p\n";
  for (const auto& row : rows) {
    out << row.m_name << ',' << row.n << ',' << row.graphs << ',' << std::fixed << std::setprecision(6)
        << row.mean_p << '\n';
  }
  return out.str();
}

std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "graph_id,p_hat,trials,capped\n";
  for (const auto& r : records) {
    out << r.graph_id << ',' << std::setprecision(10) << r.estimate.p_hat << ',' << r.estimate.trials << ','
        << (r.estimate.capped ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string histogram_csv(const std::vector<double>& p_hats, std::size_t bins, bool only_below_one) {
  if (p_hats.empty()) throw Error("histogram_csv: no records");
  if (bins == 0) throw Error("histogram_csv: bins must be positive");
  std::vector<std::size_t> counts(bins, 0);
  for (double p : p_hats) {
    if (only_below_one && p >= 1.0) continue;
    const auto bin = static_cast<std::size_t>(std::clamp(p, 0.0, 1.0) * static_cast<double>(bins));
    ++counts[std::min(bin, bins - 1)];
  }
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < bins; ++i) {
    out << static_cast<double>(i) / static_cast<double>(bins) << ','
        << static_cast<double>(i + 1) / static_cast<double>(bins) << ',' << counts[i] << '\n';
  }
  return out.str();
}

std::string histogram_csv(const std::vector<ExperimentRecord>& records, std::size_t bins, bool only_below_one) {
  std::vector<double> p;
  p.reserve(records.size());
  for (const auto& r : records) p.push_back(r.estimate.p_hat);
  return histogram_csv(p, bins, only_below_one);
}

std::vector<double> read_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("graph_id", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::string id;
    std::string p;
    if (!std::getline(row, id, ',') || !std::getline(row, p, ',')) throw Error("malformed record row: " + line);
    try {
      out.push_back(std::stod(p));
    } catch (const std::exception&) {
      throw Error("malformed p_hat in record row: " + line);
    }
  }
  return out;
}

namespace {

struct Group {
  std::vector<EdgeId> domain;
  std::vector<EdgeId> codomain;
};

// Parallel-group decomposition for a vertex map, or nullopt if the edge
// counts do not match.
std::optional<std::vector<Group>> groups_for(const Graph& g, const Graph& h, const std::vector<Vertex>& vmap) {
  std::vector<Group> groups;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::map<Vertex, Group> by_target;
    for (EdgeId e : g.out_edges(v)) by_target[vmap[g.target(e)]].domain.push_back(e);
    for (EdgeId c : h.out_edges(vmap[v])) by_target[h.target(c)].codomain.push_back(c);
    for (auto& [t, grp] : by_target) {
      if (grp.domain.size() != grp.codomain.size()) return std::nullopt;
      groups.push_back(std::move(grp));
    }
  }
  return groups;
}

std::size_t saturating_factorial_product(const std::vector<Group>& groups, std::size_t limit) {
  std::size_t total = 1;
  for (const auto& grp : groups) {
    for (std::size_t k = 2; k <= grp.domain.size(); ++k) {
      if (total > limit / k) return limit + 1;
      total *= k;
    }
  }
  return total;
}

}  // namespace

void for_each_right_resolver(const Graph& g, const Graph& h,
                             const std::function<bool(const RightResolver&)>& visit,
                             const std::optional<std::vector<Vertex>>& vertex_map, std::size_t bound) {
  const std::size_t n = g.vertex_count();
  std::vector<std::pair<std::vector<Vertex>, std::vector<Group>>> plans;
  std::size_t total = 0;
  auto consider = [&](const std::vector<Vertex>& vmap) {
    auto groups = groups_for(g, h, vmap);
    if (!groups) return;
    total += saturating_factorial_product(*groups, bound);
    if (total > bound) throw BoundExceeded("right resolver enumeration exceeds its bound");
    plans.emplace_back(vmap, std::move(*groups));
  };
  if (vertex_map) {
    if (vertex_map->size() != n) throw Error("for_each_right_resolver: vertex map has wrong length");
    consider(*vertex_map);
  } else if (h.vertex_count() > 0 || n == 0) {
    std::vector<Vertex> vmap(n, 0);
    // Odometer over all maps, pruned by out-degree.
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
      if (v == n) {
        consider(vmap);
        return;
      }
      for (Vertex k = 0; k < h.vertex_count(); ++k) {
        if (g.out_degree(static_cast<Vertex>(v)) != h.out_degree(k)) continue;
        vmap[v] = k;
        rec(v + 1);
      }
    };
    rec(0);
  }

  for (auto& [vmap, groups] : plans) {
    std::vector<std::vector<EdgeId>> perm;
    for (auto& grp : groups) {
      std::sort(grp.codomain.begin(), grp.codomain.end());
      perm.push_back(grp.codomain);
    }
    std::vector<EdgeId> emap(g.edge_count());
    while (true) {
      for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < groups[i].domain.size(); ++j) emap[groups[i].domain[j]] = perm[i][j];
      }
      std::optional<RightResolver> r;
      try {
        r = RightResolver::validate(g, h, vmap, emap);
      } catch (const InvalidResolver&) {
        // Not surjective onto h.
      }
      if (r && !visit(*r)) return;
      std::size_t i = 0;
      while (i < perm.size() && !std::next_permutation(perm[i].begin(), perm[i].end())) ++i;
      if (i == perm.size()) break;
    }
  }
}

std::vector<RightResolver> enumerate_right_resolvers(const Graph& g, const Graph& h, std::size_t bound) {
  std::vector<RightResolver> out;
  for_each_right_resolver(
      g, h,
      [&](const RightResolver& r) {
        out.push_back(r);
        return true;
      },
      std::nullopt, bound);
  return out;
}

bool exists_right_resolver(const Graph& g, const Graph& h) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> vmap(n, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t v) -> bool {
    if (v == n) {
      auto groups = groups_for(g, h, vmap);
      if (!groups) return false;
      std::vector<bool> hit_v(h.vertex_count(), false);
      std::vector<bool> hit_e(h.edge_count(), false);
      for (Vertex im : vmap) hit_v[im] = true;
      for (const auto& grp : *groups) {
        for (EdgeId c : grp.codomain) hit_e[c] = true;
      }
      return std::all_of(hit_v.begin(), hit_v.end(), [](bool b) { return b; }) &&
             std::all_of(hit_e.begin(), hit_e.end(), [](bool b) { return b; });
    }
    for (Vertex k = 0; k < h.vertex_count(); ++k) {
      if (g.out_degree(static_cast<Vertex>(v)) != h.out_degree(k)) continue;
      vmap[v] = k;
      if (rec(v + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

std::vector<VertexPartition> out_equitable_partitions(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kPartitionEnumerationBound) throw BoundExceeded("partition enumeration is limited to 10 vertices");
  std::vector<VertexPartition> out;
  if (n == 0) return out;
  std::vector<std::size_t> label(n, 0);
  // Restricted growth strings.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t used) {
    if (v == n) {
      VertexPartition p(label);
      if (is_out_equitable(g, p)) out.push_back(std::move(p));
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      label[v] = c;
      rec(v + 1, std::max(used, c + 1));
    }
  };
  label[0] = 0;
  rec(1, 1);
  return out;
}

namespace {

bool has_synchronizing_resolver(const Graph& g, const VertexPartition& p, const Graph& h) {
  std::vector<Vertex> vmap(g.vertex_count());
  for (Vertex v = 0; v < vmap.size(); ++v) vmap[v] = static_cast<Vertex>(p[v]);
  bool found = false;
  for_each_right_resolver(
      g, h,
      [&](const RightResolver& r) {
        found = is_synchronizing(r);
        return !found;
      },
      vmap);
  return found;
}

// Synchronizing factors of g, including g itself; optionally proper ones only.
std::vector<Graph> synchronizing_factors(const Graph& g, bool proper_only) {
  std::vector<Graph> out;
  for (const VertexPartition& p : out_equitable_partitions(g)) {
    if (p.is_discrete()) {
      if (!proper_only) out.push_back(g);
      continue;
    }
    Graph h = equitable_quotient(g, p);
    if (has_synchronizing_resolver(g, p, h)) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

OgProbeReport probe_og_uniqueness(const Graph& g) {
  if (g.vertex_count() > kProbeVertexBound) throw BoundExceeded("probe_og_uniqueness is limited to 8 vertices");
  if (!is_strongly_connected(g)) throw Error("probe_og_uniqueness requires a strongly connected graph");
  OgProbeReport report;
  report.synchronizing_factors = synchronizing_factors(g, false);
  for (const Graph& h : report.synchronizing_factors) {
    // A synchronizing factor of equal size is an isomorphism, so h is
    // <=_S-minimal iff it has no smaller synchronizing factor.
    if (!synchronizing_factors(h, true).empty()) continue;
    const bool seen = std::any_of(report.minimal_factors.begin(), report.minimal_factors.end(),
                                  [&](const Graph& k) { return brute_force_isomorphic(h, k); });
    if (!seen) report.minimal_factors.push_back(h);
  }
  report.unique = report.minimal_factors.size() == 1;
  return report;
}

}  // namespace bunchy
