#pragma once

// Monte Carlo estimates of how often a random right resolver G -> B(G) is
// synchronizing, over random graphs with a prescribed minimal factor, plus
// exhaustive probes on tiny graphs.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bunchy/graph.hpp"
#include "bunchy/resolver.hpp"

namespace bunchy {

// How the out-edges of a vertex in class I that lead into fiber J pick
// their targets. `adjacency` draws the row of edge multiplicities into J
// uniformly among all rows with the right total; `per_edge` draws each
// edge's target independently and uniformly.
enum class SamplingModel { adjacency, per_edge };

struct ExtensionSpec {
  Graph m;  // strongly connected and minimal
  std::size_t n = 0;
  std::uint64_t seed = 0;
  SamplingModel model = SamplingModel::adjacency;
};

inline constexpr std::size_t kExtensionRejectionBudget = 100'000;

// Random strongly connected graph on spec.n vertices with M(G) ~ spec.m:
// a uniform surjection onto V(m) fixes the fibers, then each vertex gets
// its out-edges into every fiber per spec.model. Drawn again until
// strongly connected.
Graph sample_extension(const ExtensionSpec& spec);

struct SyncProbabilityEstimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;
  bool capped = false;
};

inline constexpr std::size_t kDefaultSuccesses = 100;
inline constexpr std::size_t kDefaultTrialCap = 10'000;

// Draws random resolvers onto B(G) (canonical vertex map) until
// `target_successes` are synchronizing or `cap` trials ran; p_hat is
// successes / trials. Trial t uses derive_seed(seed, t).
SyncProbabilityEstimate estimate_sync_probability(const Graph& g, std::size_t target_successes,
                                                  std::size_t cap, std::uint64_t seed);

struct ExperimentRecord {
  std::size_t graph_id = 0;
  Graph graph;
  SyncProbabilityEstimate estimate;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
};

struct TableOptions {
  SamplingModel model = SamplingModel::adjacency;
  std::size_t target_successes = kDefaultSuccesses;
  std::size_t cap = kDefaultTrialCap;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

struct TableResult {
  std::string m_name;
  std::size_t n = 0;
  std::size_t graphs = 0;
  double mean_p = 0.0;
  std::vector<ExperimentRecord> records;  // ordered by graph_id

  std::size_t capped_count() const;
};

// Graph i is sampled with derive_seed(seed, 2i) and estimated with
// derive_seed(seed, 2i+1), so results do not depend on `workers`.
TableResult run_table_experiment(const Graph& m, std::string m_name, std::size_t n, std::size_t graphs,
                                 const TableOptions& options = {});

// "m_name,n,graphs,mean_p"
std::string table_csv(const std::vector<TableResult>& rows);
// "graph_id,p_hat,trials,capped"
std::string records_csv(const std::vector<ExperimentRecord>& records);

// "bin_lo,bin_hi,count" over equal-width bins of [0,1]. Throws Error on an
// empty input or zero bins.
std::string histogram_csv(const std::vector<double>& p_hats, std::size_t bins, bool only_below_one);
std::string histogram_csv(const std::vector<ExperimentRecord>& records, std::size_t bins, bool only_below_one);
// Parses records_csv output back into p_hat values.
std::vector<double> read_records_csv(const std::string& text);

inline constexpr std::size_t kEnumerationBound = 200'000;

// Calls visit on every right resolver g -> h (over every vertex map, or
// only `vertex_map` when given) until visit returns false. Throws
// BoundExceeded if more than `bound` candidates would be generated.
void for_each_right_resolver(const Graph& g, const Graph& h,
                             const std::function<bool(const RightResolver&)>& visit,
                             const std::optional<std::vector<Vertex>>& vertex_map = std::nullopt,
                             std::size_t bound = kEnumerationBound);

std::vector<RightResolver> enumerate_right_resolvers(const Graph& g, const Graph& h,
                                                     std::size_t bound = kEnumerationBound);

bool exists_right_resolver(const Graph& g, const Graph& h);

inline constexpr std::size_t kPartitionEnumerationBound = 10;

// Every partition of V(g) in which each class sends the same number of
// edges into every class; these are exactly the fiber partitions of right
// resolvers out of g.
std::vector<VertexPartition> out_equitable_partitions(const Graph& g);

struct OgProbeReport {
  std::vector<Graph> synchronizing_factors;  // one per fiber partition
  std::vector<Graph> minimal_factors;        // <=_S-minimal, one per iso class
  bool unique = false;
};

inline constexpr std::size_t kProbeVertexBound = 8;

OgProbeReport probe_og_uniqueness(const Graph& g);

}  // namespace bunchy
