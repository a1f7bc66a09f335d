// Command-line front end. Summaries go to stdout; machine-readable output
// is written only through --out.

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bunchy/bunchy_factor.hpp"
#include "bunchy/constructors.hpp"
#include "bunchy/errors.hpp"
#include "bunchy/experiments.hpp"
#include "bunchy/io.hpp"
#include "bunchy/minimal_factor.hpp"
#include "bunchy/reports.hpp"
#include "bunchy/stability.hpp"

namespace {

using namespace bunchy;

constexpr std::uint64_t kDefaultSeed = 1;

enum ExitCode { kOk = 0, kUserError = 1, kTheoremViolation = 2, kConjectureFailure = 3 };

struct Options {
  std::string input;
  std::string out;
  std::string m_path;
  std::string m_name;
  std::string records_out;
  std::uint64_t seed = kDefaultSeed;
  std::size_t workers = 1;
  std::size_t trials_cap = kDefaultTrialCap;
  std::size_t successes = kDefaultSuccesses;
  std::size_t graphs = 100;
  std::size_t n = 0;
  std::size_t bins = 20;
  bool below_one = false;
  SamplingModel model = SamplingModel::adjacency;
};

Graph load_graph(const std::string& path) { return read_graph(read_file(path)); }

void emit(const Options& opt, const std::string& text) {
  if (!opt.out.empty()) write_file(opt.out, text);
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_analyze(const Options& opt) {
  const Graph g = load_graph(opt.input);
  const bool sc = is_strongly_connected(g);
  std::cout << "vertices: " << g.vertex_count() << "\n"
            << "edges: " << g.edge_count() << "\n"
            << "strongly connected: " << yes_no(sc) << "\n";
  Json j;
  j["num_vertices"] = g.vertex_count();
  j["num_edges"] = g.edge_count();
  j["strongly_connected"] = sc;
  if (sc && g.edge_count() > 0) {
    const std::size_t p = period(g);
    const BunchyClass cls = classify(g);
    const MinimalFactorResult mf = compute_minimal_factor(g);
    const BunchyFactorResult bf = compute_bunchy_factor(g);
    std::cout << "period: " << p << "\n"
              << "bunchy: " << yes_no(cls.is_bunchy) << "\n"
              << "almost bunchy: " << yes_no(cls.is_almost_bunchy) << "\n"
              << "weakly almost bunchy: " << yes_no(cls.is_weakly_almost_bunchy) << "\n"
              << "minimal factor: " << mf.m_graph.vertex_count() << " vertices, " << mf.m_graph.edge_count()
              << " edges\n"
              << "bunchy factor: " << bf.b_graph.vertex_count() << " vertices, " << bf.b_graph.edge_count()
              << " edges\n";
    j["period"] = p;
    j["bunchy"] = cls.is_bunchy;
    j["almost_bunchy"] = cls.is_almost_bunchy;
    j["weakly_almost_bunchy"] = cls.is_weakly_almost_bunchy;
    j["minimal_factor_vertices"] = mf.m_graph.vertex_count();
    j["bunchy_factor_vertices"] = bf.b_graph.vertex_count();
  }
  emit(opt, dump(j));
  return kOk;
}

int print_factor(const Options& opt, const Graph& factor, const VertexPartition& p) {
  std::cout << "graph: " << write_graph(factor) << "\n"
            << "partition: " << partition_to_json(p).dump() << "\n";
  Json j;
  j["graph"] = graph_to_json(factor);
  j["partition"] = partition_to_json(p);
  emit(opt, dump(j));
  return kOk;
}

int cmd_minimize(const Options& opt) {
  const MinimalFactorResult mf = compute_minimal_factor(load_graph(opt.input));
  return print_factor(opt, mf.m_graph, mf.sigma);
}

int cmd_bunchy(const Options& opt) {
  const BunchyFactorResult bf = compute_bunchy_factor(load_graph(opt.input));
  return print_factor(opt, bf.b_graph, bf.classes);
}

int cmd_stability(const Options& opt) {
  const RightResolver phi = read_resolver(read_file(opt.input));
  const StabilityReport report = compute_stability(phi);
  std::cout << "classes: " << partition_to_json(report.partition).dump() << "\n"
            << "synchronizing: " << yes_no(report.synchronizing) << "\n"
            << "stable pairs: " << report.stable_pairs.size() << "\n";
  emit(opt, dump(stability_report_to_json(report)));
  return kOk;
}

int cmd_sync_prob(const Options& opt) {
  const Graph g = load_graph(opt.input);
  if (!is_strongly_connected(g)) throw Error("sync-prob requires a strongly connected graph");
  const SyncProbabilityEstimate est = estimate_sync_probability(g, opt.successes, opt.trials_cap, opt.seed);
  std::cout << "seed: " << opt.seed << "\n"
            << "successes: " << est.successes << "\n"
            << "trials: " << est.trials << "\n"
            << "p_hat: " << est.p_hat << "\n"
            << "capped: " << yes_no(est.capped) << "\n";
  Json j;
  j["successes"] = est.successes;
  j["trials"] = est.trials;
  j["p_hat"] = est.p_hat;
  j["capped"] = est.capped;
  j["seed"] = opt.seed;
  emit(opt, dump(j));
  if (est.capped) std::cout << "WARNING: trial cap reached without enough synchronizing resolvers\n";
  return kOk;
}

int cmd_table(const Options& opt) {
  if (opt.m_path.empty()) throw Error("table requires --m");
  if (opt.n == 0) throw Error("table requires --n");
  const Graph m = load_graph(opt.m_path);
  const std::string name =
      opt.m_name.empty() ? std::filesystem::path(opt.m_path).stem().string() : opt.m_name;
  TableOptions t;
  t.target_successes = opt.successes;
  t.cap = opt.trials_cap;
  t.seed = opt.seed;
  t.workers = opt.workers;
  t.model = opt.model;
  const TableResult result = run_table_experiment(m, name, opt.n, opt.graphs, t);
  std::cout << "seed: " << opt.seed << "\n" << table_csv({result});
  if (result.capped_count() > 0) {
    std::cout << "WARNING: " << result.capped_count() << " graph(s) reached the trial cap\n";
    for (const auto& r : result.records) {
      if (r.estimate.capped) std::cout << "  capped graph " << r.graph_id << ": " << write_graph(r.graph) << "\n";
    }
  }
  emit(opt, table_csv({result}));
  if (!opt.records_out.empty()) write_file(opt.records_out, records_csv(result.records));
  return kOk;
}

int cmd_histogram(const Options& opt) {
  const std::string csv = histogram_csv(read_records_csv(read_file(opt.input)), opt.bins, opt.below_one);
  std::cout << csv;
  emit(opt, csv);
  return kOk;
}

int cmd_search_biresolver(const Options& opt) {
  const Graph g = load_graph(opt.input);
  const std::optional<RightResolver> r = find_biresolver(g);
  if (!r) {
    std::cout << "no bi-resolver onto the bunchy factor\n";
    return kOk;
  }
  std::cout << "bi-resolver found\n"
            << "edge map: " << Json(r->edge_map()).dump() << "\n";
  emit(opt, write_resolver(*r) + "\n");
  return kOk;
}

int cmd_synthesize(const Options& opt) {
  const Graph g = load_graph(opt.input);
  SynthesisOptions so;
  so.seed = opt.seed;
  so.heuristic_cap = opt.trials_cap;
  const SynthesisTrace trace = synthesize_synchronizer(g, so);
  std::cout << "seed: " << opt.seed << "\n"
            << "route: " << to_string(trace.route) << "\n"
            << "steps: " << trace.steps.size() << "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const SynthesisStep& s = trace.steps[i];
    std::cout << "  step " << i << ": " << s.graph.vertex_count() << " -> " << s.quotient.vertex_count()
              << " vertices, classes " << partition_to_json(s.classes).dump() << "\n";
  }
  if (trace.heuristic()) std::cout << "heuristic trials: " << trace.heuristic_trials << "\n";
  const RightResolver& f = *trace.final_resolver;
  std::cout << "final codomain: " << write_graph(f.codomain()) << "\n"
            << "final synchronizing: " << yes_no(is_synchronizing(f)) << "\n";
  emit(opt, dump(synthesis_trace_to_json(trace)));
  return kOk;
}

int cmd_sample(const Options& opt) {
  if (opt.m_path.empty()) throw Error("sample requires --m");
  const Graph m = load_graph(opt.m_path);
  const std::size_t n = opt.n == 0 ? m.vertex_count() : opt.n;
  std::ostringstream lines;
  for (std::size_t i = 0; i < opt.graphs; ++i) {
    lines << write_graph(sample_extension({m, n, derive_seed(opt.seed, 2 * i), opt.model})) << "\n";
  }
  std::cout << "seed: " << opt.seed << "\n";
  if (opt.out.empty()) {
    std::cout << lines.str();
  } else {
    write_file(opt.out, lines.str());
    std::cout << "wrote " << opt.graphs << " graph(s) to " << opt.out << "\n";
  }
  return kOk;
}

int cmd_probe_og(const Options& opt) {
  const OgProbeReport report = probe_og_uniqueness(load_graph(opt.input));
  std::cout << "synchronizing factors: " << report.synchronizing_factors.size() << "\n"
            << "minimal synchronizing factors: " << report.minimal_factors.size() << "\n";
  for (const Graph& h : report.minimal_factors) std::cout << "  " << write_graph(h) << "\n";
  std::cout << "unique: " << yes_no(report.unique) << "\n";
  Json j;
  j["unique"] = report.unique;
  j["synchronizing_factor_count"] = report.synchronizing_factors.size();
  Json mins = Json::array();
  for (const Graph& h : report.minimal_factors) mins.push_back(graph_to_json(h));
  j["minimal_factors"] = std::move(mins);
  emit(opt, dump(j));
  if (!report.unique) std::cout << "FLAGGED: more than one minimal synchronizing factor\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Right resolvers, bunchy factors and synchronization experiments"};
  app.require_subcommand(1);
  Options opt;

  auto with_input = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("input", opt.input, what)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Write machine-readable output here");
    return sub;
  };
  const std::map<std::string, SamplingModel> models{{"adjacency", SamplingModel::adjacency},
                                                    {"per-edge", SamplingModel::per_edge}};
  auto with_model = [&](CLI::App* sub) {
    sub->add_option("--model", opt.model, "Sampling model for extensions")
        ->transform(CLI::CheckedTransformer(models, CLI::ignore_case))
        ->default_str("adjacency");
  };
  auto with_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  };

  auto* analyze = with_input(app.add_subcommand("analyze", "Connectivity, period and classification"), "Graph JSON");
  auto* minimize = with_input(app.add_subcommand("minimize", "Minimal right-resolving factor"), "Graph JSON");
  auto* bunchy = with_input(app.add_subcommand("bunchy", "Bunchy factor"), "Graph JSON");
  auto* stability = with_input(app.add_subcommand("stability", "Stability report of a resolver"), "Resolver JSON");

  auto* sync_prob = with_input(app.add_subcommand("sync-prob", "Estimate synchronization probability"), "Graph JSON");
  with_seed(sync_prob);
  sync_prob->add_option("--successes", opt.successes)->capture_default_str();
  sync_prob->add_option("--trials-cap", opt.trials_cap)->capture_default_str();

  auto* table = app.add_subcommand("table", "Mean synchronization probability over sampled extensions");
  table->add_option("--m", opt.m_path, "Minimal graph JSON")->required()->check(CLI::ExistingFile);
  table->add_option("--m-name", opt.m_name, "Row label (defaults to the file stem)");
  table->add_option("--n", opt.n, "Vertex count of sampled graphs")->required();
  table->add_option("--graphs", opt.graphs)->capture_default_str();
  table->add_option("--successes", opt.successes)->capture_default_str();
  table->add_option("--trials-cap", opt.trials_cap)->capture_default_str();
  table->add_option("--workers", opt.workers)->capture_default_str();
  table->add_option("--out", opt.out, "Table CSV");
  table->add_option("--records", opt.records_out, "Per-graph records CSV");
  with_seed(table);
  with_model(table);

  auto* histogram = with_input(app.add_subcommand("histogram", "Histogram of per-graph estimates"), "Records CSV");
  histogram->add_option("--bins", opt.bins)->capture_default_str();
  histogram->add_flag("--below-one", opt.below_one, "Only records with p_hat < 1");

  auto* search = with_input(app.add_subcommand("search-biresolver", "Bi-resolver onto the bunchy factor"), "Graph JSON");

  auto* synthesize = with_input(app.add_subcommand("synthesize", "Build a synchronizing resolver onto B(G)"), "Graph JSON");
  with_seed(synthesize);
  synthesize->add_option("--trials-cap", opt.trials_cap, "Cap for the heuristic fallback")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Random extensions of a minimal graph as JSON lines");
  sample->add_option("--m", opt.m_path, "Minimal graph JSON")->required()->check(CLI::ExistingFile);
  sample->add_option("--n", opt.n, "Vertex count (defaults to |V(m)|)");
  sample->add_option("--graphs", opt.graphs)->default_val(1);
  sample->add_option("--out", opt.out, "JSON-lines output");
  with_seed(sample);
  with_model(sample);

  auto* probe = with_input(app.add_subcommand("probe-og", "Count minimal synchronizing factors"), "Graph JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUserError;
  }

  try {
    if (*analyze) return cmd_analyze(opt);
    if (*minimize) return cmd_minimize(opt);
    if (*bunchy) return cmd_bunchy(opt);
    if (*stability) return cmd_stability(opt);
    if (*sync_prob) return cmd_sync_prob(opt);
    if (*table) return cmd_table(opt);
    if (*histogram) return cmd_histogram(opt);
    if (*search) return cmd_search_biresolver(opt);
    if (*synthesize) return cmd_synthesize(opt);
    if (*sample) return cmd_sample(opt);
    if (*probe) return cmd_probe_og(opt);
  } catch (const TheoremViolation& e) {
    std::cerr << "theorem violation: " << e.what() << "\n";
    return kTheoremViolation;
  } catch (const ConjectureFailure& e) {
    std::cerr << "conjecture-relevant failure: " << e.what() << "\n" << "instance: " << e.instance() << "\n";
    return kConjectureFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  }
  return kUserError;
}
