#include "bunchy/reports.hpp"

namespace bunchy {

Json stability_report_to_json(const StabilityReport& report) {
  Json words = Json::array();
  for (const PairWitness& w : report.stable_pairs) {
    words.push_back({{"pair", {w.first, w.second}}, {"word", w.word.edges}});
  }
  Json j;
  j["partition"] = partition_to_json(report.partition);
  j["synchronizing"] = report.synchronizing;
  j["witness_words"] = std::move(words);
  return j;
}

Json synthesis_trace_to_json(const SynthesisTrace& trace) {
  Json steps = Json::array();
  for (const SynthesisStep& s : trace.steps) {
    Json step;
    step["graph"] = graph_to_json(s.graph);
    step["resolver"] = resolver_to_json(s.resolver);
    step["classes"] = partition_to_json(s.classes);
    step["quotient"] = graph_to_json(s.quotient);
    steps.push_back(std::move(step));
  }
  Json j;
  j["route"] = to_string(trace.route);
  j["heuristic"] = trace.heuristic();
  j["heuristic_trials"] = trace.heuristic_trials;
  j["steps"] = std::move(steps);
  j["final"] = trace.final_resolver ? resolver_to_json(*trace.final_resolver) : Json();
  return j;
}

}  // namespace bunchy
