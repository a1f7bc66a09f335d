#pragma once

// JSON forms of analysis results.
//   stability: {"partition": [...], "synchronizing": b,
//               "witness_words": [{"pair": [a,b], "word": [c,...]}, ...]}
//   trace:     {"route": "...", "heuristic": b, "heuristic_trials": k,
//               "steps": [{"graph", "resolver", "classes", "quotient"}, ...],
//               "final": <resolver>}

#include "bunchy/constructors.hpp"
#include "bunchy/io.hpp"
#include "bunchy/stability.hpp"

namespace bunchy {

Json stability_report_to_json(const StabilityReport& report);
Json synthesis_trace_to_json(const SynthesisTrace& trace);

}  // namespace bunchy
