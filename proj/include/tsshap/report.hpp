#pragma once

#include <string>

#include "json.hpp"
#include "tsshap/config.hpp"

namespace tsshap {

/// End-to-end run: ingest, backtest, fit the surrogate, compute fidelity,
/// explanations, curves and (optionally) robustness metrics; write
/// report.json plus one SVG per requested plot into config.output_dir.
/// Returns the report document.
nlohmann::json run(const RunConfig& config);

/// The `explain` subcommand: same pipeline, but returns only the requested
/// scope's explanation block (no files are written).
nlohmann::json explain_only(const RunConfig& config, const std::string& scope, int step,
                            int interval_begin, int interval_end);

nlohmann::json explanation_to_json(const Explanation& e);
nlohmann::json curves_to_json(const CurveSet& c);
nlohmann::json metric_report_to_json(const MetricReport& r);

}  // namespace tsshap
