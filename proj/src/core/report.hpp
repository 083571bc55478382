#pragma once

#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/metrics.hpp"
#include "core/selection.hpp"
#include "core/simulation.hpp"

namespace divkit {

// JSON/CSV renderings of result structs. Scores that are -inf serialize as
// the string "-inf" since JSON has no infinity literal.
std::string metric_report_json(const MetricReport& report);
std::string selection_result_json(const SelectionResult& result);
std::string simulation_csv(const SimulationResult& result);
std::string simulation_summary_json(const SimulationSummary& summary);
std::string correlation_csv(const CorrelationReport& report);
std::string correlation_json(const CorrelationReport& report);

} // namespace divkit
