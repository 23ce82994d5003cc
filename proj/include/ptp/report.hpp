#ifndef PTP_REPORT_HPP
#define PTP_REPORT_HPP

#include "ptp/metrics.hpp"
#include "ptp/scenario.hpp"

#include <filesystem>

namespace ptp {

struct ExpectationResult
{
  Expectation expectation;
  double value = 0.0;
  bool pass = false;
  std::string label;
};

/**
 * Evaluates a scenario's "expect" lines against a report. Metrics:
 *   utilization from= to=             percent of capacity over the window
 *   throughput_kbps from= to=         Data throughput
 *   goodput_mbps consumer=            payload goodput
 *   fairness consumer= other=         consumer's share (percent) of the pair's goodput
 *   cut_fraction consumer=            summed cut throughput / max-flow bound
 *   goodput_cached_mbps consumer= router= from=
 *                                     goodput from 'from' until the router's last CS hit
 *   goodput_uncached_mbps consumer= router= delay= to=
 *                                     goodput from last CS hit + delay until 'to'
 *   illegal_transitions               phase changes outside the state machine
 * Optional t0= and t1= (seconds) replace the default measurement window.
 */
std::vector<ExpectationResult>
evaluateExpectations(const Scenario& scenario, const MetricsReport& report);

/// Human-readable summary, deterministic for a given report.
std::string
formatSummary(const Scenario& scenario, const MetricsReport& report,
              const std::vector<ExpectationResult>& results);

/// Writes report.txt, links.csv, flows.csv, paths.csv, transitions.csv, selections.csv and
/// routers.csv into \p dir (created if needed).
void
writeOutputs(const std::filesystem::path& dir, const Scenario& scenario,
             const MetricsReport& report, const std::vector<ExpectationResult>& results);

/// Built-in scenario names, sorted.
std::vector<std::string>
builtinScenarioNames();

/// Source text of a built-in scenario; nullopt if unknown.
std::optional<std::string_view>
builtinScenarioText(std::string_view name);

} // namespace ptp

#endif // PTP_REPORT_HPP
