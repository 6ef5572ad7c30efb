#pragma once

// JSON reports and CSV tables for every result type. Reports carry the tool
// version and an echo of the configuration that produced them.

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rulepick/abc.hpp"
#include "rulepick/axioms.hpp"
#include "rulepick/optimize.hpp"
#include "rulepick/perfpos.hpp"

namespace rulepick {

inline constexpr std::string_view kVersion = "1.0.0";

/// Ordered (key, value) pairs copied into the report's "config" object.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

std::string report_json(const DisagreementReport& report, const ConfigEcho& config = {});
std::string report_json(const PickResult& pick, std::span<const Rule> candidates, const ConfigEcho& config = {});
std::string report_json(const AxiomOutcome& outcome, const ConfigEcho& config = {});
std::string report_json(const AnnealResult& result, const ConfigEcho& config = {});
std::string report_json(const AggregatorPick& pick, const ConfigEcho& config = {});
std::string report_json(const PerfPosAnswer& answer, const ConfigEcho& config = {});

/// Inverse of report_json for disagreement and pick reports (the "report"
/// object of a pick report). Throws ErrorKind::input on malformed text.
DisagreementReport parse_disagreement_report(std::string_view json);
PickResult parse_pick_report(std::string_view json);
AxiomOutcome parse_axiom_report(std::string_view json);

/// rule,mean,sem,splits
std::string estimates_csv(const DisagreementReport& report);
/// rule,split,value: one row per split so mean and SEM can be recomputed.
std::string split_values_csv(const DisagreementReport& report);
/// start,step,delta,accepted,best
std::string anneal_trace_csv(const AnnealResult& result);
/// axiom,source,m,n,instances,violations,rate
std::string axiom_csv(std::span<const AxiomOutcome> outcomes);
/// aggregator,mean,sem,trials
std::string aggregator_csv(const AggregatorPick& pick);

/// Shortest text that reads back as the same double; "nan" for NaN.
std::string format_double(double x);

}  // namespace rulepick
