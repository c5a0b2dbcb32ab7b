#pragma once

#include <json.hpp>
#include <string>

#include "core/experiments.hpp"

namespace garchm {

using Json = nlohmann::json;

Json order_json(GarchOrder order);
Json score_json(const ScoreFunction& score);
Json dist_json(const ErrorDistribution& dist);
Json theta_json(const ParameterVector& theta);

GarchOrder order_from_json(const Json& j);
ScoreFunction score_from_json(const Json& j);
ErrorDistribution dist_from_json(const Json& j);
ParameterVector theta_from_json(const Json& j, GarchOrder order);

// Wire format for the experiment-runner entry points; the CLI builds this
// from its flags and presets.
ExperimentSpec experiment_spec_from_json(const Json& j);
Json experiment_spec_json(const ExperimentSpec& spec);

Json bias_mse_report_json(const ExperimentSpec& spec, const BiasMseReport& report);
Json coverage_report_json(const ExperimentSpec& spec, double level,
                          const CoverageReport& report);
Json misspec_report_json(const ExperimentSpec& spec, const MisspecReport& report);
Json ch_table_json(const ChTable& table);

}  // namespace garchm
