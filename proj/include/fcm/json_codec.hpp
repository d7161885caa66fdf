#pragma once

// JSON encodings shared by documents, reports, the CLI's structured output
// and the HTTP service. Decoders throw io::SchemaError with a JSON pointer.

#include <string>

#include <nlohmann/json.hpp>

#include "fcm/inference.hpp"
#include "fcm/metrics.hpp"
#include "fcm/model.hpp"
#include "fcm/scenario.hpp"

namespace fcm::json {

using json = nlohmann::ordered_json;

json encode(const FcmModel& model);
json encode(const InferenceConfig& config);
json encode(const ScenarioSpec& scenario);
json encode(const StateVector& state);
json encode(const SteadyStateResult& result);
json encode(const ScenarioOutcome& outcome);
json encode(const MetricsReport& report);
json encode(const Violation& violation);
json encode(const StructuralIdentity& identity);
json encode(const ComparisonReport& report);
json encode_clamps(const Clamps& clamps);

/// Decoded but unvalidated model contents.
struct ModelParts {
    std::string name;
    std::vector<Concept> concepts;
    std::vector<Edge> edges;
};

ModelParts decode_model_parts(const json& j, const std::string& path = "");
FcmModel decode_model(const json& j, const std::string& path = "");
InferenceConfig decode_config(const json& j, const std::string& path = "");
ScenarioSpec decode_scenario(const json& j, const std::string& path = "");
Clamps decode_clamps(const json& j, const std::string& path = "");
StateVector decode_state(const json& j, const std::string& path = "");
SteadyStateResult decode_steady_state(const json& j, const std::string& path = "");
ScenarioOutcome decode_outcome(const json& j, const std::string& path = "");
StructuralIdentity decode_identity(const json& j, const std::string& path = "");
ComparisonReport decode_report(const json& j, const std::string& path = "");

}  // namespace fcm::json
