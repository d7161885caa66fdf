#pragma once

// Scenario definitions and multi-scenario comparison.
//
// A scenario pairs a model (its weights) with a clamp set. Comparisons are
// only meaningful across structurally identical models, which is checked,
// not assumed.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcm/inference.hpp"
#include "fcm/metrics.hpp"
#include "fcm/model.hpp"

namespace fcm {

struct ScenarioSpec {
    std::string name;
    std::string model_ref;
    Clamps clamps;  // absent concepts are unclamped
    std::optional<InferenceConfig> config_override;

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

ScenarioOutcome run_scenario(const FcmModel& model, const ScenarioSpec& scenario,
                             const InferenceConfig& config);

struct StructuralIdentity {
    bool identical = true;
    // Entries differ from the first model. Each pair is (model index, item).
    std::vector<std::pair<std::size_t, ConceptId>> concepts_missing;  // in first, not in model k
    std::vector<std::pair<std::size_t, ConceptId>> concepts_extra;    // in model k, not in first
    bool order_differs = false;
    std::vector<std::pair<std::size_t, std::pair<ConceptId, ConceptId>>> edges_missing;
    std::vector<std::pair<std::size_t, std::pair<ConceptId, ConceptId>>> edges_extra;
};

/// Requires at least two models; throws std::invalid_argument otherwise.
StructuralIdentity check_structural_equivalence(const std::vector<const FcmModel*>& models);
StructuralIdentity check_structural_equivalence(const std::vector<FcmModel>& models);

using ModelRegistry = std::map<std::string, FcmModel>;

struct ComparisonRow {
    ConceptId id;
    std::vector<std::optional<double>> changes;  // one per scenario, input order
};

struct ComparisonReport {
    std::vector<std::string> scenarios;
    StructuralIdentity structural_identity;
    std::map<std::string, ScenarioOutcome> outcomes;
    std::map<std::string, std::vector<std::pair<ConceptId, double>>> centrality_rankings;
    std::vector<ComparisonRow> per_concept_table;
    std::vector<std::string> non_converged;  // scenario names, input order
};

class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs every scenario against its referenced model. Scenario runs fan out
/// concurrently; the report is assembled in input order.
ComparisonReport compare_scenarios(const std::vector<ScenarioSpec>& scenarios,
                                   const ModelRegistry& models, const InferenceConfig& config,
                                   std::size_t ranking_depth = 5);

enum class ReportFormat { PlainTable, Delimited, Structured };
std::optional<ReportFormat> parse_report_format(std::string_view text);

std::string render_report(const ComparisonReport& report, ReportFormat format);

}  // namespace fcm
