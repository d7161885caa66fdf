#pragma once

// The three bundled digital-transformation scenarios: a traditional
// growth-oriented map, a COVID-19 map and an innovative/sustainable
// COVID-19 map. All three share one 23-concept, 41-edge skeleton and
// differ only in weights and clamp vectors.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcm/io.hpp"
#include "fcm/model.hpp"
#include "fcm/scenario.hpp"

namespace fcm::fixtures {

inline constexpr int kScenarioCount = 3;

/// Well-known ids: "paper-scenario-1" .. "paper-scenario-3".
std::string fixture_id(int scenario);
/// 1-based scenario number for a fixture id.
std::optional<int> scenario_from_id(std::string_view id);
std::vector<std::string> fixture_ids();

/// Raw delimited matrix text, as shipped in data/fixtures/scenarioN.csv.
std::string_view matrix_text(int scenario);

/// Concept list in canonical order (P1..P6, R1, R2, E1, E2, S1..S8, I1..I5).
const std::vector<Concept>& concepts();

FcmModel model(int scenario);
ScenarioSpec scenario(int scenario);
io::ModelDocument document(int scenario);

std::vector<ScenarioSpec> all_scenarios();
ModelRegistry registry();

/// One row of the published relative-change results.
struct ReferenceRow {
    ConceptId id;
    std::array<double, 3> published;  // as printed
    std::array<double, 3> corrected;  // narrative signs applied to the suspected typos
};

/// The 17 concept rows (51 numeric cells) of the published results.
const std::vector<ReferenceRow>& reference_changes();

}  // namespace fcm::fixtures
