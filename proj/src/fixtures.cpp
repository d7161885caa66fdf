#include "fcm/fixtures.hpp"

#include <stdexcept>

namespace fcm::fixtures {

namespace {

constexpr std::string_view kMatrix1 = R"csv(concept,P1,P2,P3,P4,P5,P6,R1,R2,E1,E2,S1,S2,S3,S4,S5,S6,S7,S8,I1,I2,I3,I4,I5
P1,,0,0.5,0.5,0,0.5,,,,,,,,,,,,,,,,,
P2,,,,,,,,0.5,,,,,,,,,,,,,,,
P3,,,,,,,,,,,,,,,,0.5,0.5,,,,,,
P4,,,,,,,,0.5,,0,,,,,,,,0,,,,,
P5,,,,,,,,,,,,,,,,,,,,,,,0
P6,,,,,,,,,,,,,0.5,,,,,,,,,,
R1,,,,,,,,0.5,,,,,,,,,,,,,,,
R2,,,,,,,,,,0.5,,,,,,,,,,,,0.5,-0.5
E1,,-0.5,0.5,,,0.5,,,,0.5,,,,,,,,,,,,,
E2,,,,,,,,0.5,,,,,,,,,,,,0.5,,0.5,-0.5
S1,,,,,,,,,,,,,0.5,,,,,0.5,,,,,
S2,,,,,,,,,,,,,,0.5,,,,0.5,,,,,
S3,,,,,,,,,,,,,,0.5,,0.5,,,,,,,
S4,,,,,,,,,,,,,,,,,,,,,0.5,,
S5,,,,,,,,,,,,,,,,,,,,,0.5,,
S6,,,,,,,,,,,,,,,,,,,,,0.5,,
S7,,,,,,,,,,,,,,,,,,,,,0.5,,
S8,,,,,,,,,,,,,,,,,,,0.5,,,,
I1,,,,,,,,,,,,,,,,,,,,,,,
I2,,,,,,,,,,,,,,,,,,,,,,,-0.5
I3,,,,,,,,,,,,,,,,,,,,,,0.5,-0.5
I4,,,,,,,,,,,,,,,,,,,0.5,,,,
I5,,,,,,,,,,,,,,,,,,,-0.5,,,,
)csv";

constexpr std::string_view kMatrix2 = R"csv(concept,P1,P2,P3,P4,P5,P6,R1,R2,E1,E2,S1,S2,S3,S4,S5,S6,S7,S8,I1,I2,I3,I4,I5
P1,,0,0.75,0.75,0,0.75,,,,,,,,,,,,,,,,,
P2,,,,,,,,0.5,,,,,,,,,,,,,,,
P3,,,,,,,,,,,,,,,,0.5,0.5,,,,,,
P4,,,,,,,,0.75,,0.75,,,,,,,,0,,,,,
P5,,,,,,,,,,,,,,,,,,,,,,,0
P6,,,,,,,,,,,,,0.75,,,,,,,,,,
R1,,,,,,,,0.75,,,,,,,,,,,,,,,
R2,,,,,,,,,,0.5,,,,,,,,,,,,0.5,-0.5
E1,,-0.5,0.5,,,0.75,,,,0.5,,,,,,,,,,,,,
E2,,,,,,,,0.75,,,,,,,,,,,,0.5,,0.5,-0.5
S1,,,,,,,,,,,,,0.75,,,,,0.75,,,,,
S2,,,,,,,,,,,,,,0.75,,,,0.5,,,,,
S3,,,,,,,,,,,,,,0.75,,0.75,,,,,,,
S4,,,,,,,,,,,,,,,,,,,,,0.5,,
S5,,,,,,,,,,,,,,,,,,,,,0.5,,
S6,,,,,,,,,,,,,,,,,,,,,0.5,,
S7,,,,,,,,,,,,,,,,,,,,,0.5,,
S8,,,,,,,,,,,,,,,,,,,0.5,,,,
I1,,,,,,,,,,,,,,,,,,,,,,,
I2,,,,,,,,,,,,,,,,,,,,,,,-0.5
I3,,,,,,,,,,,,,,,,,,,,,,0.5,-0.5
I4,,,,,,,,,,,,,,,,,,,0.5,,,,
I5,,,,,,,,,,,,,,,,,,,-0.5,,,,
)csv";

constexpr std::string_view kMatrix3 = R"csv(concept,P1,P2,P3,P4,P5,P6,R1,R2,E1,E2,S1,S2,S3,S4,S5,S6,S7,S8,I1,I2,I3,I4,I5
P1,,0.5,0.5,0.75,0.5,0.75,,,,,,,,,,,,,,,,,
P2,,,,,,,,0.5,,,,,,,,,,,,,,,
P3,,,,,,,,,,,,,,,,0.5,0.5,,,,,,
P4,,,,,,,,0.75,,0.75,,,,,,,,-0.5,,,,,
P5,,,,,,,,,,,,,,,,,,,,,,,0.5
P6,,,,,,,,,,,,,0.75,,,,,,,,,,
R1,,,,,,,,0.75,,,,,,,,,,,,,,,
R2,,,,,,,,,,0.5,,,,,,,,,,,,-0.5,0.75
E1,,0.5,0.5,,,0.75,,,,0.5,,,,,,,,,,,,,
E2,,,,,,,,0.75,,,,,,,,,,,,-0.5,,-0.5,0.75
S1,,,,,,,,,,,,,0.75,,,,,-0.5,,,,,
S2,,,,,,,,,,,,,,0.75,,,,0.5,,,,,
S3,,,,,,,,,,,,,,0.75,,0.75,,,,,,,
S4,,,,,,,,,,,,,,,,,,,,,0.5,,
S5,,,,,,,,,,,,,,,,,,,,,0.5,,
S6,,,,,,,,,,,,,,,,,,,,,0.5,,
S7,,,,,,,,,,,,,,,,,,,,,0.5,,
S8,,,,,,,,,,,,,,,,,,,0.5,,,,
I1,,,,,,,,,,,,,,,,,,,,,,,
I2,,,,,,,,,,,,,,,,,,,,,,,-0.5
I3,,,,,,,,,,,,,,,,,,,,,,-0.5,0.5
I4,,,,,,,,,,,,,,,,,,,0.5,,,,
I5,,,,,,,,,,,,,,,,,,,-0.5,,,,
)csv";

void check(int scenario) {
    if (scenario < 1 || scenario > kScenarioCount)
        throw std::out_of_range("fixture scenario must be 1.." + std::to_string(kScenarioCount));
}

const char* const kScenarioNames[] = {
    "1-traditional-growth",
    "2-covid-19",
    "3-sustainable-covid-19",
};

}  // namespace

std::string fixture_id(int scenario) {
    check(scenario);
    return "paper-scenario-" + std::to_string(scenario);
}

std::optional<int> scenario_from_id(std::string_view id) {
    for (int k = 1; k <= kScenarioCount; ++k) {
        if (id == fixture_id(k)) return k;
    }
    return std::nullopt;
}

std::vector<std::string> fixture_ids() {
    std::vector<std::string> out;
    for (int k = 1; k <= kScenarioCount; ++k) out.push_back(fixture_id(k));
    return out;
}

std::string_view matrix_text(int scenario) {
    check(scenario);
    switch (scenario) {
    case 1: return kMatrix1;
    case 2: return kMatrix2;
    default: return kMatrix3;
    }
}

const std::vector<Concept>& concepts() {
    using G = ConceptGroup;
    static const std::vector<Concept> list = {
        {ConceptId("P1"), "Political Thought Style", G::Politics, "Common sense or style of reasoning"},
        {ConceptId("P2"), "Climate Protection", G::Politics, "Political actions for climate protection"},
        {ConceptId("P3"), "Infrastructure Investment", G::Politics, "Political actions for infrastructure investment"},
        {ConceptId("P4"), "Financing and Coordination (Governance)", G::Politics,
         "Political actions regarding subsidies and governmental support"},
        {ConceptId("P5"), "Prevention of Data Monopolies (Data Ethics)", G::Politics,
         "Political actions regarding data ethics"},
        {ConceptId("P6"), "Education", G::Politics, "Political actions for educational support"},
        {ConceptId("R1"), "Research Paradigm", G::ResearchAndDevelopment, "Common sense or style of reasoning"},
        {ConceptId("R2"), "Research and Development", G::ResearchAndDevelopment, "Research actions"},
        {ConceptId("E1"), "Business and Corporate Culture", G::Economy, "Common sense or style of reasoning"},
        {ConceptId("E2"), "Product and Process Quality", G::Economy,
         "Economical actions regarding product and process quality"},
        {ConceptId("S1"), "Public Thought Style", G::CivilSociety, "Common sense or style of reasoning"},
        {ConceptId("S2"), "Population", G::CivilSociety, "Total amount of population"},
        {ConceptId("S3"), "Digital Literacy", G::CivilSociety, "Amount of digitally educated people"},
        {ConceptId("S4"), "Digital Usage", G::CivilSociety, "Average daily usage time of digital media"},
        {ConceptId("S5"), "Affordability", G::CivilSociety, "Average price of digital technology"},
        {ConceptId("S6"), "Network Access", G::CivilSociety, "Amount of people having digital network access"},
        {ConceptId("S7"), "Capacity", G::CivilSociety, "Average available bandwidth per inhabitant"},
        {ConceptId("S8"), "Mobility", G::CivilSociety, "Average daily usage time of means of transport"},
        {ConceptId("I1"), "Primary Energy Consumption", G::Indicator, "Primary energy demand (Qp)"},
        {ConceptId("I2"), "Degree of Automation", G::Indicator, "Percentage of digital process automation"},
        {ConceptId("I3"), "Digitization Speed", G::Indicator,
         "Composite factor of population, digital literacy, digital usage, affordability, capacity and network access"},
        {ConceptId("I4"), "Total amount of digital processes and technologies", G::Indicator,
         "Total amount of digital processes and technologies"},
        {ConceptId("I5"), "Sustainable digital processes and technologies", G::Indicator,
         "Percentage of sustainable processes and technologies"},
    };
    return list;
}

FcmModel model(int scenario) {
    const auto grid = io::parse_matrix_delimited(matrix_text(scenario));
    // The grid only carries ids; names, groups and descriptions come from the concept list.
    return build_model(fixture_id(scenario), concepts(), grid.edges());
}

ScenarioSpec scenario(int scenario) {
    check(scenario);
    // Blank cells of the clamp table are unclamped; "+-0.00" cells clamp at zero.
    struct Row {
        const char* id;
        double v[3];
    };
    static const Row rows[] = {
        {"P2", {0.0, 0.0, 0.5}},   {"P3", {0.5, 0.75, 0.5}},  {"P4", {0.5, 0.75, 0.75}},
        {"P5", {0.0, 0.0, 0.5}},   {"P6", {0.5, 0.75, 0.75}}, {"R2", {0.5, 0.75, 0.75}},
        {"E2", {0.5, 0.75, 0.75}}, {"S3", {0.5, 0.75, 0.75}}, {"S4", {0.5, 0.75, 0.75}},
        {"S8", {0.5, 0.75, -0.5}},
    };
    ScenarioSpec s;
    s.name = kScenarioNames[scenario - 1];
    s.model_ref = fixture_id(scenario);
    for (const auto& r : rows) s.clamps[ConceptId(r.id)] = r.v[scenario - 1];
    return s;
}

io::ModelDocument document(int scenario) {
    io::ModelDocument doc;
    doc.model = model(scenario);
    doc.scenarios.push_back(fixtures::scenario(scenario));
    return doc;
}

std::vector<ScenarioSpec> all_scenarios() {
    std::vector<ScenarioSpec> out;
    for (int k = 1; k <= kScenarioCount; ++k) out.push_back(scenario(k));
    return out;
}

ModelRegistry registry() {
    ModelRegistry out;
    for (int k = 1; k <= kScenarioCount; ++k) out.emplace(fixture_id(k), model(k));
    return out;
}

const std::vector<ReferenceRow>& reference_changes() {
    // Scenario-3 rows I1, I2 and I4 are printed positive while the accompanying
    // description (and the scenario-3 edge signs) make them decreases.
    static const std::vector<ReferenceRow> rows = [] {
        struct Raw {
            const char* id;
            std::array<double, 3> v;
            bool typo3;
        };
        const Raw raw[] = {
            {"P2", {-0.24, -0.24, 0.46}, false}, {"P3", {0.46, 0.55, 0.46}, false},
            {"P4", {0.24, 0.36, 0.36}, false},   {"P5", {0.00, 0.00, 0.24}, false},
            {"P6", {0.46, 0.64, 0.64}, false},   {"R2", {0.44, 0.79, 0.89}, false},
            {"E2", {0.44, 0.72, 0.75}, false},   {"S3", {0.45, 0.69, 0.69}, false},
            {"S4", {0.44, 0.71, 0.71}, false},   {"S6", {0.43, 0.66, 0.64}, false},
            {"S7", {0.23, 0.27, 0.23}, false},   {"S8", {0.46, 0.46, -0.18}, false},
            {"I1", {0.72, 0.79, 0.76}, true},    {"I2", {0.22, 0.35, 0.36}, true},
            {"I3", {0.66, 0.79, 0.78}, false},   {"I4", {0.65, 0.82, 0.84}, true},
            {"I5", {-0.70, -0.87, 0.94}, false},
        };
        std::vector<ReferenceRow> out;
        for (const auto& r : raw) {
            ReferenceRow row{ConceptId(r.id), r.v, r.v};
            if (r.typo3) row.corrected[2] = -row.corrected[2];
            out.push_back(row);
        }
        return out;
    }();
    return rows;
}

}  // namespace fcm::fixtures
