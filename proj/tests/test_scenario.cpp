#include <doctest.h>

#include <sstream>

#include "fcm/fixtures.hpp"
#include "fcm/json_codec.hpp"
#include "fcm/scenario.hpp"
#include "support.hpp"

using namespace fcm;
using fcm::test::id;
using fcm::test::make_model;

namespace {

int sign(double x) { return std::abs(x) < 0.005 ? 0 : (x > 0 ? 1 : -1); }

ComparisonReport fixture_report() {
    return compare_scenarios(fixtures::all_scenarios(), fixtures::registry(), InferenceConfig{});
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("fixtures are structurally identical") {
    auto r = check_structural_equivalence(std::vector{fixtures::model(1), fixtures::model(2), fixtures::model(3)});
    CHECK(r.identical);
    CHECK_FALSE(r.order_differs);
    CHECK(r.edges_missing.empty());
    CHECK(r.edges_extra.empty());
}

TEST_CASE("a removed edge shows up in the diff") {
    auto m = fixtures::model(1);
    std::vector<Edge> edges;
    for (const auto& e : m.edges())
        if (!(e.source == id("P2") && e.target == id("R2"))) edges.push_back(e);
    REQUIRE(edges.size() + 1 == m.edges().size());
    auto cut = build_model("cut", m.concepts(), edges);
    auto r = check_structural_equivalence(std::vector{m, cut});
    CHECK_FALSE(r.identical);
    REQUIRE(r.edges_missing.size() == 1);
    CHECK(r.edges_missing[0].first == 1);
    CHECK(r.edges_missing[0].second == std::pair{id("P2"), id("R2")});
    CHECK(r.edges_extra.empty());
}

TEST_CASE("a model compared with itself is identical") {
    auto m = fixtures::model(2);
    CHECK(check_structural_equivalence(std::vector{m, m}).identical);
    CHECK_THROWS_AS(check_structural_equivalence(std::vector{m}), std::invalid_argument);
}

TEST_CASE("concept differences and order") {
    auto a = make_model({"A", "B", "C"}, {{"A", "B", 0.5}});
    auto b = make_model({"B", "A", "C"}, {{"A", "B", -0.5}});
    auto c = make_model({"A", "B", "D"}, {{"A", "B", 0.5}});
    auto r = check_structural_equivalence(std::vector{a, b});
    CHECK_FALSE(r.identical);
    CHECK(r.order_differs);
    auto r2 = check_structural_equivalence(std::vector{a, c});
    CHECK_FALSE(r2.identical);
    REQUIRE(r2.concepts_missing.size() == 1);
    CHECK(r2.concepts_missing[0].second == id("C"));
    REQUIRE(r2.concepts_extra.size() == 1);
    CHECK(r2.concepts_extra[0].second == id("D"));
}

TEST_CASE("fixture comparison sign rows") {
    auto r = fixture_report();
    REQUIRE(r.scenarios.size() == 3);
    CHECK(r.structural_identity.identical);
    CHECK(r.non_converged.empty());
    auto row = [&](const char* c) {
        auto it = std::find_if(r.per_concept_table.begin(), r.per_concept_table.end(),
                               [&](const ComparisonRow& x) { return x.id == id(c); });
        REQUIRE(it != r.per_concept_table.end());
        std::array<int, 3> s{};
        for (int k = 0; k < 3; ++k) s[k] = sign(it->changes[k].value());
        return s;
    };
    CHECK(row("I5") == std::array{-1, -1, 1});
    CHECK(row("S8") == std::array{1, 1, -1});
    CHECK(r.per_concept_table.size() == 23);
    for (const auto& x : r.per_concept_table)
        for (const auto& v : x.changes) CHECK(v.has_value());
}

TEST_CASE("single null scenario gives one all-zero column") {
    ScenarioSpec s{"null", "m", {}, std::nullopt};
    ModelRegistry reg{{"m", fixtures::model(1)}};
    auto r = compare_scenarios({s}, reg, InferenceConfig{});
    REQUIRE(r.per_concept_table.size() == 23);
    for (const auto& row : r.per_concept_table) {
        REQUIRE(row.changes.size() == 1);
        CHECK(*row.changes[0] == 0.0);
    }
}

TEST_CASE("resolution errors") {
    ModelRegistry reg{{"m", fixtures::model(1)}};
    CHECK_THROWS_AS(compare_scenarios({{"a", "missing", {}, std::nullopt}}, reg, InferenceConfig{}), ResolutionError);
    CHECK_THROWS_AS(compare_scenarios({{"a", "m", {}, std::nullopt}, {"a", "m", {}, std::nullopt}}, reg, InferenceConfig{}),
                    ResolutionError);
}

TEST_CASE("config override applies per scenario") {
    ModelRegistry reg{{"m", fixtures::model(1)}};
    InferenceConfig k;
    k.kernel = KernelKind::Kosko;
    k.squash = {SquashKind::HyperbolicTangent, 1.0};
    auto clamps = fixtures::scenario(1).clamps;
    auto r = compare_scenarios({{"default", "m", clamps, std::nullopt}, {"kosko", "m", clamps, k}}, reg, InferenceConfig{});
    const auto direct = run_scenario(fixtures::model(1), "kosko", clamps, k);
    CHECK(r.outcomes.at("kosko").relative_change == direct.relative_change);
    CHECK(r.outcomes.at("default").relative_change != direct.relative_change);
}

TEST_CASE("column order follows input order") {
    auto sc = fixtures::all_scenarios();
    std::reverse(sc.begin(), sc.end());
    auto r = compare_scenarios(sc, fixtures::registry(), InferenceConfig{});
    CHECK(r.scenarios == std::vector<std::string>{sc[0].name, sc[1].name, sc[2].name});
    auto fwd = fixture_report();
    for (std::size_t i = 0; i < 23; ++i) CHECK(r.per_concept_table[i].changes[0] == fwd.per_concept_table[i].changes[2]);
}

TEST_CASE("plain table shape") {
    auto text = render_report(fixture_report(), ReportFormat::PlainTable);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line.find("concept") == 0);
    CHECK(line.find("1-traditional-growth") != std::string::npos);
    int rows = 0;
    while (std::getline(in, line) && !line.empty()) ++rows;
    CHECK(rows == 23);
}

TEST_CASE("empty report renders header only") {
    ComparisonReport empty;
    CHECK(render_report(empty, ReportFormat::PlainTable) == "concept\n");
    CHECK(render_report(empty, ReportFormat::Delimited) == "concept\n");
}

TEST_CASE("delimited report round-trips at 4 decimals") {
    auto r = fixture_report();
    auto text = render_report(r, ReportFormat::Delimited);
    CHECK(count_lines(text) == 24);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    for (const auto& row : r.per_concept_table) {
        std::getline(in, line);
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        CHECK(cell == row.id.str());
        for (const auto& v : row.changes) {
            std::getline(cells, cell, ',');
            CHECK(std::abs(std::stod(cell) - *v) <= 0.00005 + 1e-12);
        }
    }
}

TEST_CASE("structured report parses back") {
    auto r = fixture_report();
    auto text = render_report(r, ReportFormat::Structured);
    auto j = json::json::parse(text);
    auto back = json::decode_report(j);
    CHECK(json::encode(back) == j);
    CHECK(back.scenarios == r.scenarios);
    CHECK(back.outcomes.at("2-covid-19").relative_change == r.outcomes.at("2-covid-19").relative_change);
}

TEST_CASE("rendering is pure") {
    auto r = fixture_report();
    for (auto f : {ReportFormat::PlainTable, ReportFormat::Delimited, ReportFormat::Structured})
        CHECK(render_report(r, f) == render_report(r, f));
    CHECK(render_report(r, ReportFormat::Structured) == render_report(fixture_report(), ReportFormat::Structured));
}

TEST_CASE("report format names") {
    CHECK(parse_report_format("plain-table") == ReportFormat::PlainTable);
    CHECK(parse_report_format("delimited") == ReportFormat::Delimited);
    CHECK(parse_report_format("structured") == ReportFormat::Structured);
    CHECK_FALSE(parse_report_format("xml").has_value());
}
