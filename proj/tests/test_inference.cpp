#include <doctest.h>

#include <cmath>

#include "fcm/fixtures.hpp"
#include "fcm/inference.hpp"
#include "support.hpp"

using namespace fcm;
using fcm::test::id;
using fcm::test::make_model;

namespace {

// tanh(1) = (e^2 - 1) / (e^2 + 1) with e^2 summed from its power series.
long double tanh_one_series() {
    long double e2 = 0.0L, term = 1.0L;
    for (int n = 0; n < 60; ++n) {
        e2 += term;
        term *= 2.0L / (n + 1);
    }
    return (e2 - 1.0L) / (e2 + 1.0L);
}

InferenceConfig kosko_tanh() {
    InferenceConfig c;
    c.kernel = KernelKind::Kosko;
    c.squash = {SquashKind::HyperbolicTangent, 1.0};
    return c;
}

}  // namespace

TEST_CASE("squash values") {
    CHECK(squash(0.0, {SquashKind::HyperbolicTangent, 1.0}) == 0.0);
    CHECK(squash(0.0, {SquashKind::Logistic, 1.0}) == 0.0);
    CHECK(squash(1.0, {SquashKind::HyperbolicTangent, 1.0}) ==
          doctest::Approx(static_cast<double>(tanh_one_series())).epsilon(1e-15));
    CHECK(static_cast<double>(tanh_one_series()) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
    CHECK(squash(2.5, {SquashKind::LinearClip, 7.0}) == 1.0);
    CHECK(squash(-0.3, {SquashKind::LinearClip, 7.0}) == -0.3);
    // logistic: 2 / (1 + e^-x) - 1 at x = 1
    CHECK(squash(1.0, {SquashKind::Logistic, 1.0}) == doctest::Approx(2.0 / (1.0 + std::exp(-1.0)) - 1.0));
    CHECK(squash(-1000.0, {SquashKind::Logistic, 5.0}) == -1.0);
    CHECK(squash(1000.0, {SquashKind::Logistic, 5.0}) == 1.0);
}

TEST_CASE("kind names round-trip") {
    for (auto k : {KernelKind::Kosko, KernelKind::ModifiedKosko, KernelKind::Rescaled})
        CHECK(parse_kernel_kind(to_string(k)) == k);
    for (auto s : {SquashKind::Logistic, SquashKind::HyperbolicTangent, SquashKind::LinearClip})
        CHECK(parse_squash_kind(to_string(s)) == s);
    CHECK_FALSE(parse_kernel_kind("sigmoid").has_value());
    CHECK(to_string(RunStatus::LimitCycle) == "limit-cycle");
}

TEST_CASE("config validation") {
    InferenceConfig c;
    CHECK_NOTHROW(validate_config(c));
    c.tolerance = 0.0;
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c = {};
    c.max_iterations = 0;
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c = {};
    c.squash.steepness = -1.0;
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c = {};
    c.initial_activation = 1.5;
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
}

TEST_CASE("default config") {
    InferenceConfig c;
    CHECK(c.tolerance == 1e-5);
    CHECK(c.max_iterations == 1000);
    CHECK(c.cycle_detection_window == 50);
    CHECK(std::holds_alternative<NeutralActivation>(c.initial_activation));
}

TEST_CASE("step on zero-weight-only model gives squash(0)") {
    auto m = make_model({"A", "B", "C"}, {{"A", "B", 0.0}, {"B", "C", 0.0}, {"C", "A", 0.0}});
    auto c = kosko_tanh();
    StateVector s{m.ids(), {0.3, -0.9, 1.0}};
    auto next = step(m, s, c);
    for (double v : next.values) CHECK(v == 0.0);
}

TEST_CASE("step on a two-concept chain") {
    auto m = make_model({"A", "B"}, {{"A", "B", 1.0}});
    auto next = step(m, {m.ids(), {1.0, 0.0}}, kosko_tanh());
    CHECK(next.at(id("A")) == 0.0);
    CHECK(next.at(id("B")) == doctest::Approx(static_cast<double>(tanh_one_series())).epsilon(1e-15));
}

TEST_CASE("clamped concept keeps its value regardless of incoming edges") {
    auto m = make_model({"A", "B"}, {{"B", "A", 1.0}});
    auto next = step(m, {m.ids(), {0.0, 1.0}}, kosko_tanh(), {{id("A"), 0.75}});
    CHECK(next.at(id("A")) == 0.75);
}

TEST_CASE("clamp errors") {
    auto m = make_model({"A", "B"}, {{"A", "B", 1.0}});
    StateVector s{m.ids(), {0.0, 0.0}};
    try {
        step(m, s, kosko_tanh(), {{id("X9"), 0.1}});
        FAIL("expected InferenceError");
    } catch (const InferenceError& e) {
        CHECK(e.kind() == InferenceError::Kind::UnknownClampId);
        CHECK(e.id() == id("X9"));
    }
    try {
        run_to_steady_state(m, kosko_tanh(), {{id("A"), 1.01}});
        FAIL("expected InferenceError");
    } catch (const InferenceError& e) {
        CHECK(e.kind() == InferenceError::Kind::ClampOutOfRange);
    }
    CHECK_THROWS_AS(step(m, {{id("B"), id("A")}, {0.0, 0.0}}, kosko_tanh()), InferenceError);
}

TEST_CASE("zero-edge model converges quickly to zeros") {
    auto m = make_model({"A", "B", "C"}, {});
    auto r = run_to_steady_state(m, kosko_tanh());
    CHECK(r.status == RunStatus::Converged);
    CHECK(r.iterations <= 2);
    for (double v : r.final_state.values) CHECK(v == 0.0);
}

TEST_CASE("rotation is detected as a period-4 limit cycle") {
    auto m = make_model({"A", "B"}, {{"A", "B", 1.0}, {"B", "A", -1.0}});
    InferenceConfig c;
    c.kernel = KernelKind::Kosko;
    c.squash = {SquashKind::LinearClip, 1.0};
    c.record_trajectory = true;
    auto r = run_to_steady_state(m, c, {}, {m.ids(), {1.0, 0.0}});
    CHECK(r.status == RunStatus::LimitCycle);
    CHECK(r.period == 4);
    REQUIRE(r.trajectory.has_value());
    const std::vector<std::vector<double>> expected = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}};
    REQUIRE(r.trajectory->size() == expected.size());
    for (std::size_t t = 0; t < expected.size(); ++t) CHECK((*r.trajectory)[t].values == expected[t]);
}

TEST_CASE("short cycle window falls back to max-iterations") {
    auto m = make_model({"A", "B"}, {{"A", "B", 1.0}, {"B", "A", -1.0}});
    InferenceConfig c;
    c.kernel = KernelKind::Kosko;
    c.squash = {SquashKind::LinearClip, 1.0};
    c.cycle_detection_window = 2;
    c.max_iterations = 25;
    auto r = run_to_steady_state(m, c, {}, {m.ids(), {1.0, 0.0}});
    CHECK(r.status == RunStatus::MaxIterationsReached);
    CHECK(r.iterations == 25);
}

TEST_CASE("convergence means the last step moved less than the tolerance") {
    auto m = fixtures::model(2);
    InferenceConfig c;
    c.record_trajectory = true;
    auto r = run_to_steady_state(m, c, fixtures::scenario(2).clamps);
    REQUIRE(r.converged());
    const auto& t = *r.trajectory;
    REQUIRE(t.size() >= 2);
    double d = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) d = std::max(d, std::abs(t.back().values[i] - t[t.size() - 2].values[i]));
    CHECK(d < c.tolerance);
    CHECK(t.back() == r.final_state);
}

TEST_CASE("clamps are imposed on the initial state") {
    auto m = make_model({"A", "B"}, {{"A", "B", 0.5}});
    auto s = initial_state(m, InferenceConfig{}, {{id("A"), -0.5}});
    CHECK(s.at(id("A")) == -0.5);
    CHECK(s.at(id("B")) == 0.0);
    InferenceConfig fixed;
    fixed.initial_activation = 0.25;
    CHECK(initial_state(m, fixed).values == std::vector{0.25, 0.25});
}

TEST_CASE("neutral start under each squash") {
    CHECK(neutral_activation({SquashKind::Logistic, 2.0}) == 0.0);
    CHECK(neutral_activation({SquashKind::HyperbolicTangent, 2.0}) == 0.0);
    CHECK(neutral_activation({SquashKind::LinearClip, 2.0}) == 0.0);
}

TEST_CASE("empty clamp scenario has zero change") {
    auto o = run_scenario(fixtures::model(1), "null", {}, InferenceConfig{});
    CHECK(o.scenario_name == "null");
    for (double v : o.relative_change) CHECK(v == 0.0);
}

TEST_CASE("scenario outcome is the clamped minus baseline difference") {
    auto m = fixtures::model(1);
    auto o = run_scenario(m, fixtures::scenario(1), InferenceConfig{});
    REQUIRE(o.ids == m.ids());
    for (std::size_t i = 0; i < m.size(); ++i)
        CHECK(o.relative_change[i] == o.clamped.final_state.values[i] - o.baseline.final_state.values[i]);
    CHECK_THROWS_AS(o.change(id("Q")), std::out_of_range);
}

TEST_CASE("fixture scenarios converge under the default config") {
    for (int k = 1; k <= 3; ++k) {
        auto o = run_scenario(fixtures::model(k), fixtures::scenario(k), InferenceConfig{});
        CHECK(o.converged());
    }
}

TEST_CASE("scenario sign examples under the default config") {
    auto o1 = run_scenario(fixtures::model(1), fixtures::scenario(1), InferenceConfig{});
    CHECK(o1.change(id("I5")) < 0);
    auto o3 = run_scenario(fixtures::model(3), fixtures::scenario(3), InferenceConfig{});
    CHECK(o3.change(id("I5")) > 0);
    CHECK(o3.change(id("S8")) < 0);
}

TEST_CASE("I3 rises in scenario 1 under the lowest-deviation config") {
    // Under the default config I3 sits saturated near -1 in both runs, so its change is 0.
    auto o = run_scenario(fixtures::model(1), fixtures::scenario(1), kosko_tanh());
    CHECK(o.change(id("I5")) < 0);
    CHECK(o.change(id("I3")) > 0);
    auto d = run_scenario(fixtures::model(1), fixtures::scenario(1), InferenceConfig{});
    CHECK(std::abs(d.change(id("I3"))) < 0.005);
}
