#include <doctest.h>

#include <filesystem>

#include <httplib.h>

#include "fcm/fixtures.hpp"
#include "fcm/io.hpp"
#include "fcm/service.hpp"

namespace fs = std::filesystem;
using fcm::json::json;
using fcm::service::Response;
using fcm::service::Service;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto d = fs::temp_directory_path() / ("fcm-service-test-" + name);
    fs::remove_all(d);
    return d;
}

Service make_service(const std::string& name) {
    fcm::service::Options o;
    o.storage_dir = fresh_dir(name);
    return Service(o);
}

std::string small_doc(double w = 0.5) {
    json d = {{"format_version", "1.0.0"},
              {"model",
               {{"name", "tiny"},
                {"concepts", json::array({{{"id", "A"}, {"name", "A"}}, {{"id", "B"}, {"name", "B"}}})},
                {"edges", json::array({{{"source", "A"}, {"target", "B"}, {"weight", w}}})}}},
              {"scenarios", json::array({{{"name", "push"}, {"clamps", {{"A", 0.75}}}}})}};
    return d.dump();
}

std::string clamps_body(int k) {
    json c = json::object();
    for (const auto& [id, v] : fcm::fixtures::scenario(k).clamps) c[id.str()] = v;
    return json{{"clamps", c}}.dump();
}

}  // namespace

TEST_CASE("health and fixtures") {
    auto s = make_service("fixtures");
    auto h = s.handle("GET", "/api/health", "");
    CHECK(h.status == 200);
    CHECK(h.body["max_iterations_cap"] == 10000);

    auto list = s.handle("GET", "/api/fixtures", "");
    CHECK(list.status == 200);
    REQUIRE(list.body.size() == 3);
    CHECK(list.body[0]["id"] == "paper-scenario-1");

    auto one = s.handle("GET", "/api/fixtures/paper-scenario-3", "");
    CHECK(one.status == 200);
    CHECK(fcm::io::read_document(one.body.dump()) == fcm::fixtures::document(3));
    CHECK(s.handle("GET", "/api/fixtures/paper-scenario-9", "").status == 404);
}

TEST_CASE("model CRUD") {
    auto s = make_service("crud");
    auto created = s.handle("POST", "/api/models", small_doc());
    REQUIRE(created.status == 201);
    const auto id = created.body["id"].get<std::string>();
    CHECK(fcm::service::ModelStore::valid_id(id));
    CHECK(created.body["document"]["model"]["name"] == "tiny");

    auto got = s.handle("GET", "/api/models/" + id, "");
    CHECK(got.status == 200);
    CHECK(got.body["document"] == created.body["document"]);

    auto list = s.handle("GET", "/api/models", "");
    CHECK(list.body.size() == 4);  // three fixtures plus the new entry

    auto put = s.handle("PUT", "/api/models/" + id, small_doc(-0.25));
    CHECK(put.status == 200);
    CHECK(put.body["document"]["model"]["edges"][0]["weight"] == -0.25);
    CHECK(put.body["created"] == created.body["created"]);

    CHECK(s.handle("DELETE", "/api/models/" + id, "").status == 200);
    CHECK(s.handle("GET", "/api/models/" + id, "").status == 404);
    CHECK(s.handle("DELETE", "/api/models/" + id, "").status == 404);
    CHECK(s.handle("PUT", "/api/models/" + id, small_doc()).status == 404);
    CHECK(s.handle("GET", "/api/models/..%2Fetc", "").status == 404);
}

TEST_CASE("fixtures are read-only") {
    auto s = make_service("readonly");
    CHECK(s.handle("GET", "/api/models/paper-scenario-1", "").status == 200);
    CHECK(s.handle("PUT", "/api/models/paper-scenario-1", small_doc()).status == 409);
    CHECK(s.handle("DELETE", "/api/models/paper-scenario-2", "").status == 409);
}

TEST_CASE("validation and schema errors are 400 with positions") {
    auto s = make_service("errors");
    auto malformed = s.handle("POST", "/api/models", "{nope");
    CHECK(malformed.status == 400);
    CHECK(malformed.body["error"]["kind"] == "malformed_json");
    CHECK(malformed.body["error"].contains("byte"));

    auto missing = s.handle("POST", "/api/models", R"({"model": {"name": "x", "concepts": [], "edges": []}})");
    CHECK(missing.status == 400);
    CHECK(missing.body["error"]["path"] == "");

    auto invalid = s.handle("POST", "/api/models", small_doc(1.5));
    CHECK(invalid.status == 400);
    CHECK(invalid.body["error"]["kind"] == "validation_failed");
    CHECK(invalid.body["error"]["violations"][0]["kind"] == "WeightOutOfRange");

    auto bad_clamp = s.handle("POST", "/api/models",
                              R"({"format_version": "1.0.0", "model": {"name": "x", "concepts": [{"id": "A", "name": "A"}],
                                  "edges": []}, "scenarios": [{"name": "s", "clamps": {"Q": 0.1}}]})");
    CHECK(bad_clamp.status == 400);
    CHECK(bad_clamp.body["error"]["path"] == "/scenarios/0/clamps/Q");

    CHECK(s.handle("GET", "/api/nothing", "").status == 404);
    CHECK(s.handle("PATCH", "/api/models", "").status == 405);
}

TEST_CASE("metrics endpoint") {
    auto s = make_service("metrics");
    auto r = s.handle("GET", "/api/models/paper-scenario-1/metrics", "");
    CHECK(r.status == 200);
    CHECK(r.body["centrality"]["R2"].get<double>() == doctest::Approx(3.5));
    auto sq = s.handle("GET", "/api/models/paper-scenario-1/metrics", "", {{"density", "square"}});
    CHECK(sq.body["density"].get<double>() == doctest::Approx(41.0 / 529.0));
    CHECK(s.handle("GET", "/api/models/paper-scenario-1/metrics", "", {{"density", "x"}}).status == 400);
    CHECK(s.handle("GET", "/api/models/unknown/metrics", "").status == 404);
}

TEST_CASE("run endpoint") {
    auto s = make_service("run");
    auto r = s.handle("POST", "/api/models/paper-scenario-3/run", clamps_body(3));
    REQUIRE(r.status == 200);
    CHECK(r.body["relative_change"]["I5"].get<double>() > 0);
    CHECK(r.body["converged"] == true);

    auto named = s.handle("POST", "/api/models/paper-scenario-3/run", R"({"scenario": "3-sustainable-covid-19"})");
    CHECK(named.body["relative_change"] == r.body["relative_change"]);

    auto empty = s.handle("POST", "/api/models/paper-scenario-1/run", R"({"clamps": {}})");
    REQUIRE(empty.status == 200);
    for (auto& [k, v] : empty.body["relative_change"].items()) CHECK(v.get<double>() == 0.0);

    // Identical requests give identical bodies.
    CHECK(s.handle("POST", "/api/models/paper-scenario-3/run", clamps_body(3)).body == r.body);

    auto unknown = s.handle("POST", "/api/models/paper-scenario-1/run", R"({"clamps": {"X9": 0.5}})");
    CHECK(unknown.status == 422);
    CHECK(unknown.body["error"]["concept"] == "X9");
    CHECK(s.handle("POST", "/api/models/paper-scenario-1/run", R"({"clamps": {"P2": 2}})").status == 400);
    CHECK(s.handle("POST", "/api/models/paper-scenario-1/run", R"({"scenario": "nope"})").status == 422);
    CHECK(s.handle("POST", "/api/models/zzz/run", "{}").status == 404);
    CHECK(s.handle("POST", "/api/models/paper-scenario-1/run", R"({"config": {"tolerance": -1}})").status == 400);
}

TEST_CASE("non-convergence is a 200 with a status") {
    auto s = make_service("nonconv");
    auto r = s.handle("POST", "/api/models/paper-scenario-3/run",
                      json{{"scenario", "3-sustainable-covid-19"}, {"config", {{"max_iterations", 3}}}}.dump());
    CHECK(r.status == 200);
    CHECK(r.body["converged"] == false);
    CHECK(r.body["clamped"]["status"] == "max-iterations-reached");
}

TEST_CASE("run config overrides merge over the document config") {
    auto s = make_service("docconfig");
    auto doc = json::parse(fcm::io::write_document(fcm::fixtures::document(1)));
    doc["config"] = {{"kernel", "kosko"}, {"squash", {{"kind", "tanh"}, {"steepness", 1}}}};
    const auto id = s.handle("POST", "/api/models", doc.dump()).body["id"].get<std::string>();
    const auto scen = json{{"scenario", "1-traditional-growth"}};

    auto from_doc = s.handle("POST", "/api/models/" + id + "/run", scen.dump());
    auto explicit_kosko = s.handle("POST", "/api/models/paper-scenario-1/run",
                                   json{{"scenario", "1-traditional-growth"},
                                        {"config", {{"kernel", "kosko"}, {"squash", {{"kind", "tanh"}, {"steepness", 1}}}}}}
                                       .dump());
    REQUIRE(from_doc.status == 200);
    CHECK(from_doc.body["relative_change"] == explicit_kosko.body["relative_change"]);

    auto back_to_default = s.handle(
        "POST", "/api/models/" + id + "/run",
        json{{"scenario", "1-traditional-growth"}, {"config", {{"kernel", "rescaled"}, {"squash", {{"kind", "tanh"}, {"steepness", 0.5}}}}}}
            .dump());
    auto fixture_default = s.handle("POST", "/api/models/paper-scenario-1/run", scen.dump());
    CHECK(back_to_default.body["relative_change"] == fixture_default.body["relative_change"]);
}

TEST_CASE("max_iterations is capped") {
    fcm::service::Options o;
    o.storage_dir = fresh_dir("cap");
    o.max_iterations_cap = 5;
    Service s(o);
    auto r = s.handle("POST", "/api/models/paper-scenario-3/run",
                      json{{"scenario", "3-sustainable-covid-19"}, {"config", {{"max_iterations", 100000}}}}.dump());
    CHECK(r.status == 200);
    CHECK(r.body["clamped"]["iterations"].get<int>() <= 5);
}

TEST_CASE("compare endpoint") {
    auto s = make_service("compare");
    auto r = s.handle("POST", "/api/compare",
                      R"({"models": ["paper-scenario-1", "paper-scenario-2", "paper-scenario-3"]})");
    REQUIRE(r.status == 200);
    CHECK(r.body["scenarios"].size() == 3);
    CHECK(r.body["structural_identity"]["identical"] == true);

    auto created = s.handle("POST", "/api/models", small_doc());
    const auto id = created.body["id"].get<std::string>();
    auto runs = s.handle("POST", "/api/compare",
                         json{{"runs", json::array({{{"model", id}, {"scenario", "push"}},
                                                    {{"model", id}, {"name", "free"}, {"clamps", {{"B", -0.5}}}}})},
                              {"top", 1}}
                             .dump());
    REQUIRE(runs.status == 200);
    CHECK(runs.body["scenarios"] == json::array({"push", "free"}));

    CHECK(s.handle("POST", "/api/compare", R"({"models": ["missing"]})").status == 404);
    CHECK(s.handle("POST", "/api/compare", R"({"runs": [{"model": "paper-scenario-1", "clamps": {"Q": 1}}]})").status ==
          422);
    CHECK(s.handle("POST", "/api/compare", R"({"something": 1})").status == 400);
}

TEST_CASE("registry survives a restart") {
    fcm::service::Options o;
    o.storage_dir = fresh_dir("durable");
    std::string id;
    {
        Service s(o);
        id = s.handle("POST", "/api/models", small_doc()).body["id"].get<std::string>();
    }
    Service again(o);
    auto got = again.handle("GET", "/api/models/" + id, "");
    CHECK(got.status == 200);
    CHECK(got.body["document"]["model"]["name"] == "tiny");
    CHECK(fs::exists(o.storage_dir / (id + ".json")));
}

TEST_CASE("HTTP round-trip with CORS") {
    fcm::service::Options o;
    o.storage_dir = fresh_dir("http");
    o.cors = true;
    Service s(o);
    fcm::service::HttpServer server(s);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    server.start();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/api/models/paper-scenario-1/metrics");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(json::parse(res->body)["centrality"]["R2"].get<double>() == doctest::Approx(3.5));

    auto post = client.Post("/api/models", small_doc(), "application/json");
    REQUIRE(post);
    CHECK(post->status == 201);

    auto bad = client.Post("/api/models/paper-scenario-1/run", R"({"clamps": {"X9": 1}})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 422);

    auto pre = client.Options("/api/models");
    REQUIRE(pre);
    CHECK(pre->status == 204);
    server.stop();
}
