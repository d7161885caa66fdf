#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fcm/cli.hpp"
#include "fcm/io.hpp"
#include "fcm/json_codec.hpp"

namespace fs = std::filesystem;
using fcm::json::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result fcm_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = fcm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return (fs::path(FCM_DATA_DIR) / name).string(); }

fs::path scratch() {
    auto d = fs::temp_directory_path() / "fcm-cli-test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("help lists exit codes") {
    auto r = fcm_run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Exit codes") != std::string::npos);
    CHECK(r.out.find("FCM_CONFIG") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    CHECK(fcm_run({}).code == fcm::cli::kUsage);
    CHECK(fcm_run({"frobnicate"}).code == fcm::cli::kUsage);
    CHECK(fcm_run({"run", data("scenario1.json"), "--kernel", "nope"}).code == fcm::cli::kUsage);
    CHECK(fcm_run({"run", data("scenario1.json"), "--clamp", "P2"}).code == fcm::cli::kUsage);
    CHECK(fcm_run({"run", data("scenario1.json"), "--scenario", "missing"}).code == fcm::cli::kUsage);
}

TEST_CASE("validate") {
    auto ok = fcm_run({"validate", data("scenario1.csv")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("valid") == 0);

    auto missing = fcm_run({"validate", "/nonexistent/model.csv"});
    CHECK(missing.code == fcm::cli::kFileError);

    const auto dir = scratch();
    fcm::io::write_text_file(dir / "bad.csv", "concept,A,B\nA,,1.5\nB,,\n");
    auto bad = fcm_run({"validate", (dir / "bad.csv").string()});
    CHECK(bad.code == fcm::cli::kParseError);
    CHECK(bad.err.find("line 2") != std::string::npos);

    fcm::io::write_text_file(dir / "bad.json", R"({"format_version": "1.0.0", "model": {"name": "x",
        "concepts": [{"id": "A", "name": "A"}, {"id": "A", "name": "A2"}],
        "edges": [{"source": "A", "target": "A", "weight": 0.5}, {"source": "A", "target": "X9", "weight": 0.1}]}})");
    auto invalid = fcm_run({"--format", "structured", "validate", (dir / "bad.json").string()});
    CHECK(invalid.code == fcm::cli::kValidationError);
    auto j = json::parse(invalid.out);
    CHECK(j["valid"] == false);
    CHECK(j["violations"].size() >= 3);

    fcm::io::write_text_file(dir / "iso.csv", "concept,A,B,C\nA,,0.5,\nB,,,\nC,,,\n");
    auto iso = fcm_run({"validate", (dir / "iso.csv").string()});
    CHECK(iso.code == 0);
    CHECK(iso.out.find("isolated concept C") != std::string::npos);
}

TEST_CASE("metrics shows R2 at 3.50") {
    auto r = fcm_run({"metrics", data("scenario1.csv")});
    CHECK(r.code == 0);
    CHECK(r.out.find("R2             3.50") != std::string::npos);
    auto s = fcm_run({"--format", "structured", "metrics", data("scenario1.json")});
    auto j = json::parse(s.out);
    CHECK(j["centrality"]["R2"].get<double>() == doctest::Approx(3.5));
    CHECK(j["connection_count"] == 41);
}

TEST_CASE("run with empty clamps gives zeros") {
    auto r = fcm_run({"--format", "structured", "run", data("scenario1.json"), "--no-clamps"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    for (auto& [k, v] : j["relative_change"].items()) CHECK(v.get<double>() == 0.0);
}

TEST_CASE("run errors map to exit 5") {
    auto r = fcm_run({"run", data("scenario1.json"), "--clamp", "X9=0.5"});
    CHECK(r.code == fcm::cli::kRunError);
    CHECK(r.err.find("X9") != std::string::npos);
    CHECK(fcm_run({"run", data("scenario1.json"), "--clamp", "P2=1.5"}).code == fcm::cli::kRunError);
}

TEST_CASE("inference flags and config file") {
    auto base = fcm_run({"--format", "structured", "run", data("scenario1.json")});
    auto kosko = fcm_run({"--format", "structured", "run", data("scenario1.json"), "--kernel", "kosko", "--squash",
                          "tanh", "--steepness", "1", "--tolerance", "1e-6", "--max-iter", "500"});
    REQUIRE(base.code == 0);
    REQUIRE(kosko.code == 0);
    CHECK(base.out != kosko.out);

    const auto dir = scratch();
    fcm::io::write_text_file(dir / "cfg.json", R"({"kernel": "kosko", "squash": {"kind": "tanh", "steepness": 1},
        "tolerance": 1e-6, "max_iterations": 500})");
    auto via_file = fcm_run({"--format", "structured", "run", data("scenario1.json"), "--config",
                             (dir / "cfg.json").string()});
    CHECK(via_file.out == kosko.out);

    ::setenv(fcm::cli::kConfigEnvVar, (dir / "cfg.json").string().c_str(), 1);
    auto via_env = fcm_run({"--format", "structured", "run", data("scenario1.json")});
    ::unsetenv(fcm::cli::kConfigEnvVar);
    CHECK(via_env.out == kosko.out);

    CHECK(fcm_run({"run", data("scenario1.json"), "--tolerance", "-1"}).code == fcm::cli::kUsage);
}

TEST_CASE("document config sits between FCM_CONFIG and explicit flags") {
    const auto dir = scratch();
    auto doc = json::parse(fcm::io::read_text_file(data("scenario1.json")));
    doc["config"] = {{"kernel", "kosko"}, {"squash", {{"kind", "tanh"}, {"steepness", 1}}}};
    fcm::io::write_text_file(dir / "with-config.json", doc.dump());
    fcm::io::write_text_file(dir / "rescaled.json", R"({"kernel": "rescaled"})");
    const auto file = (dir / "with-config.json").string();

    auto kosko = fcm_run({"--format", "structured", "run", data("scenario1.json"), "--kernel", "kosko", "--steepness", "1"});
    auto plain = fcm_run({"--format", "structured", "run", data("scenario1.json")});
    auto from_doc = fcm_run({"--format", "structured", "run", file});
    CHECK(json::parse(from_doc.out)["relative_change"] == json::parse(kosko.out)["relative_change"]);

    ::setenv(fcm::cli::kConfigEnvVar, (dir / "rescaled.json").string().c_str(), 1);
    auto env_under_doc = fcm_run({"--format", "structured", "run", file});
    ::unsetenv(fcm::cli::kConfigEnvVar);
    CHECK(env_under_doc.out == from_doc.out);

    auto flags_win = fcm_run({"--format", "structured", "run", file, "--kernel", "rescaled", "--steepness", "0.5"});
    CHECK(json::parse(flags_win.out)["relative_change"] == json::parse(plain.out)["relative_change"]);

    auto compared = fcm_run({"--format", "structured", "compare", file, "--kernel", "rescaled", "--steepness", "0.5"});
    REQUIRE(compared.code == 0);
    CHECK(json::parse(compared.out)["outcomes"]["1-traditional-growth"]["relative_change"] ==
          json::parse(plain.out)["relative_change"]);
}

TEST_CASE("compare in all formats") {
    std::vector<std::string> files = {data("scenario1.json"), data("scenario2.json"), data("scenario3.json")};
    auto plain = fcm_run({"compare", files[0], files[1], files[2]});
    CHECK(plain.code == 0);
    CHECK(plain.out.find("structurally identical: yes") != std::string::npos);
    auto csv = fcm_run({"--format", "delimited", "compare", files[0], files[1], files[2]});
    CHECK(csv.out.rfind("concept,1-traditional-growth,2-covid-19,3-sustainable-covid-19\n", 0) == 0);
    auto structured = fcm_run({"--format", "structured", "compare", files[0], files[1], files[2]});
    auto j = json::parse(structured.out);
    CHECK(j["scenarios"].size() == 3);
    CHECK(fcm_run({"compare", data("scenario1.csv")}).code == fcm::cli::kUsage);
}

TEST_CASE("convert between formats") {
    const auto dir = scratch();
    auto to_csv = fcm_run({"convert", data("scenario2.json"), (dir / "s2.csv").string()});
    CHECK(to_csv.code == 0);
    CHECK(fcm::io::read_text_file(dir / "s2.csv") == fcm::io::read_text_file(data("scenario2.csv")));
    auto to_json = fcm_run({"convert", data("scenario2.csv"), (dir / "s2.json").string()});
    CHECK(to_json.code == 0);
    auto doc = fcm::io::read_document(fcm::io::read_text_file(dir / "s2.json"));
    CHECK(doc.model.edges().size() == 41);
    auto to_stdout = fcm_run({"convert", data("scenario2.csv"), "-", "--to", "delimited"});
    CHECK(to_stdout.out == fcm::io::read_text_file(data("scenario2.csv")));
    CHECK(fcm_run({"convert", data("scenario2.csv"), "-", "--to", "xml"}).code == fcm::cli::kUsage);
    auto summary = fcm_run({"--format", "structured", "convert", data("scenario2.csv"), (dir / "s2b.json").string()});
    CHECK(json::parse(summary.out)["format"] == "structured");
}

TEST_CASE("reproduce-paper shows I5 signs and is deterministic") {
    auto a = fcm_run({"--format", "structured", "reproduce-paper"});
    REQUIRE(a.code == 0);
    auto j = json::parse(a.out);
    const auto& oc = j["comparison"]["outcomes"];
    CHECK(oc["1-traditional-growth"]["relative_change"]["I5"].get<double>() < 0);
    CHECK(oc["2-covid-19"]["relative_change"]["I5"].get<double>() < 0);
    CHECK(oc["3-sustainable-covid-19"]["relative_change"]["I5"].get<double>() > 0);
    CHECK(j["calibration"]["sweep"].size() == 36);
    auto b = fcm_run({"--format", "structured", "reproduce-paper"});
    CHECK(a.out == b.out);

    const auto dir = scratch();
    auto w = fcm_run({"reproduce-paper", "--write-docs", (dir / "cal.md").string()});
    CHECK(w.code == 0);
    CHECK(fcm::io::read_text_file(dir / "cal.md").rfind("# Calibration report", 0) == 0);
    CHECK(w.out.find("== Clamp vectors") != std::string::npos);
}

TEST_CASE("every command has a structured mode") {
    for (std::vector<std::string> args : {std::vector<std::string>{"validate", data("scenario1.csv")},
                                          {"metrics", data("scenario1.csv")},
                                          {"run", data("scenario1.json")},
                                          {"compare", data("scenario1.json")},
                                          {"reproduce-paper", "--no-calibration"}}) {
        args.insert(args.begin(), {"--format", "structured"});
        auto r = fcm_run(args);
        CHECK(r.code == 0);
        CHECK_NOTHROW((void)json::parse(r.out));
    }
}
