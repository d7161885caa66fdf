#include "fcm/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fcm/calibration.hpp"
#include "fcm/fixtures.hpp"
#include "fcm/io.hpp"
#include "fcm/json_codec.hpp"
#include "fcm/metrics.hpp"
#include "fcm/scenario.hpp"

namespace fcm::cli {

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error\n"
    "  2  file not found / unreadable / unwritable\n"
    "  3  parse or schema error (positioned)\n"
    "  4  model validation failed\n"
    "  5  run error (unknown clamp id, clamp out of range, unresolved model)\n"
    "Environment:\n"
    "  FCM_CONFIG  path to a JSON inference config used as defaults for inference flags\n";

struct InferenceFlags {
    std::optional<std::string> kernel;
    std::optional<std::string> squash;
    std::optional<double> steepness;
    std::optional<double> tolerance;
    std::optional<int> max_iter;
    std::optional<std::string> config_file;
};

void add_inference_flags(CLI::App* cmd, InferenceFlags& f) {
    cmd->add_option("--kernel", f.kernel, "Update kernel: kosko | modified-kosko | rescaled");
    cmd->add_option("--squash", f.squash, "Squashing function: logistic | tanh | linear-clip");
    cmd->add_option("--steepness", f.steepness, "Squash steepness (> 0)");
    cmd->add_option("--tolerance", f.tolerance, "Convergence tolerance (> 0)");
    cmd->add_option("--max-iter", f.max_iter, "Maximum iterations (>= 1)");
    cmd->add_option("--config", f.config_file, "JSON inference config file (overrides FCM_CONFIG)");
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

InferenceConfig read_config_file(const std::string& path) {
    return json::decode_config(json::json::parse(io::read_text_file(path), nullptr, true), "");
}

/// Layers, lowest first: defaults, FCM_CONFIG, the document's own config,
/// --config, then the individual flags.
InferenceConfig resolve_config(const InferenceFlags& f, const std::optional<InferenceConfig>& document = {}) {
    InferenceConfig c;
    if (const char* env = std::getenv(kConfigEnvVar); env && *env && !f.config_file) c = read_config_file(env);
    if (document) c = *document;
    if (f.config_file) c = read_config_file(*f.config_file);
    if (f.kernel) {
        auto k = parse_kernel_kind(*f.kernel);
        if (!k) throw UsageError("unknown kernel '" + *f.kernel + "'");
        c.kernel = *k;
    }
    if (f.squash) {
        auto s = parse_squash_kind(*f.squash);
        if (!s) throw UsageError("unknown squash '" + *f.squash + "'");
        c.squash.kind = *s;
    }
    if (f.steepness) c.squash.steepness = *f.steepness;
    if (f.tolerance) c.tolerance = *f.tolerance;
    if (f.max_iter) c.max_iterations = *f.max_iter;
    try {
        validate_config(c);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

std::string fmt(double v, int decimals, bool sign = false) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(decimals);
    if (sign && v > 0 && std::abs(v) >= 0.5 * std::pow(10.0, -decimals)) s << '+';
    if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
    s << v;
    return s.str();
}

void print_json(std::ostream& out, const json::json& j) { out << j.dump(2) << '\n'; }

io::ModelDocument load(const std::string& path, std::ostream& err) {
    std::vector<std::string> warnings;
    auto doc = io::load_document(path, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    return doc;
}

// ---- validate -------------------------------------------------------------

int cmd_validate(const std::string& path, bool structured, std::ostream& out, std::ostream& err) {
    std::vector<Violation> violations;
    std::string name;
    std::optional<FcmModel> model;
    if (io::format_from_extension(path) == io::FileFormat::Structured) {
        // Collect every violation instead of stopping at the first one.
        auto j = json::json::parse(io::read_text_file(path), nullptr, false);
        if (j.is_discarded()) throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "", "malformed JSON");
        if (!j.is_object() || !j.contains("model"))
            throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "/model", "required field is missing");
        auto parts = json::decode_model_parts(j["model"], "/model");
        name = parts.name;
        violations = validate_parts(parts.concepts, parts.edges);
        if (violations.empty()) model = load(path, err).model;
    } else {
        model = load(path, err).model;
        name = model->name();
    }

    std::vector<ConceptId> isolated;
    if (model) isolated = classify_concepts(*model).isolated;

    if (structured) {
        json::json vj = json::json::array();
        for (const auto& v : violations) vj.push_back(json::encode(v));
        json::json iso = json::json::array();
        for (const auto& id : isolated) iso.push_back(id.str());
        print_json(out, {{"model", name}, {"valid", violations.empty()}, {"violations", vj}, {"isolated", iso}});
    } else {
        if (violations.empty()) {
            out << "valid: model '" << name << "' (" << model->size() << " concepts, " << model->edges().size()
                << " edges)\n";
        } else {
            out << "invalid: model '" << name << "' has " << violations.size() << " violation(s)\n";
            for (const auto& v : violations) out << "  " << to_string(v.kind) << ": " << v.message << '\n';
        }
        for (const auto& id : isolated) out << "  warning: isolated concept " << id.str() << '\n';
    }
    return violations.empty() ? kOk : kValidationError;
}

// ---- metrics --------------------------------------------------------------

int cmd_metrics(const std::string& path, bool structured, bool square_density, std::ostream& out,
                std::ostream& err) {
    const auto model = load(path, err).model;
    const auto report = structural_metrics(
        model, square_density ? DensityDenominator::Square : DensityDenominator::NoSelfLoops);
    if (structured) {
        print_json(out, json::encode(report));
        return kOk;
    }
    auto list = [&](ConceptClass cls) {
        std::string s;
        for (const auto& id : report.ids) {
            auto it = report.classes.find(id);
            if (it != report.classes.end() && it->second == cls) s += " " + id.str();
        }
        return s;
    };
    out << "model: " << model.name() << '\n'
        << "concepts: " << report.concept_count << '\n'
        << "connections: " << report.connection_count << '\n'
        << "density: " << fmt(report.density, 4) << '\n'
        << "connections per component: " << fmt(report.connections_per_component, 4) << '\n'
        << "complexity score: " << (report.complexity_score ? fmt(*report.complexity_score, 4) : "n/a") << '\n'
        << "transmitters (" << report.transmitter_count << "):" << list(ConceptClass::Transmitter) << '\n'
        << "receivers (" << report.receiver_count << "):" << list(ConceptClass::Receiver) << '\n'
        << "ordinary: " << report.ordinary_count << '\n';
    for (const auto& id : report.isolated) out << "warning: isolated concept " << id.str() << '\n';
    out << "\nrank  concept  centrality  indegree  outdegree  class\n";
    const auto ranking = rank_by_centrality(model, std::max<std::size_t>(model.size(), 1));
    std::size_t rank = 0;
    for (const auto& [id, c] : ranking) {
        const auto i = model.require_index(id);
        auto cls = report.classes.find(id);
        out << std::setw(4) << ++rank << "  " << std::left << std::setw(7) << id.str() << std::right << "  "
            << std::setw(10) << fmt(c, 2) << "  " << std::setw(8) << fmt(report.indegree[i], 2) << "  "
            << std::setw(9) << fmt(report.outdegree[i], 2) << "  "
            << (cls == report.classes.end() ? std::string("isolated") : std::string(to_string(cls->second))) << '\n';
    }
    return kOk;
}

// ---- run ------------------------------------------------------------------

Clamps parse_clamp_flags(const std::vector<std::string>& flags) {
    Clamps clamps;
    for (const auto& f : flags) {
        auto eq = f.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--clamp expects ID=VALUE, got '" + f + "'");
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(f.substr(eq + 1), &used);
        } catch (const std::exception&) {
            throw UsageError("--clamp value in '" + f + "' is not a number");
        }
        if (used != f.size() - eq - 1) throw UsageError("--clamp value in '" + f + "' is not a number");
        clamps[ConceptId(f.substr(0, eq))] = v;
    }
    return clamps;
}

void print_outcome(std::ostream& out, const FcmModel& model, const ScenarioOutcome& o) {
    out << "scenario: " << o.scenario_name << '\n'
        << "baseline: " << to_string(o.baseline.status) << " after " << o.baseline.iterations << " iterations";
    if (o.baseline.status == RunStatus::LimitCycle) out << " (period " << o.baseline.period << ")";
    out << "\nclamped:  " << to_string(o.clamped.status) << " after " << o.clamped.iterations << " iterations";
    if (o.clamped.status == RunStatus::LimitCycle) out << " (period " << o.clamped.period << ")";
    out << "\n\nconcept  baseline  clamped  change\n";
    for (std::size_t i = 0; i < model.size(); ++i) {
        out << std::left << std::setw(7) << o.ids[i].str() << std::right << "  " << std::setw(8)
            << fmt(o.baseline.final_state.values[i], 4) << "  " << std::setw(7)
            << fmt(o.clamped.final_state.values[i], 4) << "  " << std::setw(6) << fmt(o.relative_change[i], 2, true)
            << '\n';
    }
}

int cmd_run(const std::string& path, const std::optional<std::string>& scenario_name,
            const std::vector<std::string>& clamp_flags, bool no_clamps, const InferenceFlags& flags,
            bool structured, std::ostream& out, std::ostream& err) {
    const auto doc = load(path, err);

    ScenarioSpec spec;
    spec.model_ref = doc.model.name();
    if (scenario_name) {
        auto it = std::find_if(doc.scenarios.begin(), doc.scenarios.end(),
                               [&](const ScenarioSpec& s) { return s.name == *scenario_name; });
        if (it == doc.scenarios.end()) throw UsageError("no scenario named '" + *scenario_name + "' in " + path);
        spec = *it;
    } else if (!clamp_flags.empty() || no_clamps) {
        spec.name = no_clamps && clamp_flags.empty() ? "no-clamps" : "command-line";
    } else if (doc.scenarios.size() == 1) {
        spec = doc.scenarios.front();
    } else if (doc.scenarios.empty()) {
        throw UsageError(path + " defines no scenario; pass --clamp ID=VALUE or --no-clamps");
    } else {
        throw UsageError(path + " defines several scenarios; choose one with --scenario");
    }
    if (!clamp_flags.empty()) {
        for (const auto& [id, v] : parse_clamp_flags(clamp_flags)) spec.clamps[id] = v;
    }

    const auto config = resolve_config(flags, spec.config_override ? spec.config_override : doc.config);
    spec.config_override.reset();
    const auto outcome = run_scenario(doc.model, spec, config);
    if (structured) print_json(out, json::encode(outcome));
    else print_outcome(out, doc.model, outcome);
    return kOk;
}

// ---- compare --------------------------------------------------------------

int cmd_compare(const std::vector<std::string>& paths, const InferenceFlags& flags, ReportFormat format,
                std::ostream& out, std::ostream& err) {
    auto config = resolve_config(flags);
    ModelRegistry registry;
    std::vector<ScenarioSpec> scenarios;
    for (const auto& p : paths) {
        auto doc = load(p, err);
        auto [it, inserted] = registry.emplace(doc.model.name(), doc.model);
        if (!inserted && !(it->second == doc.model))
            throw ResolutionError("two different models are both named '" + doc.model.name() + "'");
        if (doc.scenarios.empty()) throw UsageError(p + " defines no scenario to compare");
        for (auto s : doc.scenarios) {
            s.config_override = resolve_config(flags, s.config_override ? s.config_override : doc.config);
            scenarios.push_back(std::move(s));
        }
    }
    const auto report = compare_scenarios(scenarios, registry, config);
    out << render_report(report, format);
    for (const auto& name : report.non_converged) err << "warning: scenario '" << name << "' did not converge\n";
    return kOk;
}

// ---- convert --------------------------------------------------------------

int cmd_convert(const std::string& in_path, const std::string& out_path, const std::optional<std::string>& to,
                bool structured, std::ostream& out, std::ostream& err) {
    io::FileFormat target = out_path == "-" ? io::FileFormat::Structured : io::format_from_extension(out_path);
    if (to) {
        auto f = io::parse_file_format(*to);
        if (!f) throw UsageError("unknown target format '" + *to + "'");
        target = *f;
    }
    if (target == io::FileFormat::VendorXml) throw UsageError("vendor XML is import-only");

    const auto doc = load(in_path, err);
    std::string text;
    if (target == io::FileFormat::Delimited) {
        if (!doc.scenarios.empty() || doc.config)
            err << "warning: delimited output keeps only the adjacency matrix; scenarios and config are dropped\n";
        text = io::write_matrix_delimited(doc.model);
    } else {
        text = io::write_document(doc);
    }
    if (out_path == "-") {
        out << text;
        return kOk;
    }
    io::write_text_file(out_path, text);
    const char* name = target == io::FileFormat::Delimited ? "delimited" : "structured";
    if (structured) print_json(out, {{"input", in_path}, {"output", out_path}, {"format", name}});
    else out << "wrote " << out_path << " (" << name << ")\n";
    return kOk;
}

// ---- reproduce-paper --------------------------------------------------------

int cmd_reproduce(const InferenceFlags& flags, bool structured, const std::optional<std::string>& docs_path,
                  bool skip_calibration, std::ostream& out) {
    const auto config = resolve_config(flags);
    const auto registry = fixtures::registry();
    const auto scenarios = fixtures::all_scenarios();
    const auto report = compare_scenarios(scenarios, registry, config);

    std::vector<MetricsReport> metrics;
    for (int k = 1; k <= fixtures::kScenarioCount; ++k) metrics.push_back(structural_metrics(fixtures::model(k)));

    std::optional<calibration::Report> calib;
    if (!skip_calibration || docs_path) calib = calibration::run();
    if (docs_path && calib) io::write_text_file(*docs_path, calibration::render_markdown(*calib));

    if (structured) {
        json::json j;
        j["config"] = json::encode(config);
        json::json clamps = json::json::object();
        for (const auto& s : scenarios) clamps[s.name] = json::encode_clamps(s.clamps);
        j["clamps"] = std::move(clamps);
        j["comparison"] = json::encode(report);
        json::json mj = json::json::object();
        for (int k = 0; k < fixtures::kScenarioCount; ++k) mj[scenarios[k].name] = json::encode(metrics[k]);
        j["metrics"] = std::move(mj);
        if (calib) {
            json::json rows = json::json::array();
            for (const auto& e : calib->sweep) {
                rows.push_back({{"config", json::encode(e.config)},
                                {"mean_abs_deviation", e.mean_abs_deviation},
                                {"sign_agreement", e.sign_agreement},
                                {"sign_suite", e.signs.all()},
                                {"converged", e.all_converged}});
            }
            json::json cj = {{"sweep", std::move(rows)}, {"best_by_deviation", calib->best_by_deviation}};
            cj["selected"] = calib->selected ? json::json(*calib->selected) : json::json(nullptr);
            cj["driver_input"] = {{"config", json::encode(calib->driver_input.config)},
                                  {"mean_abs_deviation", calib->driver_input.mean_abs_deviation},
                                  {"sign_agreement", calib->driver_input.sign_agreement}};
            j["calibration"] = std::move(cj);
        }
        print_json(out, j);
        return kOk;
    }

    out << "== Clamp vectors\n\n";
    out << std::left << std::setw(8) << "concept" << std::right;
    for (const auto& s : scenarios) out << "  " << std::setw(22) << s.name;
    out << '\n';
    for (const auto& c : fixtures::concepts()) {
        out << std::left << std::setw(8) << c.id.str() << std::right;
        for (const auto& s : scenarios) {
            auto it = s.clamps.find(c.id);
            out << "  " << std::setw(22) << (it == s.clamps.end() ? std::string() : fmt(it->second, 2, true));
        }
        out << '\n';
    }

    out << "\n== Relative change (" << calibration::describe(config) << ")\n\n";
    out << render_report(report, ReportFormat::PlainTable);

    out << "\n== Network parameters\n\n";
    for (int k = 0; k < fixtures::kScenarioCount; ++k) {
        const auto& m = metrics[k];
        out << scenarios[k].name << ": concepts " << m.concept_count << ", connections " << m.connection_count
            << ", density " << fmt(m.density, 4) << ", connections/component " << fmt(m.connections_per_component, 4)
            << ", complexity " << (m.complexity_score ? fmt(*m.complexity_score, 4) : "n/a") << ", transmitters "
            << m.transmitter_count << ", receivers " << m.receiver_count << '\n';
    }

    if (calib) {
        out << "\n== Calibration against published results\n\n";
        out << calibration::render_markdown(*calib);
    }
    if (docs_path) out << "\ncalibration report written to " << *docs_path << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fuzzy cognitive map scenario toolkit", "fcm"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string format = "plain";
    app.add_option("--format", format, "Output format: plain | structured (compare also: delimited)")
        ->check(CLI::IsMember({"plain", "structured", "json", "delimited", "csv", "plain-table"}));

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a model file and list violations");
    validate->add_option("file", validate_path, "Model file (.csv, .json, .xml/.mmp)")->required();

    std::string metrics_path;
    bool square_density = false;
    auto* metrics = app.add_subcommand("metrics", "Centrality, classes, density and complexity");
    metrics->add_option("file", metrics_path, "Model file")->required();
    metrics->add_flag("--square-density", square_density, "Use N^2 instead of N(N-1) as density denominator");

    std::string run_path;
    std::optional<std::string> run_scenario_name;
    std::vector<std::string> clamp_flags;
    bool no_clamps = false;
    InferenceFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario and print its relative change");
    run_cmd->add_option("file", run_path, "Model file")->required();
    run_cmd->add_option("--scenario", run_scenario_name, "Scenario name from the document");
    run_cmd->add_option("--clamp", clamp_flags, "Clamp ID=VALUE (repeatable, overrides the scenario)");
    run_cmd->add_flag("--no-clamps", no_clamps, "Run with an empty clamp set");
    add_inference_flags(run_cmd, run_flags);

    std::vector<std::string> compare_paths;
    InferenceFlags compare_flags;
    auto* compare = app.add_subcommand("compare", "Run and compare the scenarios of several documents");
    compare->add_option("files", compare_paths, "Structured documents with scenarios")->required();
    add_inference_flags(compare, compare_flags);

    std::string convert_in, convert_out;
    std::optional<std::string> convert_to;
    auto* convert = app.add_subcommand("convert", "Convert between delimited, structured and vendor XML");
    convert->add_option("input", convert_in, "Input file")->required();
    convert->add_option("output", convert_out, "Output file ('-' for stdout)")->required();
    convert->add_option("--to", convert_to, "Target format: delimited | structured");

    InferenceFlags repro_flags;
    std::optional<std::string> docs_path;
    bool skip_calibration = false;
    auto* repro = app.add_subcommand("reproduce-paper", "Run the bundled scenarios and the calibration sweep");
    repro->add_option("--write-docs", docs_path, "Write the calibration report (markdown) to this path");
    repro->add_flag("--no-calibration", skip_calibration, "Skip the calibration sweep");
    add_inference_flags(repro, repro_flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run 'fcm --help' for usage\n";
        return kUsage;
    }

    const bool structured = format == "structured" || format == "json";
    try {
        if (*validate) return cmd_validate(validate_path, structured, out, err);
        if (*metrics) return cmd_metrics(metrics_path, structured, square_density, out, err);
        if (*run_cmd)
            return cmd_run(run_path, run_scenario_name, clamp_flags, no_clamps, run_flags, structured, out, err);
        if (*compare) {
            auto rf = parse_report_format(format == "plain" ? "plain-table" : format);
            return cmd_compare(compare_paths, compare_flags, rf.value_or(ReportFormat::PlainTable), out, err);
        }
        if (*convert) return cmd_convert(convert_in, convert_out, convert_to, structured, out, err);
        if (*repro) return cmd_reproduce(repro_flags, structured, docs_path, skip_calibration, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const io::FileError& e) {
        err << "error: " << e.what() << '\n';
        return kFileError;
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const io::SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << '\n';
        return kParseError;
    } catch (const io::ImportError& e) {
        err << "error: " << e.what() << '\n';
        for (const auto& v : e.violations()) err << "  " << to_string(v.kind) << ": " << v.message << '\n';
        return e.kind() == io::ImportError::Kind::ImportValidationFailed ? kValidationError : kParseError;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const InferenceError& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return kRunError;
    } catch (const ResolutionError& e) {
        err << "error: " << e.what() << '\n';
        return kRunError;
    }
    return kUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace fcm::cli
