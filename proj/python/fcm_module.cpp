// Python bindings. Documents and results cross the boundary as JSON text;
// the fcm package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fcm/calibration.hpp"
#include "fcm/fixtures.hpp"
#include "fcm/io.hpp"
#include "fcm/json_codec.hpp"
#include "fcm/metrics.hpp"
#include "fcm/scenario.hpp"

namespace py = pybind11;
using namespace fcm;
using Json = json::json;

namespace {

io::ModelDocument doc_from(const std::string& text) { return io::read_document(text); }

InferenceConfig merged_config(InferenceConfig base, const std::string& overrides) {
    if (overrides.empty()) return base;
    Json merged = json::encode(base);
    const auto o = Json::parse(overrides);
    if (!o.is_object()) throw std::invalid_argument("config must be an object");
    for (auto it = o.begin(); it != o.end(); ++it) merged[it.key()] = it.value();
    return json::decode_config(merged, "/config");
}

std::string validate(const std::string& text) {
    const auto parts = json::decode_model_parts(Json::parse(text).at("model"), "/model");
    Json out = Json::array();
    for (const auto& v : validate_parts(parts.concepts, parts.edges)) out.push_back(json::encode(v));
    return out.dump();
}

std::string metrics(const std::string& text, bool square_density) {
    const auto doc = doc_from(text);
    return json::encode(structural_metrics(doc.model, square_density ? DensityDenominator::Square
                                                                     : DensityDenominator::NoSelfLoops))
        .dump();
}

std::string run(const std::string& text, const std::optional<std::string>& scenario,
                const std::optional<std::string>& clamps, const std::string& config) {
    const auto doc = doc_from(text);
    ScenarioSpec spec;
    if (scenario) {
        auto it = std::find_if(doc.scenarios.begin(), doc.scenarios.end(),
                               [&](const ScenarioSpec& s) { return s.name == *scenario; });
        if (it == doc.scenarios.end()) throw ResolutionError("no scenario named '" + *scenario + "'");
        spec = *it;
    } else {
        spec.name = "custom";
    }
    if (clamps) spec.clamps = json::decode_clamps(Json::parse(*clamps), "/clamps");
    const auto base = spec.config_override.value_or(doc.config.value_or(InferenceConfig{}));
    return json::encode(run_scenario(doc.model, spec, merged_config(base, config))).dump();
}

std::string compare(const std::vector<std::string>& texts, const std::string& config, std::size_t top) {
    ModelRegistry registry;
    std::vector<ScenarioSpec> specs;
    std::optional<InferenceConfig> base;
    for (const auto& t : texts) {
        const auto doc = doc_from(t);
        const auto name = doc.model.name();
        auto [it, inserted] = registry.emplace(name, doc.model);
        if (!inserted && !(it->second == doc.model))
            throw std::invalid_argument("two different models are both named '" + name + "'");
        if (!base && doc.config) base = doc.config;
        for (auto s : doc.scenarios) {
            if (s.model_ref.empty()) s.model_ref = name;
            specs.push_back(std::move(s));
        }
    }
    const auto cfg = merged_config(base.value_or(InferenceConfig{}), config);
    return json::encode(compare_scenarios(specs, registry, cfg, top)).dump();
}

std::string calibrate() {
    const auto r = calibration::run();
    Json sweep = Json::array();
    for (const auto& e : r.sweep)
        sweep.push_back({{"config", json::encode(e.config)},
                         {"mean_abs_deviation", e.mean_abs_deviation},
                         {"sign_agreement", e.sign_agreement},
                         {"sign_suite", e.signs.all()},
                         {"converged", e.all_converged}});
    Json out = {{"sweep", sweep}, {"best_by_deviation", r.best_by_deviation}};
    out["selected"] = r.selected ? Json(*r.selected) : Json(nullptr);
    out["markdown"] = calibration::render_markdown(r);
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fuzzy cognitive map engine";
    m.attr("FORMAT_VERSION") = std::string(io::kFormatVersion);

    static py::exception<std::runtime_error> base(m, "FcmError", PyExc_ValueError);
    static py::exception<io::ParseError> parse_error(m, "ParseError", base.ptr());
    static py::exception<io::SchemaError> schema_error(m, "SchemaError", base.ptr());
    static py::exception<ModelError> model_error(m, "ModelError", base.ptr());
    static py::exception<InferenceError> inference_error(m, "InferenceError", base.ptr());
    static py::exception<ResolutionError> resolution_error(m, "ResolutionError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const py::builtin_exception&) {
            throw;
        } catch (const io::ParseError& e) {
            py::set_error(parse_error, e.what());
        } catch (const io::SchemaError& e) {
            py::set_error(schema_error, (e.path() + ": " + e.what()).c_str());
        } catch (const ModelError& e) {
            py::set_error(model_error, e.what());
        } catch (const InferenceError& e) {
            py::set_error(inference_error, e.what());
        } catch (const ResolutionError& e) {
            py::set_error(resolution_error, e.what());
        } catch (const io::FileError& e) {
            py::set_error(PyExc_OSError, e.what());
        } catch (const Json::exception& e) {
            py::set_error(base, e.what());
        } catch (const std::runtime_error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def("fixture_ids", &fixtures::fixture_ids);
    m.def("fixture", [](int k) {
        if (k < 1 || k > fixtures::kScenarioCount) throw py::index_error("fixture number out of range");
        return io::write_document(fixtures::document(k));
    });
    m.def("load", [](const std::string& path) { return io::write_document(io::load_document(path)); });
    m.def("parse_matrix", [](const std::string& text, const std::string& name) {
        io::ModelDocument d;
        d.model = io::parse_matrix_delimited(text, name);
        return io::write_document(d);
    }, py::arg("text"), py::arg("name") = "");
    m.def("to_matrix", [](const std::string& text) { return io::write_matrix_delimited(doc_from(text).model); });
    m.def("normalize", [](const std::string& text) { return io::write_document(doc_from(text)); });
    m.def("validate", &validate);
    m.def("metrics", &metrics, py::arg("document"), py::arg("square_density") = false);
    m.def("run", &run, py::arg("document"), py::arg("scenario") = std::nullopt, py::arg("clamps") = std::nullopt,
          py::arg("config") = "");
    m.def("compare", &compare, py::arg("documents"), py::arg("config") = "", py::arg("top") = 5);
    m.def("calibrate", &calibrate);
    m.def("squash", [](double x, const std::string& kind, double steepness) {
        const auto k = parse_squash_kind(kind);
        if (!k) throw std::invalid_argument("unknown squash '" + kind + "'");
        return squash(x, {*k, steepness});
    }, py::arg("x"), py::arg("kind") = "tanh", py::arg("steepness") = 1.0);
}
