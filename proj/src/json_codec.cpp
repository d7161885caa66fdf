#include "fcm/json_codec.hpp"

#include <cmath>

#include "fcm/io.hpp"

namespace fcm::json {

namespace {

using io::SchemaError;

[[noreturn]] void violation(const std::string& path, const std::string& reason) {
    throw SchemaError(SchemaError::Kind::SchemaViolation, path, reason);
}

std::string child(const std::string& path, std::string_view key) {
    std::string escaped;
    for (char c : key) {
        if (c == '~') escaped += "~0";
        else if (c == '/') escaped += "~1";
        else escaped += c;
    }
    return path + "/" + escaped;
}

std::string child(const std::string& path, std::size_t index) {
    return path + "/" + std::to_string(index);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) violation(path, "expected an object");
}

void expect_array(const json& j, const std::string& path) {
    if (!j.is_array()) violation(path, "expected an array");
}

const json& require(const json& j, std::string_view key, const std::string& path) {
    expect_object(j, path);
    auto it = j.find(key);
    if (it == j.end()) violation(child(path, key), "required field is missing");
    return *it;
}

const json* optional_field(const json& j, std::string_view key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) violation(path, "expected a string");
    return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) violation(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) violation(path, "expected a finite number");
    return v;
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) violation(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        violation(path, "integer out of range");
    return static_cast<int>(v);
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) violation(path, "expected a boolean");
    return j.get<bool>();
}

ConceptId as_id(const json& j, const std::string& path) {
    auto s = as_string(j, path);
    if (!is_valid_concept_code(s)) violation(path, "invalid concept id '" + s + "'");
    return ConceptId(std::move(s));
}

json encode_ranking(const std::vector<std::pair<ConceptId, double>>& ranking) {
    json out = json::array();
    for (const auto& [id, v] : ranking) out.push_back({{"id", id.str()}, {"centrality", v}});
    return out;
}

json encode_ids(const std::vector<ConceptId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

}  // namespace

json encode(const FcmModel& model) {
    json concepts = json::array();
    for (const auto& c : model.concepts()) {
        json cj = {{"id", c.id.str()}, {"name", c.name}, {"group", std::string(to_string(c.group))}};
        if (!c.description.empty()) cj["description"] = c.description;
        concepts.push_back(std::move(cj));
    }
    json edges = json::array();
    for (const auto& e : model.edges()) {
        edges.push_back({{"source", e.source.str()}, {"target", e.target.str()}, {"weight", e.weight}});
    }
    return {{"name", model.name()}, {"concepts", std::move(concepts)}, {"edges", std::move(edges)}};
}

ModelParts decode_model_parts(const json& j, const std::string& path) {
    expect_object(j, path);
    ModelParts parts;
    if (const auto* n = optional_field(j, "name")) parts.name = as_string(*n, child(path, "name"));
    auto& concepts = parts.concepts;
    auto& edges = parts.edges;

    const auto concepts_path = child(path, "concepts");
    const auto& cj = require(j, "concepts", path);
    expect_array(cj, concepts_path);
    for (std::size_t i = 0; i < cj.size(); ++i) {
        const auto p = child(concepts_path, i);
        const auto& c = cj[i];
        Concept concept_;
        concept_.id = as_id(require(c, "id", p), child(p, "id"));
        concept_.name = concept_.id.str();
        if (const auto* n = optional_field(c, "name")) concept_.name = as_string(*n, child(p, "name"));
        concept_.group = group_from_code(concept_.id.str());
        if (const auto* g = optional_field(c, "group")) {
            auto text = as_string(*g, child(p, "group"));
            auto parsed = parse_concept_group(text);
            if (!parsed) violation(child(p, "group"), "unknown group '" + text + "'");
            concept_.group = *parsed;
        }
        if (const auto* d = optional_field(c, "description"))
            concept_.description = as_string(*d, child(p, "description"));
        concepts.push_back(std::move(concept_));
    }

    const auto edges_path = child(path, "edges");
    if (const auto* ej = optional_field(j, "edges")) {
        expect_array(*ej, edges_path);
        for (std::size_t i = 0; i < ej->size(); ++i) {
            const auto p = child(edges_path, i);
            const auto& e = (*ej)[i];
            edges.push_back({as_id(require(e, "source", p), child(p, "source")),
                             as_id(require(e, "target", p), child(p, "target")),
                             as_number(require(e, "weight", p), child(p, "weight"))});
        }
    }
    return parts;
}

FcmModel decode_model(const json& j, const std::string& path) {
    auto [name, concepts, edges] = decode_model_parts(j, path);
    const auto concepts_path = child(path, "concepts");
    const auto edges_path = child(path, "edges");
    auto violations = validate_parts(concepts, edges);
    if (!violations.empty()) {
        const auto& v = violations.front();
        std::string where = path;
        if (v.kind == ViolationKind::DuplicateConceptId || v.kind == ViolationKind::EmptyConceptId ||
            v.kind == ViolationKind::InvalidConceptId) {
            for (std::size_t i = concepts.size(); i-- > 0;) {
                if (concepts[i].id == v.ids.front()) { where = child(concepts_path, i); break; }
            }
        } else {
            for (std::size_t i = edges.size(); i-- > 0;) {
                if (edges[i].source == v.ids.at(0) && edges[i].target == v.ids.at(1)) {
                    where = child(edges_path, i);
                    break;
                }
            }
        }
        violation(where, std::string(to_string(v.kind)) + ": " + v.message);
    }
    return build_model(std::move(name), std::move(concepts), std::move(edges));
}

json encode(const InferenceConfig& c) {
    json init;
    if (std::holds_alternative<NeutralActivation>(c.initial_activation)) init = "neutral";
    else init = std::get<double>(c.initial_activation);
    json out = {{"kernel", std::string(to_string(c.kernel))},
                {"squash", {{"kind", std::string(to_string(c.squash.kind))},
                            {"steepness", c.squash.steepness}}},
                {"initial_activation", init},
                {"tolerance", c.tolerance},
                {"max_iterations", c.max_iterations},
                {"cycle_detection_window", c.cycle_detection_window}};
    if (c.record_trajectory) out["record_trajectory"] = true;
    return out;
}

InferenceConfig decode_config(const json& j, const std::string& path) {
    expect_object(j, path);
    InferenceConfig c;
    if (const auto* k = optional_field(j, "kernel")) {
        auto text = as_string(*k, child(path, "kernel"));
        auto kind = parse_kernel_kind(text);
        if (!kind) violation(child(path, "kernel"), "unknown kernel '" + text + "'");
        c.kernel = *kind;
    }
    if (const auto* s = optional_field(j, "squash")) {
        const auto sp = child(path, "squash");
        expect_object(*s, sp);
        if (const auto* k = optional_field(*s, "kind")) {
            auto text = as_string(*k, child(sp, "kind"));
            auto kind = parse_squash_kind(text);
            if (!kind) violation(child(sp, "kind"), "unknown squash kind '" + text + "'");
            c.squash.kind = *kind;
        }
        if (const auto* st = optional_field(*s, "steepness")) {
            c.squash.steepness = as_number(*st, child(sp, "steepness"));
            if (!(c.squash.steepness > 0)) violation(child(sp, "steepness"), "must be > 0");
        }
    }
    if (const auto* init = optional_field(j, "initial_activation")) {
        const auto ip = child(path, "initial_activation");
        if (init->is_string()) {
            if (init->get<std::string>() != "neutral") violation(ip, "expected \"neutral\" or a number");
            c.initial_activation = NeutralActivation{};
        } else {
            const double v = as_number(*init, ip);
            if (v < -1.0 || v > 1.0) violation(ip, "must lie in [-1, 1]");
            c.initial_activation = v;
        }
    }
    if (const auto* t = optional_field(j, "tolerance")) {
        c.tolerance = as_number(*t, child(path, "tolerance"));
        if (!(c.tolerance > 0)) violation(child(path, "tolerance"), "must be > 0");
    }
    if (const auto* m = optional_field(j, "max_iterations")) {
        c.max_iterations = as_int(*m, child(path, "max_iterations"));
        if (c.max_iterations < 1) violation(child(path, "max_iterations"), "must be >= 1");
    }
    if (const auto* w = optional_field(j, "cycle_detection_window")) {
        c.cycle_detection_window = as_int(*w, child(path, "cycle_detection_window"));
        if (c.cycle_detection_window < 1) violation(child(path, "cycle_detection_window"), "must be >= 1");
    }
    if (const auto* r = optional_field(j, "record_trajectory"))
        c.record_trajectory = as_bool(*r, child(path, "record_trajectory"));
    return c;
}

json encode_clamps(const Clamps& clamps) {
    json out = json::object();
    for (const auto& [id, v] : clamps) out[id.str()] = v;
    return out;
}

Clamps decode_clamps(const json& j, const std::string& path) {
    expect_object(j, path);
    Clamps out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto p = child(path, it.key());
        if (!is_valid_concept_code(it.key())) violation(p, "invalid concept id '" + it.key() + "'");
        const double v = as_number(it.value(), p);
        if (v < -1.0 || v > 1.0) violation(p, "clamp value must lie in [-1, 1]");
        out[ConceptId(it.key())] = v;
    }
    return out;
}

json encode(const ScenarioSpec& s) {
    json out = {{"name", s.name}, {"model_ref", s.model_ref}, {"clamps", encode_clamps(s.clamps)}};
    if (s.config_override) out["config"] = encode(*s.config_override);
    return out;
}

ScenarioSpec decode_scenario(const json& j, const std::string& path) {
    ScenarioSpec s;
    s.name = as_string(require(j, "name", path), child(path, "name"));
    if (const auto* m = optional_field(j, "model_ref")) s.model_ref = as_string(*m, child(path, "model_ref"));
    if (const auto* c = optional_field(j, "clamps")) s.clamps = decode_clamps(*c, child(path, "clamps"));
    if (const auto* c = optional_field(j, "config")) s.config_override = decode_config(*c, child(path, "config"));
    return s;
}

json encode(const StateVector& state) {
    json out = json::object();
    for (std::size_t i = 0; i < state.size(); ++i) out[state.ids[i].str()] = state.values[i];
    return out;
}

StateVector decode_state(const json& j, const std::string& path) {
    expect_object(j, path);
    StateVector s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto p = child(path, it.key());
        if (!is_valid_concept_code(it.key())) violation(p, "invalid concept id");
        s.ids.emplace_back(it.key());
        s.values.push_back(as_number(it.value(), p));
    }
    return s;
}

json encode(const SteadyStateResult& r) {
    json out = {{"status", std::string(to_string(r.status))}, {"iterations", r.iterations}};
    if (r.status == RunStatus::LimitCycle) out["period"] = r.period;
    out["final_state"] = encode(r.final_state);
    if (r.trajectory) {
        json t = json::array();
        for (const auto& s : *r.trajectory) t.push_back(encode(s));
        out["trajectory"] = std::move(t);
    }
    return out;
}

SteadyStateResult decode_steady_state(const json& j, const std::string& path) {
    SteadyStateResult r;
    const auto sp = child(path, "status");
    const auto status = as_string(require(j, "status", path), sp);
    if (status == "converged") r.status = RunStatus::Converged;
    else if (status == "limit-cycle") r.status = RunStatus::LimitCycle;
    else if (status == "max-iterations-reached") r.status = RunStatus::MaxIterationsReached;
    else violation(sp, "unknown status '" + status + "'");
    r.iterations = as_int(require(j, "iterations", path), child(path, "iterations"));
    if (const auto* p = optional_field(j, "period")) r.period = as_int(*p, child(path, "period"));
    r.final_state = decode_state(require(j, "final_state", path), child(path, "final_state"));
    if (const auto* t = optional_field(j, "trajectory")) {
        const auto tp = child(path, "trajectory");
        expect_array(*t, tp);
        auto& traj = r.trajectory.emplace();
        for (std::size_t i = 0; i < t->size(); ++i) traj.push_back(decode_state((*t)[i], child(tp, i)));
    }
    return r;
}

json encode(const ScenarioOutcome& o) {
    json change = json::object();
    for (std::size_t i = 0; i < o.ids.size(); ++i) change[o.ids[i].str()] = o.relative_change[i];
    return {{"scenario_name", o.scenario_name},
            {"converged", o.converged()},
            {"relative_change", std::move(change)},
            {"baseline", encode(o.baseline)},
            {"clamped", encode(o.clamped)}};
}

ScenarioOutcome decode_outcome(const json& j, const std::string& path) {
    ScenarioOutcome o;
    o.scenario_name = as_string(require(j, "scenario_name", path), child(path, "scenario_name"));
    auto change = decode_state(require(j, "relative_change", path), child(path, "relative_change"));
    o.ids = std::move(change.ids);
    o.relative_change = std::move(change.values);
    o.baseline = decode_steady_state(require(j, "baseline", path), child(path, "baseline"));
    o.clamped = decode_steady_state(require(j, "clamped", path), child(path, "clamped"));
    return o;
}

json encode(const MetricsReport& r) {
    json centrality = json::object(), in = json::object(), out = json::object(), classes = json::object();
    for (std::size_t i = 0; i < r.ids.size(); ++i) {
        const auto& id = r.ids[i].str();
        centrality[id] = r.centrality[i];
        in[id] = r.indegree[i];
        out[id] = r.outdegree[i];
        auto c = r.classes.find(r.ids[i]);
        classes[id] = c == r.classes.end() ? json("isolated") : json(std::string(to_string(c->second)));
    }
    json complexity = r.complexity_score ? json(*r.complexity_score) : json(nullptr);
    return {{"concept_count", r.concept_count},
            {"connection_count", r.connection_count},
            {"density", r.density},
            {"connections_per_component", r.connections_per_component},
            {"complexity_score", complexity},
            {"transmitter_count", r.transmitter_count},
            {"receiver_count", r.receiver_count},
            {"ordinary_count", r.ordinary_count},
            {"centrality", std::move(centrality)},
            {"indegree", std::move(in)},
            {"outdegree", std::move(out)},
            {"classes", std::move(classes)},
            {"isolated", encode_ids(r.isolated)}};
}

json encode(const Violation& v) {
    return {{"kind", std::string(to_string(v.kind))}, {"ids", encode_ids(v.ids)}, {"message", v.message}};
}

json encode(const StructuralIdentity& s) {
    auto concept_list = [](const auto& items) {
        json out = json::array();
        for (const auto& [k, id] : items) out.push_back({{"model", k}, {"id", id.str()}});
        return out;
    };
    auto edge_list = [](const auto& items) {
        json out = json::array();
        for (const auto& [k, e] : items)
            out.push_back({{"model", k}, {"source", e.first.str()}, {"target", e.second.str()}});
        return out;
    };
    return {{"identical", s.identical},
            {"order_differs", s.order_differs},
            {"concepts_missing", concept_list(s.concepts_missing)},
            {"concepts_extra", concept_list(s.concepts_extra)},
            {"edges_missing", edge_list(s.edges_missing)},
            {"edges_extra", edge_list(s.edges_extra)}};
}

StructuralIdentity decode_identity(const json& j, const std::string& path) {
    StructuralIdentity s;
    s.identical = as_bool(require(j, "identical", path), child(path, "identical"));
    if (const auto* o = optional_field(j, "order_differs")) s.order_differs = as_bool(*o, child(path, "order_differs"));
    auto concepts = [&](std::string_view key, auto& dest) {
        const auto* a = optional_field(j, key);
        if (!a) return;
        const auto p = child(path, key);
        expect_array(*a, p);
        for (std::size_t i = 0; i < a->size(); ++i) {
            const auto ip = child(p, i);
            const auto k = static_cast<std::size_t>(as_int(require((*a)[i], "model", ip), child(ip, "model")));
            dest.emplace_back(k, as_id(require((*a)[i], "id", ip), child(ip, "id")));
        }
    };
    auto edges = [&](std::string_view key, auto& dest) {
        const auto* a = optional_field(j, key);
        if (!a) return;
        const auto p = child(path, key);
        expect_array(*a, p);
        for (std::size_t i = 0; i < a->size(); ++i) {
            const auto ip = child(p, i);
            const auto k = static_cast<std::size_t>(as_int(require((*a)[i], "model", ip), child(ip, "model")));
            dest.emplace_back(k, std::pair{as_id(require((*a)[i], "source", ip), child(ip, "source")),
                                           as_id(require((*a)[i], "target", ip), child(ip, "target"))});
        }
    };
    concepts("concepts_missing", s.concepts_missing);
    concepts("concepts_extra", s.concepts_extra);
    edges("edges_missing", s.edges_missing);
    edges("edges_extra", s.edges_extra);
    return s;
}

json encode(const ComparisonReport& r) {
    json outcomes = json::object();
    json rankings = json::object();
    for (const auto& name : r.scenarios) {
        if (auto it = r.outcomes.find(name); it != r.outcomes.end()) outcomes[name] = encode(it->second);
        if (auto it = r.centrality_rankings.find(name); it != r.centrality_rankings.end())
            rankings[name] = encode_ranking(it->second);
    }
    json table = json::array();
    for (const auto& row : r.per_concept_table) {
        json changes = json::array();
        for (const auto& c : row.changes) changes.push_back(c ? json(*c) : json(nullptr));
        table.push_back({{"id", row.id.str()}, {"changes", std::move(changes)}});
    }
    json scenarios = json::array();
    for (const auto& s : r.scenarios) scenarios.push_back(s);
    json non_converged = json::array();
    for (const auto& s : r.non_converged) non_converged.push_back(s);
    return {{"scenarios", std::move(scenarios)},
            {"structural_identity", encode(r.structural_identity)},
            {"per_concept_table", std::move(table)},
            {"centrality_rankings", std::move(rankings)},
            {"non_converged", std::move(non_converged)},
            {"outcomes", std::move(outcomes)}};
}

ComparisonReport decode_report(const json& j, const std::string& path) {
    ComparisonReport r;
    const auto sp = child(path, "scenarios");
    const auto& scenarios = require(j, "scenarios", path);
    expect_array(scenarios, sp);
    for (std::size_t i = 0; i < scenarios.size(); ++i) r.scenarios.push_back(as_string(scenarios[i], child(sp, i)));

    if (const auto* s = optional_field(j, "structural_identity"))
        r.structural_identity = decode_identity(*s, child(path, "structural_identity"));

    const auto tp = child(path, "per_concept_table");
    if (const auto* t = optional_field(j, "per_concept_table")) {
        expect_array(*t, tp);
        for (std::size_t i = 0; i < t->size(); ++i) {
            const auto rp = child(tp, i);
            ComparisonRow row;
            row.id = as_id(require((*t)[i], "id", rp), child(rp, "id"));
            const auto cp = child(rp, "changes");
            const auto& changes = require((*t)[i], "changes", rp);
            expect_array(changes, cp);
            for (std::size_t k = 0; k < changes.size(); ++k) {
                if (changes[k].is_null()) row.changes.emplace_back();
                else row.changes.emplace_back(as_number(changes[k], child(cp, k)));
            }
            r.per_concept_table.push_back(std::move(row));
        }
    }
    if (const auto* rk = optional_field(j, "centrality_rankings")) {
        const auto rp = child(path, "centrality_rankings");
        expect_object(*rk, rp);
        for (auto it = rk->begin(); it != rk->end(); ++it) {
            const auto np = child(rp, it.key());
            expect_array(it.value(), np);
            auto& dest = r.centrality_rankings[it.key()];
            for (std::size_t i = 0; i < it.value().size(); ++i) {
                const auto ep = child(np, i);
                dest.emplace_back(as_id(require(it.value()[i], "id", ep), child(ep, "id")),
                                  as_number(require(it.value()[i], "centrality", ep), child(ep, "centrality")));
            }
        }
    }
    if (const auto* nc = optional_field(j, "non_converged")) {
        const auto np = child(path, "non_converged");
        expect_array(*nc, np);
        for (std::size_t i = 0; i < nc->size(); ++i) r.non_converged.push_back(as_string((*nc)[i], child(np, i)));
    }
    if (const auto* o = optional_field(j, "outcomes")) {
        const auto op = child(path, "outcomes");
        expect_object(*o, op);
        for (auto it = o->begin(); it != o->end(); ++it)
            r.outcomes.emplace(it.key(), decode_outcome(it.value(), child(op, it.key())));
    }
    return r;
}

}  // namespace fcm::json
