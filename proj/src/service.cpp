#include "fcm/service.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "fcm/fixtures.hpp"
#include "fcm/metrics.hpp"
#include "fcm/scenario.hpp"

namespace fcm::service {

namespace fs = std::filesystem;
using Json = json::json;

namespace {

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

std::string random_id() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

Json encode_entry(const Entry& e) {
    return {{"id", e.id},
            {"created", e.created},
            {"updated", e.updated},
            {"document", Json::parse(io::write_document(e.document))}};
}

}  // namespace

// ---- ModelStore ------------------------------------------------------------

bool ModelStore::valid_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    });
}

ModelStore::ModelStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    for (const auto& f : fs::directory_iterator(dir_)) {
        if (!f.is_regular_file() || f.path().extension() != ".json") continue;
        const auto id = f.path().stem().string();
        if (!valid_id(id)) continue;
        try {
            const auto j = Json::parse(io::read_text_file(f.path()));
            Entry e;
            e.id = id;
            e.created = j.at("created").get<std::string>();
            e.updated = j.at("updated").get<std::string>();
            e.document = io::read_document(j.at("document").dump());
            entries_.emplace(id, std::move(e));
        } catch (const std::exception&) {
            // Unreadable entries stay on disk untouched and are not served.
        }
    }
}

void ModelStore::persist(const Entry& e) const {
    const auto target = dir_ / (e.id + ".json");
    const auto tmp = dir_ / (e.id + ".json.tmp");
    io::write_text_file(tmp, encode_entry(e).dump(2) + "\n");
    fs::rename(tmp, target);
}

std::vector<Entry> ModelStore::list() const {
    std::lock_guard lock(mu_);
    std::vector<Entry> out;
    for (const auto& [id, e] : entries_) out.push_back(e);
    return out;
}

std::optional<Entry> ModelStore::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

Entry ModelStore::create(io::ModelDocument doc) {
    Entry e;
    e.created = e.updated = now_iso8601();
    e.document = std::move(doc);
    std::lock_guard lock(mu_);
    do {
        e.id = random_id();
    } while (entries_.count(e.id) || fixtures::scenario_from_id(e.id));
    persist(e);
    entries_.emplace(e.id, e);
    return e;
}

std::optional<Entry> ModelStore::replace(const std::string& id, io::ModelDocument doc) {
    std::lock_guard lock(mu_);
    auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    Entry e = it->second;
    e.document = std::move(doc);
    e.updated = now_iso8601();
    persist(e);
    it->second = e;
    return e;
}

bool ModelStore::remove(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = entries_.find(id);
    if (it == entries_.end()) return false;
    std::error_code ec;
    fs::remove(dir_ / (id + ".json"), ec);
    entries_.erase(it);
    return true;
}

// ---- request handling --------------------------------------------------------

namespace {

struct ApiError {
    int status;
    std::string kind;
    std::string message;
    Json detail = Json::object();
};

Response error_response(const ApiError& e) {
    Json err = {{"kind", e.kind}, {"message", e.message}};
    for (auto it = e.detail.begin(); it != e.detail.end(); ++it) err[it.key()] = it.value();
    return {e.status, {{"error", std::move(err)}}};
}

Json parse_body(std::string_view body) {
    if (body.empty()) return Json::object();
    try {
        return Json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ApiError{400, "malformed_json", e.what(), {{"path", ""}, {"byte", e.byte}}};
    }
}

// Validates every concept and edge so the client sees all violations at once.
io::ModelDocument decode_document(const Json& j) {
    if (!j.is_object()) throw ApiError{400, "schema_violation", "expected a model document object", {{"path", ""}}};
    if (j.contains("model")) {
        const auto parts = json::decode_model_parts(j["model"], "/model");
        const auto violations = validate_parts(parts.concepts, parts.edges);
        if (!violations.empty()) {
            Json vs = Json::array();
            for (const auto& v : violations) vs.push_back(json::encode(v));
            throw ApiError{400, "validation_failed",
                           std::to_string(violations.size()) + " model violation(s)",
                           {{"path", "/model"}, {"violations", std::move(vs)}}};
        }
    }
    return io::read_document(j.dump());
}

struct Resolved {
    std::string id;
    io::ModelDocument document;
    bool read_only = false;
};

std::optional<Resolved> resolve(ModelStore& store, const std::string& id) {
    if (auto k = fixtures::scenario_from_id(id)) return Resolved{id, fixtures::document(*k), true};
    if (!ModelStore::valid_id(id)) return std::nullopt;
    if (auto e = store.get(id)) return Resolved{id, e->document, false};
    return std::nullopt;
}

Resolved require(ModelStore& store, const std::string& id) {
    auto r = resolve(store, id);
    if (!r) throw ApiError{404, "not_found", "no model with id '" + id + "'"};
    return *std::move(r);
}

Json summary(const std::string& id, const io::ModelDocument& doc, bool read_only, const Entry* entry) {
    Json j = {{"id", id},
              {"name", doc.model.name()},
              {"concepts", doc.model.size()},
              {"edges", doc.model.edges().size()},
              {"scenarios", Json::array()},
              {"read_only", read_only}};
    for (const auto& s : doc.scenarios) j["scenarios"].push_back(s.name);
    if (entry) {
        j["created"] = entry->created;
        j["updated"] = entry->updated;
    }
    return j;
}

InferenceConfig effective_config(InferenceConfig config, const Json& body, const std::string& path, int cap) {
    if (auto it = body.find("config"); it != body.end() && !it->is_null()) {
        // Partial overrides on top of the scenario's or document's config.
        if (!it->is_object()) throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, path, "expected an object");
        Json merged = json::encode(config);
        for (auto f = it->begin(); f != it->end(); ++f) merged[f.key()] = f.value();
        config = json::decode_config(merged, path);
    }
    config.max_iterations = std::min(config.max_iterations, cap);
    return config;
}

ScenarioSpec scenario_for(const Resolved& model, const Json& body, const std::string& path) {
    ScenarioSpec spec;
    spec.model_ref = model.id;
    if (auto it = body.find("scenario"); it != body.end() && !it->is_null()) {
        if (!it->is_string())
            throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, path + "/scenario", "expected a string");
        const auto name = it->get<std::string>();
        auto found = std::find_if(model.document.scenarios.begin(), model.document.scenarios.end(),
                                  [&](const ScenarioSpec& s) { return s.name == name; });
        if (found == model.document.scenarios.end())
            throw ApiError{422, "unknown_scenario", "model '" + model.id + "' has no scenario '" + name + "'",
                           {{"path", path + "/scenario"}}};
        spec = *found;
        spec.model_ref = model.id;
    }
    if (auto it = body.find("clamps"); it != body.end() && !it->is_null()) {
        for (const auto& [id, v] : json::decode_clamps(*it, path + "/clamps")) spec.clamps[id] = v;
    }
    if (auto it = body.find("name"); it != body.end() && !it->is_null()) {
        if (!it->is_string())
            throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, path + "/name", "expected a string");
        spec.name = it->get<std::string>();
    }
    if (spec.name.empty()) spec.name = spec.clamps.empty() ? "no-clamps" : "custom";
    return spec;
}

DensityDenominator density_from_query(const Query& q) {
    auto it = q.find("density");
    if (it == q.end() || it->second == "no-self-loops") return DensityDenominator::NoSelfLoops;
    if (it->second == "square") return DensityDenominator::Square;
    throw ApiError{400, "bad_query", "density must be 'no-self-loops' or 'square'", {{"path", "?density"}}};
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        auto j = path.find('/', i);
        if (j == std::string_view::npos) j = path.size();
        if (j > i) out.emplace_back(path.substr(i, j - i));
        i = j;
    }
    return out;
}

Response method_not_allowed(std::string_view method) {
    return error_response({405, "method_not_allowed", "method " + std::string(method) + " is not allowed here"});
}

}  // namespace

Service::Service(Options options) : options_(std::move(options)), store_(options_.storage_dir) {}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body,
                         const Query& query) {
    const auto seg = split_path(path);
    try {
        if (seg.empty() || seg[0] != "api")
            throw ApiError{404, "not_found", "no route for " + std::string(path)};

        if (seg.size() == 2 && seg[1] == "health") {
            return {200, {{"status", "ok"}, {"format_version", io::kFormatVersion},
                          {"max_iterations_cap", options_.max_iterations_cap}}};
        }

        if (seg.size() >= 2 && seg[1] == "fixtures") {
            if (method != "GET") return method_not_allowed(method);
            if (seg.size() == 2) {
                Json list = Json::array();
                for (int k = 1; k <= fixtures::kScenarioCount; ++k)
                    list.push_back(summary(fixtures::fixture_id(k), fixtures::document(k), true, nullptr));
                return {200, std::move(list)};
            }
            if (seg.size() == 3) {
                auto k = fixtures::scenario_from_id(seg[2]);
                if (!k) throw ApiError{404, "not_found", "no fixture with id '" + seg[2] + "'"};
                return {200, Json::parse(io::write_document(fixtures::document(*k)))};
            }
        }

        if (seg.size() >= 2 && seg[1] == "models") {
            if (seg.size() == 2) {
                if (method == "GET") {
                    Json list = Json::array();
                    for (int k = 1; k <= fixtures::kScenarioCount; ++k)
                        list.push_back(summary(fixtures::fixture_id(k), fixtures::document(k), true, nullptr));
                    for (const auto& e : store_.list()) list.push_back(summary(e.id, e.document, false, &e));
                    return {200, std::move(list)};
                }
                if (method == "POST") {
                    auto entry = store_.create(decode_document(parse_body(body)));
                    return {201, encode_entry(entry)};
                }
                return method_not_allowed(method);
            }

            const std::string& id = seg[2];
            if (seg.size() == 3) {
                if (method == "GET") {
                    if (auto k = fixtures::scenario_from_id(id)) {
                        Entry e{id, "", "", fixtures::document(*k)};
                        Json j = encode_entry(e);
                        j.erase("created");
                        j.erase("updated");
                        j["read_only"] = true;
                        return {200, std::move(j)};
                    }
                    auto e = ModelStore::valid_id(id) ? store_.get(id) : std::nullopt;
                    if (!e) throw ApiError{404, "not_found", "no model with id '" + id + "'"};
                    return {200, encode_entry(*e)};
                }
                if (method == "PUT" || method == "DELETE") {
                    if (fixtures::scenario_from_id(id))
                        throw ApiError{409, "read_only", "bundled fixture '" + id + "' cannot be modified"};
                    if (!ModelStore::valid_id(id)) throw ApiError{404, "not_found", "no model with id '" + id + "'"};
                    if (method == "DELETE") {
                        if (!store_.remove(id)) throw ApiError{404, "not_found", "no model with id '" + id + "'"};
                        return {200, {{"deleted", id}}};
                    }
                    if (!store_.get(id)) throw ApiError{404, "not_found", "no model with id '" + id + "'"};
                    auto e = store_.replace(id, decode_document(parse_body(body)));
                    if (!e) throw ApiError{404, "not_found", "no model with id '" + id + "'"};
                    return {200, encode_entry(*e)};
                }
                return method_not_allowed(method);
            }

            if (seg.size() == 4 && seg[3] == "metrics") {
                if (method != "GET") return method_not_allowed(method);
                const auto denom = density_from_query(query);
                const auto r = require(store_, id);
                return {200, json::encode(structural_metrics(r.document.model, denom))};
            }

            if (seg.size() == 4 && seg[3] == "run") {
                if (method != "POST") return method_not_allowed(method);
                const auto r = require(store_, id);
                const auto req = parse_body(body);
                if (!req.is_object()) throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "", "expected an object");
                auto spec = scenario_for(r, req, "");
                const auto base = spec.config_override.value_or(r.document.config.value_or(InferenceConfig{}));
                auto config = effective_config(base, req, "/config", options_.max_iterations_cap);
                spec.config_override.reset();
                return {200, json::encode(run_scenario(r.document.model, spec, config))};
            }
        }

        if (seg.size() == 2 && seg[1] == "compare") {
            if (method != "POST") return method_not_allowed(method);
            const auto req = parse_body(body);
            if (!req.is_object()) throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "", "expected an object");

            ModelRegistry registry;
            std::vector<ScenarioSpec> scenarios;
            std::map<std::string, Resolved> resolved;
            auto get = [&](const std::string& mid) -> const Resolved& {
                auto it = resolved.find(mid);
                if (it == resolved.end()) {
                    it = resolved.emplace(mid, require(store_, mid)).first;
                    registry.emplace(mid, it->second.document.model);
                }
                return it->second;
            };

            if (auto it = req.find("runs"); it != req.end()) {
                if (!it->is_array()) throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "/runs", "expected an array");
                for (std::size_t i = 0; i < it->size(); ++i) {
                    const auto p = "/runs/" + std::to_string(i);
                    const auto& run = (*it)[i];
                    if (!run.is_object() || !run.contains("model") || !run["model"].is_string())
                        throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, p + "/model",
                                              "each run needs a string 'model' id");
                    const auto& m = get(run["model"].get<std::string>());
                    auto spec = scenario_for(m, run, p);
                    if (!run.contains("scenario") && !run.contains("name")) spec.name = m.id + ":" + spec.name;
                    spec.config_override.reset();
                    scenarios.push_back(std::move(spec));
                }
            } else if (auto mit = req.find("models"); mit != req.end()) {
                if (!mit->is_array()) throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "/models", "expected an array");
                for (std::size_t i = 0; i < mit->size(); ++i) {
                    if (!(*mit)[i].is_string())
                        throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "/models/" + std::to_string(i),
                                              "expected a string id");
                    const auto& m = get((*mit)[i].get<std::string>());
                    if (m.document.scenarios.empty())
                        throw ApiError{422, "no_scenarios", "model '" + m.id + "' defines no scenarios",
                                       {{"path", "/models/" + std::to_string(i)}}};
                    for (auto s : m.document.scenarios) {
                        s.model_ref = m.id;
                        s.config_override.reset();
                        scenarios.push_back(std::move(s));
                    }
                }
            } else {
                throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "", "expected 'runs' or 'models'");
            }

            InferenceConfig config;
            if (auto it = req.find("config"); it != req.end() && !it->is_null())
                config = json::decode_config(*it, "/config");
            config.max_iterations = std::min(config.max_iterations, options_.max_iterations_cap);
            std::size_t depth = 5;
            if (auto it = req.find("top"); it != req.end()) {
                if (!it->is_number_integer() || it->get<long long>() < 1)
                    throw io::SchemaError(io::SchemaError::Kind::SchemaViolation, "/top", "expected an integer >= 1");
                depth = it->get<std::size_t>();
            }
            return {200, json::encode(compare_scenarios(scenarios, registry, config, depth))};
        }

        throw ApiError{404, "not_found", "no route for " + std::string(method) + " " + std::string(path)};
    } catch (const ApiError& e) {
        return error_response(e);
    } catch (const io::SchemaError& e) {
        return error_response({400,
                               e.kind() == io::SchemaError::Kind::UnsupportedVersion ? "unsupported_version"
                                                                                      : "schema_violation",
                               e.what(),
                               {{"path", e.path()}}});
    } catch (const ModelError& e) {
        return error_response({400, "validation_failed", e.what(), {{"violations", Json::array({json::encode(e.violation())})}}});
    } catch (const InferenceError& e) {
        return error_response({422, std::string(to_string(e.kind())), e.what(), {{"concept", e.id().str()}}});
    } catch (const ResolutionError& e) {
        return error_response({422, "unresolved", e.what()});
    } catch (const std::invalid_argument& e) {
        return error_response({400, "invalid_argument", e.what()});
    } catch (const io::FileError& e) {
        return error_response({500, "storage", e.what()});
    } catch (const std::filesystem::filesystem_error& e) {
        return error_response({500, "storage", e.what()});
    }
}

// ---- httplib glue ----------------------------------------------------------

struct HttpServer::Impl {
    httplib::Server server;
    std::thread thread;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>()) {
    auto& server = impl_->server;
    const bool cors = service.options().cors;

    auto dispatch = [&service, cors](const httplib::Request& req, httplib::Response& res) {
        Query q;
        for (const auto& [k, v] : req.params) q.emplace(k, v);
        const auto r = service.handle(req.method, req.path, req.body, q);
        res.status = r.status;
        res.set_content(r.body.dump(2) + "\n", "application/json");
        if (cors) res.set_header("Access-Control-Allow-Origin", "*");
    };
    const std::string pattern = R"(/api(/.*)?)";
    server.Get(pattern, dispatch);
    server.Post(pattern, dispatch);
    server.Put(pattern, dispatch);
    server.Delete(pattern, dispatch);
    server.Options(pattern, [cors](const httplib::Request&, httplib::Response& res) {
        res.status = cors ? 204 : 405;
        if (cors) {
            res.set_header("Access-Control-Allow-Origin", "*");
            res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        }
    });
    if (const auto& ui = service.options().ui_dir) server.set_mount_point("/", ui->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::start() {
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace fcm::service
