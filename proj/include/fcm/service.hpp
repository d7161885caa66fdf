#pragma once

// HTTP facade: a file-backed model registry plus metrics, run and compare
// endpoints. Routing lives in Service::handle so it can be exercised
// without a socket; HttpServer wires it to cpp-httplib.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcm/io.hpp"
#include "fcm/json_codec.hpp"

namespace fcm::service {

inline constexpr int kDefaultMaxIterationsCap = 10000;

struct Options {
    std::filesystem::path storage_dir = "fcm-models";
    bool cors = false;
    std::optional<std::filesystem::path> ui_dir;  // static bundle mounted at "/"
    int max_iterations_cap = kDefaultMaxIterationsCap;
};

struct Entry {
    std::string id;
    std::string created;  // ISO 8601 UTC
    std::string updated;
    io::ModelDocument document;
};

/// Directory of `<id>.json` files, each holding {id, created, updated, document}.
/// Writes go to a temporary file and are renamed into place.
class ModelStore {
public:
    explicit ModelStore(std::filesystem::path dir);

    std::vector<Entry> list() const;
    std::optional<Entry> get(const std::string& id) const;
    Entry create(io::ModelDocument doc);
    /// nullopt if the id is unknown.
    std::optional<Entry> replace(const std::string& id, io::ModelDocument doc);
    bool remove(const std::string& id);

    /// Ids are 1-64 chars of [A-Za-z0-9_-]; anything else never reaches the filesystem.
    static bool valid_id(std::string_view id);

private:
    void persist(const Entry& e) const;

    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::map<std::string, Entry> entries_;
};

struct Response {
    int status = 200;
    json::json body;
};

using Query = std::map<std::string, std::string>;

class Service {
public:
    explicit Service(Options options);

    /// Dispatches one API request. `path` excludes the query string.
    Response handle(std::string_view method, std::string_view path, std::string_view body,
                    const Query& query = {});

    const Options& options() const { return options_; }
    ModelStore& store() { return store_; }

private:
    Options options_;
    ModelStore store_;
};

/// cpp-httplib server bound to a Service.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds host:port (port 0 picks a free one). Returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    /// Serves on a background thread.
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fcm::service
