// fcm-service: HTTP API over the model registry.
// Every flag has an environment fallback (FCM_HOST, FCM_PORT, FCM_STORAGE,
// FCM_CORS, FCM_UI_DIR, FCM_MAX_ITERATIONS_CAP).

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "fcm/service.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy cognitive map HTTP service", "fcm-service"};
    std::string host = "127.0.0.1";
    int port = 8080;
    fcm::service::Options options;
    std::string storage = options.storage_dir.string();
    std::string ui_dir;
    app.add_option("--host", host, "Bind address")->envname("FCM_HOST")->capture_default_str();
    app.add_option("--port", port, "Bind port (0 = any free port)")->envname("FCM_PORT")->capture_default_str();
    app.add_option("--storage", storage, "Model registry directory")->envname("FCM_STORAGE")->capture_default_str();
    app.add_flag("--cors", options.cors, "Send permissive cross-origin headers")->envname("FCM_CORS");
    app.add_option("--ui-dir", ui_dir, "Static UI bundle served at /")->envname("FCM_UI_DIR");
    app.add_option("--max-iterations-cap", options.max_iterations_cap, "Server-side cap on max_iterations")
        ->envname("FCM_MAX_ITERATIONS_CAP")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    options.storage_dir = storage;
    if (!ui_dir.empty()) options.ui_dir = ui_dir;
    try {
        fcm::service::Service service(options);
        fcm::service::HttpServer server(service);
        const int bound = server.bind(host, port);
        if (bound < 0) {
            std::cerr << "error: cannot bind " << host << ":" << port << '\n';
            return 2;
        }
        std::cout << "fcm-service listening on http://" << host << ":" << bound << " (storage "
                  << options.storage_dir.string() << ")" << std::endl;
        return server.listen() ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
