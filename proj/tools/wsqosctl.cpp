#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wsqos/config.hpp"
#include "wsqos/errors.hpp"
#include "wsqos/http_server.hpp"
#include "wsqos/registry_service.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

// "-" or no argument means stdin.
std::string read_input(const std::string& path) {
    std::ostringstream buffer;
    if (path.empty() || path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw CLI::ValidationError("input", "cannot open " + path);
        buffer << in.rdbuf();
    }
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QoS-aware web service registry"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);

    auto load_service = [&config_path] {
        return wsqos::RegistryService(wsqos::Config::load(config_path));
    };

    std::string input;

    auto* publish = app.add_subcommand("publish", "store a tModel document");
    publish->add_option("input", input, "tModel XML file ('-' for stdin)");
    publish->callback([&] {
        auto service = load_service();
        auto outcome = service.publish_tmodel_xml(read_input(input));
        std::cout << wsqos::RegistryService::published_xml(outcome);
    });

    auto* discover = app.add_subcommand("discover", "answer a find_tModel query");
    discover->add_option("input", input, "find_tModel XML file ('-' for stdin)");
    discover->callback([&] {
        auto service = load_service();
        std::cout << service.discover_xml(read_input(input));
    });

    auto* select = app.add_subcommand("select", "rank services for a request");
    select->add_option("input", input, "find_service XML file ('-' for stdin)");
    select->callback([&] {
        auto service = load_service();
        std::cout << service.select_xml(read_input(input));
    });

    auto* train = app.add_subcommand("train", "fit the QoS model from a CSV dataset");
    train->add_option("input", input, "dataset CSV file ('-' for stdin)");
    train->callback([&] {
        auto service = load_service();
        auto report = (input.empty() || input == "-")
                          ? service.train_from_csv_text(read_input(input))
                          : service.train_from_csv_file(input);
        std::cout << report.to_csv();
    });

    std::string model_path;
    auto* evaluate = app.add_subcommand("evaluate", "score a saved model on a CSV dataset");
    evaluate->add_option("input", input, "dataset CSV file")->required();
    evaluate->add_option("-m,--model", model_path, "model file (default: configured model_path)");
    evaluate->callback([&] {
        auto service = load_service();
        std::string path = model_path.empty() ? service.config().model_path : model_path;
        if (path.empty()) {
            throw CLI::ValidationError("--model", "no model file configured");
        }
        std::cout << service.evaluate_model_file(path, input).to_csv();
    });

    auto* validate = app.add_subcommand("validate", "probe dataset WSDL URLs");
    validate->add_option("input", input, "ws_id,url CSV file ('-' for stdin)");
    validate->callback([&] {
        auto service = load_service();
        std::cout << service.validate_urls_csv(read_input(input));
    });

    std::string ws_id;
    auto* reputation = app.add_subcommand("reputation", "report reputation scores");
    reputation->add_option("ws_id", ws_id, "restrict to one service");
    reputation->callback([&] {
        auto service = load_service();
        std::cout << (ws_id.empty() ? service.reputation_csv()
                                    : service.reputation_csv(ws_id));
    });

    auto* services = app.add_subcommand("services", "list stored services");
    services->callback([&] {
        auto service = load_service();
        std::cout << service.services_xml();
    });

    std::string address;
    int port = -1;
    auto* serve = app.add_subcommand("serve", "run the HTTP endpoint");
    serve->add_option("--address", address, "listen address (default: configured)");
    serve->add_option("--port", port, "listen port, 0 picks a free one");
    serve->callback([&] {
        auto config = wsqos::Config::load(config_path);
        if (!address.empty()) config.listen_address = address;
        if (port >= 0) config.listen_port = port;
        wsqos::RegistryService service(config);
        wsqos::HttpServer server(service);
        int bound = server.start(config.listen_address, config.listen_port);
        std::cout << "listening on " << config.listen_address << ":" << bound
                  << std::endl;
        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        while (!g_stop.load()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
        server.stop();
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    } catch (const wsqos::Error& e) {
        std::cerr << wsqos::error_xml(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
