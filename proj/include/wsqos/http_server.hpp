#pragma once

#include <memory>
#include <string>
#include <thread>

#include "wsqos/registry_service.hpp"

namespace wsqos {

// HTTP/1.1 front end. XML bodies in, XML/CSV payloads out.
//   POST /publish /discover /select /train
//   GET  /services /reputation/{ws_id} /health
class HttpServer {
public:
    explicit HttpServer(RegistryService& service);
    ~HttpServer();

    // Binds and serves on a background thread. port 0 picks a free port.
    // Returns the bound port.
    int start(const std::string& address, int port);
    void stop();
    bool running() const;

private:
    struct Impl;
    RegistryService& service_;
    std::unique_ptr<Impl> impl_;
    std::thread worker_;
};

}  // namespace wsqos
