#include "wsqos/http_server.hpp"

#include <httplib.h>

#include "wsqos/errors.hpp"

namespace wsqos {

namespace {

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedXml:
        case ErrorCode::SchemaViolation:
        case ErrorCode::BadHeader:
        case ErrorCode::NonNumericCell:
        case ErrorCode::UnparseableQoSValue:
        case ErrorCode::EmptyConstraints:
        case ErrorCode::UnknownProperty:
        case ErrorCode::InvalidUrl:
        case ErrorCode::EmptyInput:
        case ErrorCode::LengthMismatch:
        case ErrorCode::WidthMismatch:
            return 400;
        case ErrorCode::DuplicateId:
            return 409;
        case ErrorCode::NotFound:
        case ErrorCode::NoCandidates:
            return 404;
        case ErrorCode::TooFewRows:
        case ErrorCode::DegenerateData:
        case ErrorCode::EmptyTestSet:
            return 422;
        default:
            return 500;
    }
}

void respond_xml(httplib::Response& res, int status, const std::string& body) {
    res.status = status;
    res.set_content(body, "application/xml");
}

template <typename Handler>
void guarded(const httplib::Request&, httplib::Response& res, Handler&& handler) {
    try {
        handler();
    } catch (const Error& e) {
        respond_xml(res, status_for(e.code()), error_xml(e));
    } catch (const std::exception& e) {
        respond_xml(res, 500,
                    error_xml(Error(ErrorCode::ConfigError, e.what())));
    }
}

}  // namespace

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(RegistryService& service)
    : service_(service), impl_(std::make_unique<Impl>()) {
    auto& server = impl_->server;

    server.Post("/publish", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(req, res, [&] {
            auto outcome = service_.publish_tmodel_xml(req.body);
            respond_xml(res, 201, RegistryService::published_xml(outcome));
        });
    });

    server.Post("/discover", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(req, res, [&] { respond_xml(res, 200, service_.discover_xml(req.body)); });
    });

    server.Post("/select", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(req, res, [&] { respond_xml(res, 200, service_.select_xml(req.body)); });
    });

    server.Post("/train", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(req, res, [&] {
            EvaluationReport report =
                req.has_param("path")
                    ? service_.train_from_csv_file(req.get_param_value("path"))
                    : service_.train_from_csv_text(req.body);
            res.status = 200;
            res.set_content(report.to_csv(), "text/csv");
        });
    });

    server.Post("/validate", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(req, res, [&] {
            res.status = 200;
            res.set_content(service_.validate_urls_csv(req.body), "text/csv");
        });
    });

    server.Get("/services", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(req, res, [&] { respond_xml(res, 200, service_.services_xml()); });
    });

    server.Get("/reputation", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(req, res, [&] {
            res.status = 200;
            res.set_content(service_.reputation_csv(), "text/csv");
        });
    });

    server.Get(R"(/reputation/(.+))", [this](const httplib::Request& req,
                                             httplib::Response& res) {
        guarded(req, res, [&] {
            res.status = 200;
            res.set_content(service_.reputation_csv(req.matches[1].str()), "text/csv");
        });
    });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        respond_xml(res, 200, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<health status=\"ok\"/>\n");
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& address, int port) {
    auto& server = impl_->server;
    int bound = port;
    if (port == 0) {
        bound = server.bind_to_any_port(address);
        if (bound <= 0) {
            raise(ErrorCode::ConfigError, "cannot bind to " + address);
        }
    } else if (!server.bind_to_port(address, port)) {
        raise(ErrorCode::ConfigError,
              "cannot bind to " + address + ":" + std::to_string(port));
    }
    worker_ = std::thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();
    return bound;
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) {
        impl_->server.stop();
    }
    if (worker_.joinable()) worker_.join();
}

bool HttpServer::running() const { return impl_ && impl_->server.is_running(); }

}  // namespace wsqos
