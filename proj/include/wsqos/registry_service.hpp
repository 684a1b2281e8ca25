#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "wsqos/config.hpp"
#include "wsqos/regression.hpp"
#include "wsqos/store.hpp"

namespace wsqos {

// Composes the store, predictor, selector and reputation scoring into the
// operations the HTTP endpoints and CLI subcommands expose. Both transports
// call these methods, so their payloads are identical by construction.
class RegistryService {
public:
    explicit RegistryService(Config config);

    struct PublishOutcome {
        std::string ws_id;
        bool predicted = false;    // a model was applied to fetched WSDL metrics
        std::string note;          // why prediction was skipped, if it was
    };

    // Parses a tModel, stores it, and, when the WSDL is fetchable and a model
    // is loaded whose features are all WSDL-derivable, predicts QoS and
    // updates the provider's credibility.
    PublishOutcome publish_tmodel_xml(std::string_view body);

    // <published ws_id=".." predicted=".." [note=".."]/>, shared by HTTP and CLI.
    static std::string published_xml(const PublishOutcome& outcome);

    // find_tModel answer as XML.
    std::string discover_xml(std::string_view body);

    // Full pipeline: functional match, constraint tree, rank, reputation
    // reorder, usage counting. Returns the ranked XML response.
    std::string select_xml(std::string_view body);

    // Ingest, split, choose latent count, train, evaluate; hot-swaps the
    // model and persists it when model_path is configured. Returns the report.
    EvaluationReport train_from_csv_text(std::string_view csv);
    EvaluationReport train_from_csv_file(const std::string& path);

    EvaluationReport evaluate_model_file(const std::string& model_path,
                                         const std::string& csv_path);

    std::string validate_urls_csv(std::string_view csv);

    std::string services_xml() const;
    std::string reputation_csv() const;
    std::string reputation_csv(const std::string& ws_id) const;

    std::shared_ptr<const RegressionModel> model() const;
    void set_model(RegressionModel model);

    Store& store() { return store_; }
    const Config& config() const { return config_; }

private:
    void apply_model_on_publish(const std::string& ws_id, PublishOutcome& outcome);

    Config config_;
    Store store_;
    std::shared_ptr<const RegressionModel> model_;
    mutable std::mutex model_mutex_;
};

// <error code=".." element="..">message</error>
std::string error_xml(const class Error& error);

}  // namespace wsqos
