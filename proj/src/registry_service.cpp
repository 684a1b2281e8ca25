#include "wsqos/registry_service.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "wsqos/discovery.hpp"
#include "wsqos/errors.hpp"
#include "wsqos/messages.hpp"
#include "wsqos/reputation.hpp"
#include "wsqos/selector.hpp"
#include "wsqos/text.hpp"
#include "wsqos/wsdl_metrics.hpp"
#include "wsqos/xml.hpp"

namespace wsqos {

RegistryService::RegistryService(Config config)
    : config_(std::move(config)), store_(config_.journal_path) {
    if (!config_.model_path.empty()) {
        std::ifstream probe(config_.model_path);
        if (probe.good()) {
            model_ = std::make_shared<const RegressionModel>(
                RegressionModel::load(config_.model_path));
        }
    }
}

std::shared_ptr<const RegressionModel> RegistryService::model() const {
    std::lock_guard lock(model_mutex_);
    return model_;
}

void RegistryService::set_model(RegressionModel model) {
    auto fresh = std::make_shared<const RegressionModel>(std::move(model));
    std::lock_guard lock(model_mutex_);
    model_ = std::move(fresh);
}

RegistryService::PublishOutcome RegistryService::publish_tmodel_xml(
    std::string_view body) {
    TModelDocument tmodel = parse_tmodel(body);
    PublishOutcome outcome;
    outcome.ws_id = store_.publish(tmodel);
    apply_model_on_publish(outcome.ws_id, outcome);
    return outcome;
}

std::string RegistryService::published_xml(const PublishOutcome& outcome) {
    xml::Element root;
    root.name = "published";
    root.set_attribute("ws_id", outcome.ws_id);
    root.set_attribute("predicted", outcome.predicted ? "true" : "false");
    if (!outcome.note.empty()) root.set_attribute("note", outcome.note);
    return xml::write(root);
}

void RegistryService::apply_model_on_publish(const std::string& ws_id,
                                             PublishOutcome& outcome) {
    auto current = model();
    if (!current) {
        outcome.note = "no model loaded";
        return;
    }
    ServiceRecord record = store_.get(ws_id);
    if (record.tmodel.overview_url.empty()) {
        outcome.note = "tModel carries no overviewURL";
        return;
    }
    if (!config_.fetch_on_publish) {
        outcome.note = "fetch_on_publish disabled";
        return;
    }

    std::string wsdl_text;
    try {
        FetchResult fetched =
            fetch_url(record.tmodel.overview_url, config_.fetch_timeout_ms);
        if (!fetched.ok) {
            outcome.note = "WSDL fetch failed: " + fetched.category;
            return;
        }
        wsdl_text = std::move(fetched.body);
    } catch (const Error& e) {
        outcome.note = std::string("WSDL fetch failed: ") + e.what();
        return;
    }

    InterfaceMetrics metrics;
    try {
        metrics = compute_wsdl_metrics(wsdl_text);
    } catch (const Error& e) {
        outcome.note = std::string("WSDL did not parse: ") + e.what();
        return;
    }
    store_.set_wsdl_text(ws_id, wsdl_text);

    // The model is applicable only when every feature it was trained on is
    // one of the WSDL-derivable interface metrics.
    std::vector<double> features(current->feature_names.size(), 0.0);
    auto metric_values = metrics.as_features();
    for (std::size_t i = 0; i < current->feature_names.size(); ++i) {
        std::string normalized = normalize_property_name(current->feature_names[i]);
        bool known = false;
        for (std::size_t j = 0; j < kInterfaceMetricNames.size(); ++j) {
            if (normalized == kInterfaceMetricNames[j]) {
                features[i] = metric_values[j];
                known = true;
                break;
            }
        }
        if (!known) {
            outcome.note = "model feature '" + current->feature_names[i] +
                           "' is not WSDL-derivable; prediction skipped";
            return;
        }
    }

    QoSVector predicted = predict(*current, features);
    store_.set_predicted_qos(ws_id, predicted);
    ServiceRecord updated = store_.get(ws_id);
    int compared = comparable_properties(predicted, updated.assured_qos);
    int score = credibility(predicted, updated.assured_qos,
                            config_.credibility_tolerance);
    store_.set_credibility(ws_id, score, compared);
    outcome.predicted = true;
}

std::string RegistryService::discover_xml(std::string_view body) {
    DiscoveryQuery query = parse_find_tmodel(body);
    std::vector<std::string> ids = find_tmodel(query, store_);

    xml::Element root;
    root.name = "tModelList";
    root.set_attribute("generic", "1.0");
    for (const std::string& ws_id : ids) {
        ServiceRecord record = store_.get(ws_id);
        xml::Element& info = root.add_child("tModelInfo");
        info.set_attribute("tModelKey", record.tmodel.tmodel_key);
        info.set_attribute("ws_id", ws_id);
        if (!record.tmodel.function.empty()) {
            info.set_attribute("function", record.tmodel.function);
        }
        if (!record.tmodel.overview_url.empty()) {
            info.set_attribute("overviewURL", record.tmodel.overview_url);
        }
    }
    return xml::write(root);
}

std::string RegistryService::select_xml(std::string_view body) {
    RequestMessage request = parse_request(body);
    std::vector<std::string> candidate_ids =
        find_by_function(request.functional_req, store_);
    if (candidate_ids.empty()) {
        raise(ErrorCode::NoCandidates,
              "no service matches '" + request.functional_req + "'");
    }

    // Predicted QoS with assured fallback, plus the extension-property
    // universe the request may constrain.
    std::vector<CandidateQos> candidates;
    std::set<std::string> extensions;
    for (const std::string& ws_id : candidate_ids) {
        ServiceRecord record = store_.get(ws_id);
        CandidateQos candidate;
        candidate.ws_id = ws_id;
        if (record.predicted_qos && !record.predicted_qos->empty()) {
            candidate.qos = *record.predicted_qos;
            // Assured extras (e.g. price) still apply; the model only
            // predicts the canonical properties.
            for (const auto& [name, value] : record.assured_qos.extras) {
                candidate.qos.extras.emplace(name, value);
            }
        } else {
            candidate.qos = record.assured_qos;
            candidate.from_assured = true;
        }
        for (const auto& [name, _] : candidate.qos.extras) extensions.insert(name);
        candidates.push_back(std::move(candidate));
    }

    WeightedTree tree = build_tree(request, extensions);
    RankOptions rank_options;
    rank_options.scorer = config_.scorer == "rank-paper" ? ScorerMode::RankPaper
                                                         : ScorerMode::MinMax;
    RankResult ranked = rank(tree, candidates, rank_options);

    FinalizeOptions finalize_options;
    finalize_options.mode = reputation_mode_from_string(config_.reputation_mode);
    std::vector<FinalChoice> chosen =
        finalize(ranked.ranked, request.max_service, store_, finalize_options);

    xml::Element root;
    root.name = "serviceList";
    root.set_attribute("generic", "1.0");
    root.set_attribute("reputationMode", config_.reputation_mode);
    if (ranked.constraint_filter_skipped) {
        root.set_attribute("constraintFilter", "skipped-all-violated");
    }
    int position = 1;
    for (const FinalChoice& choice : chosen) {
        xml::Element& service = root.add_child("service");
        service.set_attribute("rank", std::to_string(position++));
        service.set_attribute("ws_id", choice.ws_id);
        if (!choice.overview_url.empty()) {
            service.set_attribute("overviewURL", choice.overview_url);
        }
        service.set_attribute("qosScore", format_double(choice.qos_score));
        service.set_attribute("reputation", format_double(choice.reputation));
        if (choice.from_assured) {
            service.set_attribute("qosSource", "assured");
        }
    }
    return xml::write(root);
}

EvaluationReport RegistryService::train_from_csv_text(std::string_view csv) {
    FeatureMatrix matrix = ingest_csv_text(csv);
    auto [train_part, test_part] = split(matrix, config_.split_ratio, config_.seed);
    int k = choose_latent_count(train_part,
                                static_cast<int>(train_part.features.cols()));
    RegressionModel model = train_model(train_part, k);
    EvaluationReport report = evaluate(model, test_part);
    report.seed = config_.seed;
    report.split_ratio = config_.split_ratio;
    report.latent_count = model.latent_count;
    if (!config_.model_path.empty()) model.save(config_.model_path);
    set_model(std::move(model));
    return report;
}

EvaluationReport RegistryService::train_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        raise(ErrorCode::BadHeader, "cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return train_from_csv_text(buffer.str());
}

EvaluationReport RegistryService::evaluate_model_file(const std::string& model_path,
                                                      const std::string& csv_path) {
    RegressionModel model = RegressionModel::load(model_path);
    FeatureMatrix matrix = ingest_csv(csv_path);
    EvaluationReport report = evaluate(model, matrix);
    report.seed = config_.seed;
    report.split_ratio = 1.0;
    return report;
}

std::string RegistryService::validate_urls_csv(std::string_view csv) {
    std::vector<UrlRecord> records;
    std::istringstream in{std::string(csv)};
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (trim_copy(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (first) {
            first = false;
            if (!cells.empty() && normalize_property_name(cells[0]) == "ws id") {
                continue;  // header
            }
        }
        if (cells.size() < 2) {
            raise(ErrorCode::BadHeader, "expected ws_id,url rows");
        }
        records.push_back({trim_copy(cells[0]), trim_copy(cells[1])});
    }
    ValidationReport report = validate_dataset(records, config_.fetch_timeout_ms,
                                               config_.fetch_parallelism);
    return report.to_csv();
}

std::string RegistryService::services_xml() const {
    xml::Element root;
    root.name = "serviceList";
    root.set_attribute("generic", "1.0");
    for (const ServiceRecord& record : store_.list_all()) {
        xml::Element& service = root.add_child("service");
        service.set_attribute("ws_id", record.ws_id);
        if (!record.tmodel.function.empty()) {
            service.set_attribute("function", record.tmodel.function);
        }
        service.set_attribute("publishedAt", std::to_string(record.published_at));
        service.set_attribute("hasPredictedQos",
                              record.predicted_qos ? "true" : "false");
    }
    return xml::write(root);
}

std::string RegistryService::reputation_csv() const {
    return reputation_to_csv(store_.reputation_all(),
                             reputation_mode_from_string(config_.reputation_mode));
}

std::string RegistryService::reputation_csv(const std::string& ws_id) const {
    return reputation_to_csv({store_.reputation(ws_id)},
                             reputation_mode_from_string(config_.reputation_mode));
}

std::string error_xml(const Error& error) {
    xml::Element root;
    root.name = "error";
    root.set_attribute("code", std::string(error_code_name(error.code())));
    if (!error.element().empty()) {
        root.set_attribute("element", error.element());
    }
    root.text = error.what();
    return xml::write(root);
}

}  // namespace wsqos
