#include "wsqos/regression.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wsqos/errors.hpp"
#include "wsqos/text.hpp"

namespace wsqos {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) = j[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            out(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]
                            .get<double>();
        }
    }
    return out;
}

Eigen::VectorXd standardized_projection(const RegressionModel& model,
                                        const Eigen::VectorXd& features) {
    Eigen::VectorXd used(static_cast<Eigen::Index>(model.used_features.size()));
    for (Eigen::Index i = 0; i < used.size(); ++i) {
        used(i) = features(model.used_features[static_cast<std::size_t>(i)]);
    }
    Eigen::VectorXd standardized =
        (used - model.feature_means).cwiseQuotient(model.feature_stds);
    return model.components.transpose() * standardized;
}

double fold_rmse(const RegressionModel& model, const FeatureMatrix& held_out) {
    // Mean per-target RMSE on clamped predictions, matching evaluate().
    const Eigen::Index rows = held_out.rows();
    const auto targets = static_cast<Eigen::Index>(model.target_names.size());
    double sum = 0.0;
    for (Eigen::Index t = 0; t < targets; ++t) {
        double sq = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            Eigen::VectorXd raw = predict_raw(model, held_out.features.row(r).transpose());
            double prediction = clamp_prediction(model.target_names[static_cast<std::size_t>(t)], raw(t));
            double residual = prediction - held_out.targets(r, t);
            sq += residual * residual;
        }
        sum += std::sqrt(sq / static_cast<double>(rows));
    }
    return sum / static_cast<double>(targets);
}

}  // namespace

int choose_latent_count(const FeatureMatrix& train, int k_max,
                        const TrainOptions& options) {
    const Eigen::Index n = train.rows();
    if (n < 10) {
        raise(ErrorCode::TooFewRows,
              "5-fold cross-validation needs at least 10 rows, got " +
                  std::to_string(n));
    }
    k_max = std::clamp<int>(k_max, 1, static_cast<int>(train.features.cols()));

    constexpr int kFolds = 5;
    std::vector<std::vector<Eigen::Index>> fold_rows(kFolds);
    for (Eigen::Index i = 0; i < n; ++i) {
        fold_rows[static_cast<std::size_t>(i % kFolds)].push_back(i);
    }

    int best_k = 1;
    double best_score = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        double score = 0.0;
        for (int f = 0; f < kFolds; ++f) {
            std::vector<Eigen::Index> train_idx;
            for (int g = 0; g < kFolds; ++g) {
                if (g == f) continue;
                train_idx.insert(train_idx.end(), fold_rows[static_cast<std::size_t>(g)].begin(),
                                 fold_rows[static_cast<std::size_t>(g)].end());
            }
            RegressionModel model =
                train_model(train.take_rows(train_idx), k, options);
            score += fold_rmse(model, train.take_rows(fold_rows[static_cast<std::size_t>(f)]));
        }
        score /= kFolds;
        if (score < best_score * (1.0 - 1e-12)) {
            best_score = score;
            best_k = k;
        }
    }
    return best_k;
}

RegressionModel train_model(const FeatureMatrix& train, int k,
                            const TrainOptions& options) {
    const Eigen::Index n = train.rows();
    const Eigen::Index p = train.features.cols();
    if (n < 2) {
        raise(ErrorCode::DegenerateData,
              "training needs at least 2 rows, got " + std::to_string(n));
    }
    if (k < 1) {
        raise(ErrorCode::ConfigError, "latent count must be >= 1");
    }

    RegressionModel model;
    model.feature_names = train.feature_names;
    model.target_names = train.target_names;
    model.ridge = options.ridge;

    // Drop constant features; z-score the rest.
    Eigen::VectorXd means = train.features.colwise().mean();
    std::vector<int> used;
    std::vector<double> stds;
    for (Eigen::Index c = 0; c < p; ++c) {
        double var = (train.features.col(c).array() - means(c)).square().sum() /
                     static_cast<double>(n - 1);
        double sd = std::sqrt(var);
        if (sd > 1e-12) {
            used.push_back(static_cast<int>(c));
            stds.push_back(sd);
        }
    }
    if (used.empty()) {
        raise(ErrorCode::DegenerateData, "all feature rows are identical");
    }
    const auto m = static_cast<Eigen::Index>(used.size());
    model.used_features = used;
    model.feature_means.resize(m);
    model.feature_stds.resize(m);
    Eigen::MatrixXd standardized(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index c = used[static_cast<std::size_t>(j)];
        model.feature_means(j) = means(c);
        model.feature_stds(j) = stds[static_cast<std::size_t>(j)];
        standardized.col(j) =
            (train.features.col(c).array() - means(c)) / stds[static_cast<std::size_t>(j)];
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(standardized,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double tolerance = std::numeric_limits<double>::epsilon() *
                             static_cast<double>(std::max(n, m)) *
                             (sigma.size() > 0 ? sigma(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > tolerance && sigma(i) > 1e-12) ++rank;
    }
    if (rank == 0) {
        raise(ErrorCode::DegenerateData, "standardized features have rank 0");
    }
    if (k > rank) {
        model.warnings.push_back("requested " + std::to_string(k) +
                                 " latent variables but feature rank is " +
                                 std::to_string(rank) + "; dropped excess");
        k = static_cast<int>(rank);
    }
    model.latent_count = k;
    model.components = svd.matrixV().leftCols(k);

    // Latent scores have zero column means, so each intercept is the target
    // mean and the normal equations decouple from it.
    Eigen::MatrixXd latent = standardized * model.components;  // n x k
    Eigen::MatrixXd gram = latent.transpose() * latent;
    gram.diagonal().array() += options.ridge;
    Eigen::LDLT<Eigen::MatrixXd> solver(gram);

    const Eigen::Index targets = train.targets.cols();
    model.coefficients.resize(k, targets);
    model.intercepts.resize(targets);
    for (Eigen::Index t = 0; t < targets; ++t) {
        double mean = train.targets.col(t).mean();
        model.intercepts(t) = mean;
        Eigen::VectorXd centered = train.targets.col(t).array() - mean;
        model.coefficients.col(t) = solver.solve(latent.transpose() * centered);
    }
    return model;
}

Eigen::VectorXd predict_raw(const RegressionModel& model,
                            const Eigen::VectorXd& features) {
    if (features.size() != static_cast<Eigen::Index>(model.feature_names.size())) {
        raise(ErrorCode::WidthMismatch,
              "feature vector has " + std::to_string(features.size()) +
                  " entries, model expects " +
                  std::to_string(model.feature_names.size()));
    }
    Eigen::VectorXd latent = standardized_projection(model, features);
    return model.intercepts + model.coefficients.transpose() * latent;
}

double clamp_prediction(std::string_view normalized_property, double raw) {
    auto property = property_from_name(normalized_property);
    if (property && (*property == QosProperty::Availability ||
                     *property == QosProperty::Reliability)) {
        return std::clamp(raw, 0.0, 1.0);
    }
    return std::max(raw, 0.0);
}

QoSVector predict(const RegressionModel& model, const std::vector<double>& features) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(features.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x(i) = features[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd raw = predict_raw(model, x);
    QoSVector out;
    for (std::size_t t = 0; t < model.target_names.size(); ++t) {
        out.set_named(model.target_names[t],
                      clamp_prediction(model.target_names[t],
                                       raw(static_cast<Eigen::Index>(t))));
    }
    return out;
}

namespace {

void check_pair_lengths(std::span<const double> predicted,
                        std::span<const double> observed) {
    if (predicted.size() != observed.size()) {
        raise(ErrorCode::LengthMismatch,
              std::to_string(predicted.size()) + " predictions vs " +
                  std::to_string(observed.size()) + " observations");
    }
    if (predicted.empty()) {
        raise(ErrorCode::EmptyInput, "no prediction pairs");
    }
}

}  // namespace

double mae(std::span<const double> predicted, std::span<const double> observed) {
    check_pair_lengths(predicted, observed);
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        sum += std::abs(observed[i] - predicted[i]);
    }
    return sum / static_cast<double>(predicted.size());
}

double rmse(std::span<const double> predicted, std::span<const double> observed) {
    check_pair_lengths(predicted, observed);
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        double d = observed[i] - predicted[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

EvaluationReport evaluate(const RegressionModel& model, const FeatureMatrix& test) {
    const Eigen::Index rows = test.rows();
    if (rows == 0) {
        raise(ErrorCode::EmptyTestSet, "test partition is empty");
    }
    const auto targets = static_cast<Eigen::Index>(model.target_names.size());

    Eigen::MatrixXd predictions(rows, targets);
    for (Eigen::Index r = 0; r < rows; ++r) {
        Eigen::VectorXd raw = predict_raw(model, test.features.row(r).transpose());
        for (Eigen::Index t = 0; t < targets; ++t) {
            predictions(r, t) =
                clamp_prediction(model.target_names[static_cast<std::size_t>(t)], raw(t));
        }
    }

    EvaluationReport report;
    report.properties = model.target_names;
    report.latent_count = model.latent_count;
    std::vector<double> all_pred, all_obs;
    all_pred.reserve(static_cast<std::size_t>(rows * targets));
    all_obs.reserve(static_cast<std::size_t>(rows * targets));
    for (Eigen::Index t = 0; t < targets; ++t) {
        std::vector<double> pred(static_cast<std::size_t>(rows));
        std::vector<double> obs(static_cast<std::size_t>(rows));
        for (Eigen::Index r = 0; r < rows; ++r) {
            pred[static_cast<std::size_t>(r)] = predictions(r, t);
            obs[static_cast<std::size_t>(r)] = test.targets(r, t);
        }
        report.property_mae.push_back(mae(pred, obs));
        report.property_rmse.push_back(rmse(pred, obs));
        all_pred.insert(all_pred.end(), pred.begin(), pred.end());
        all_obs.insert(all_obs.end(), obs.begin(), obs.end());
    }
    report.overall_mae = mae(all_pred, all_obs);
    report.overall_rmse = rmse(all_pred, all_obs);
    report.n = static_cast<long>(rows * targets);
    return report;
}

std::string EvaluationReport::to_csv() const {
    std::ostringstream out;
    out << "property,mae,rmse,n,seed,ratio,latent_count\n";
    for (std::size_t i = 0; i < properties.size(); ++i) {
        out << csv_field(properties[i]) << ',' << format_double(property_mae[i])
            << ',' << format_double(property_rmse[i]) << ',' << n << ',' << seed
            << ',' << format_double(split_ratio) << ',' << latent_count << '\n';
    }
    out << "overall," << format_double(overall_mae) << ','
        << format_double(overall_rmse) << ',' << n << ',' << seed << ','
        << format_double(split_ratio) << ',' << latent_count << '\n';
    return out.str();
}

std::string EvaluationReport::to_table() const {
    std::ostringstream out;
    char line[128];
    out << "property                     MAE          RMSE\n";
    for (std::size_t i = 0; i < properties.size(); ++i) {
        std::snprintf(line, sizeof(line), "%-24s %11.6g %13.6g\n",
                      properties[i].c_str(), property_mae[i], property_rmse[i]);
        out << line;
    }
    std::snprintf(line, sizeof(line), "%-24s %11.6g %13.6g\n", "overall",
                  overall_mae, overall_rmse);
    out << line;
    out << "n=" << n << " seed=" << seed << " ratio=" << format_double(split_ratio)
        << " latent=" << latent_count << '\n';
    return out.str();
}

std::string RegressionModel::to_json() const {
    json doc = {
        {"kind", "wsqos-regression-model"},
        {"version", 1},
        {"feature_names", feature_names},
        {"used_features", used_features},
        {"feature_means", vector_to_json(feature_means)},
        {"feature_stds", vector_to_json(feature_stds)},
        {"components", matrix_to_json(components)},
        {"target_names", target_names},
        {"coefficients", matrix_to_json(coefficients)},
        {"intercepts", vector_to_json(intercepts)},
        {"latent_count", latent_count},
        {"ridge", ridge},
        {"warnings", warnings},
    };
    return doc.dump(2) + "\n";
}

RegressionModel RegressionModel::from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        raise(ErrorCode::ConfigError, std::string("bad model document: ") + e.what());
    }
    if (doc.value("kind", "") != "wsqos-regression-model") {
        raise(ErrorCode::ConfigError, "not a regression model document");
    }
    RegressionModel model;
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    model.used_features = doc.at("used_features").get<std::vector<int>>();
    model.feature_means = vector_from_json(doc.at("feature_means"));
    model.feature_stds = vector_from_json(doc.at("feature_stds"));
    model.components = matrix_from_json(doc.at("components"));
    model.target_names = doc.at("target_names").get<std::vector<std::string>>();
    model.coefficients = matrix_from_json(doc.at("coefficients"));
    model.intercepts = vector_from_json(doc.at("intercepts"));
    model.latent_count = doc.at("latent_count").get<int>();
    model.ridge = doc.value("ridge", 1e-8);
    model.warnings = doc.value("warnings", std::vector<std::string>{});
    return model;
}

void RegressionModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out.is_open()) {
        raise(ErrorCode::ConfigError, "cannot write model to '" + path + "'");
    }
    out << to_json();
}

RegressionModel RegressionModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        raise(ErrorCode::ConfigError, "cannot read model from '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

}  // namespace wsqos
