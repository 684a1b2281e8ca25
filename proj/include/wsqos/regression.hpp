#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wsqos/dataset.hpp"
#include "wsqos/qos.hpp"

namespace wsqos {

// Latent-variable linear regression: z-score standardization, projection onto
// the top-k principal directions of the training features, then a per-target
// least-squares fit in latent space with a small ridge damping term.
struct RegressionModel {
    std::vector<std::string> feature_names;   // full input width, CSV order
    std::vector<int> used_features;           // indices of non-constant features
    Eigen::VectorXd feature_means;            // over used features
    Eigen::VectorXd feature_stds;             // all > 0
    Eigen::MatrixXd components;               // used x k, orthonormal columns
    std::vector<std::string> target_names;    // normalized QoS property names
    Eigen::MatrixXd coefficients;             // k x targets, latent space
    Eigen::VectorXd intercepts;               // per target
    int latent_count = 0;
    double ridge = 1e-8;
    std::vector<std::string> warnings;

    std::string to_json() const;
    static RegressionModel from_json(std::string_view text);
    void save(const std::string& path) const;
    static RegressionModel load(const std::string& path);
};

struct TrainOptions {
    double ridge = 1e-8;
};

// Picks the latent count in [1, k_max] with the smallest mean 5-fold
// cross-validated RMSE (averaged over targets, folds by row index mod 5).
// Ties within 1e-12 relative go to the smaller k.
int choose_latent_count(const FeatureMatrix& train, int k_max,
                        const TrainOptions& options = {});

RegressionModel train_model(const FeatureMatrix& train, int k,
                            const TrainOptions& options = {});

// Raw per-target predictions, model target order, no clamping.
Eigen::VectorXd predict_raw(const RegressionModel& model,
                            const Eigen::VectorXd& features);

// Clamps a raw prediction into the property's admissible range:
// availability/reliability to [0,1], everything else to >= 0.
double clamp_prediction(std::string_view normalized_property, double raw);

// Full prediction as a QoSVector, clamped per property.
QoSVector predict(const RegressionModel& model, const std::vector<double>& features);

double mae(std::span<const double> predicted, std::span<const double> observed);
double rmse(std::span<const double> predicted, std::span<const double> observed);

struct EvaluationReport {
    std::vector<std::string> properties;
    std::vector<double> property_mae;
    std::vector<double> property_rmse;
    double overall_mae = 0.0;   // across every (row, property) pair
    double overall_rmse = 0.0;
    long n = 0;                 // predictions evaluated = rows * properties
    std::uint64_t seed = 0;     // stamped by the training pipeline
    double split_ratio = 0.0;
    int latent_count = 0;

    std::string to_csv() const;
    std::string to_table() const;
};

EvaluationReport evaluate(const RegressionModel& model, const FeatureMatrix& test);

}  // namespace wsqos
