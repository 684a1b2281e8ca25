#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wsqos {

// Per-service feature rows with observed QoS targets. Target columns are the
// header entries whose normalized names are canonical QoS properties; every
// other column after ws_id is a feature.
struct FeatureMatrix {
    std::vector<std::string> ids;
    std::vector<std::string> feature_names;
    std::vector<std::string> target_names;  // normalized, CSV order
    Eigen::MatrixXd features;               // n x p
    Eigen::MatrixXd targets;                // n x t
    std::vector<bool> constant_feature;     // flagged at ingestion

    Eigen::Index rows() const { return features.rows(); }

    FeatureMatrix take_rows(const std::vector<Eigen::Index>& indices) const;
};

// CSV with header: ws_id, feature columns..., QoS target columns. Missing
// cells are imputed with the column mean over present values.
FeatureMatrix ingest_csv(const std::string& path);
FeatureMatrix ingest_csv_text(std::string_view csv);

// Deterministic Fisher-Yates shuffle by seed; |train| = round(ratio * n).
// Train and test partition the input rows exactly.
std::pair<FeatureMatrix, FeatureMatrix> split(const FeatureMatrix& matrix,
                                              double ratio, std::uint64_t seed);

}  // namespace wsqos
