#include "wsqos/dataset.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "wsqos/errors.hpp"
#include "wsqos/qos.hpp"
#include "wsqos/text.hpp"

namespace wsqos {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> read_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string current;
    std::istringstream in{std::string(text)};
    while (std::getline(in, current)) {
        if (!trim_copy(current).empty()) lines.push_back(current);
    }
    return lines;
}

void impute_column_means(Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        Eigen::Index present = 0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (!std::isnan(m(r, c))) {
                sum += m(r, c);
                ++present;
            }
        }
        double mean = present > 0 ? sum / static_cast<double>(present) : 0.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (std::isnan(m(r, c))) m(r, c) = mean;
        }
    }
}

// Unbiased bounded draw; avoids the unspecified std::shuffle /
// uniform_int_distribution sequences so splits reproduce across platforms.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

}  // namespace

FeatureMatrix FeatureMatrix::take_rows(const std::vector<Eigen::Index>& indices) const {
    FeatureMatrix out;
    out.feature_names = feature_names;
    out.target_names = target_names;
    out.constant_feature = constant_feature;
    out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
    out.targets.resize(static_cast<Eigen::Index>(indices.size()), targets.cols());
    out.ids.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(indices[i]);
        out.targets.row(static_cast<Eigen::Index>(i)) = targets.row(indices[i]);
        out.ids.push_back(ids[static_cast<std::size_t>(indices[i])]);
    }
    return out;
}

FeatureMatrix ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        raise(ErrorCode::BadHeader, "cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return ingest_csv_text(buffer.str());
}

FeatureMatrix ingest_csv_text(std::string_view csv) {
    std::vector<std::string> lines = read_lines(csv);
    if (lines.empty()) {
        raise(ErrorCode::BadHeader, "empty CSV");
    }
    std::vector<std::string> header = split_csv_line(lines[0]);
    if (header.empty() || normalize_property_name(header[0]) != "ws id") {
        raise(ErrorCode::BadHeader, "first column must be ws_id", "ws_id");
    }

    std::vector<std::size_t> feature_cols, target_cols;
    FeatureMatrix matrix;
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::string normalized = normalize_property_name(header[c]);
        if (property_from_name(normalized)) {
            target_cols.push_back(c);
            matrix.target_names.push_back(normalized);
        } else {
            feature_cols.push_back(c);
            matrix.feature_names.push_back(trim_copy(header[c]));
        }
    }
    if (feature_cols.empty()) {
        raise(ErrorCode::BadHeader, "no feature columns");
    }
    if (target_cols.empty()) {
        raise(ErrorCode::BadHeader, "no QoS target columns");
    }

    const Eigen::Index n = static_cast<Eigen::Index>(lines.size() - 1);
    matrix.features.resize(n, static_cast<Eigen::Index>(feature_cols.size()));
    matrix.targets.resize(n, static_cast<Eigen::Index>(target_cols.size()));

    for (std::size_t r = 1; r < lines.size(); ++r) {
        std::vector<std::string> cells = split_csv_line(lines[r]);
        if (cells.size() != header.size()) {
            raise(ErrorCode::NonNumericCell,
                  "row " + std::to_string(r) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
        }
        matrix.ids.push_back(trim_copy(cells[0]));
        auto cell_value = [&](std::size_t c) -> double {
            std::string raw = trim_copy(cells[c]);
            if (raw.empty()) return kMissing;
            auto value = parse_double(raw);
            if (!value || !std::isfinite(*value)) {
                raise(ErrorCode::NonNumericCell,
                      "row " + std::to_string(r) + ", column '" + header[c] +
                          "': '" + raw + "'",
                      header[c]);
            }
            return *value;
        };
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            matrix.features(static_cast<Eigen::Index>(r - 1),
                            static_cast<Eigen::Index>(j)) = cell_value(feature_cols[j]);
        }
        for (std::size_t j = 0; j < target_cols.size(); ++j) {
            matrix.targets(static_cast<Eigen::Index>(r - 1),
                           static_cast<Eigen::Index>(j)) = cell_value(target_cols[j]);
        }
    }

    impute_column_means(matrix.features);
    impute_column_means(matrix.targets);

    matrix.constant_feature.resize(feature_cols.size());
    for (Eigen::Index c = 0; c < matrix.features.cols(); ++c) {
        double lo = matrix.features.col(c).minCoeff();
        double hi = matrix.features.col(c).maxCoeff();
        matrix.constant_feature[static_cast<std::size_t>(c)] = (lo == hi);
    }
    return matrix;
}

std::pair<FeatureMatrix, FeatureMatrix> split(const FeatureMatrix& matrix,
                                              double ratio, std::uint64_t seed) {
    const Eigen::Index n = matrix.rows();
    if (n < 5) {
        raise(ErrorCode::TooFewRows,
              "need at least 5 rows to split, got " + std::to_string(n));
    }
    if (!(ratio > 0.0 && ratio < 1.0)) {
        raise(ErrorCode::ConfigError, "split ratio must lie in (0,1)");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        std::swap(order[i], order[uniform_index(rng, i + 1)]);
    }

    auto train_size = static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(n)));
    train_size = std::min<std::size_t>(
        std::max<std::size_t>(train_size, 1), static_cast<std::size_t>(n) - 1);

    std::vector<Eigen::Index> train_idx(order.begin(),
                                        order.begin() + static_cast<long>(train_size));
    std::vector<Eigen::Index> test_idx(order.begin() + static_cast<long>(train_size),
                                       order.end());
    return {matrix.take_rows(train_idx), matrix.take_rows(test_idx)};
}

}  // namespace wsqos
