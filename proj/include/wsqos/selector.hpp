#pragma once

#include <set>
#include <string>
#include <vector>

#include "wsqos/messages.hpp"
#include "wsqos/qos.hpp"

namespace wsqos {

// Quality-constraint tree. Edge weights of a node's children sum to 1; AND
// aggregates children by weighted sum, OR by maximum (weights ignored).
// build_tree only ever emits a flat AND over leaves, because the request
// format cannot express OR, but score() handles nested trees.
struct TreeNode {
    enum class Kind { And, Or, Leaf };
    Kind kind = Kind::Leaf;

    // Leaf payload.
    std::string property;   // normalized name
    Direction direction = Direction::LowerBetter;
    double constraint = 0.0;

    std::vector<std::pair<double, TreeNode>> children;  // (edge weight, child)
};

struct WeightedTree {
    TreeNode root;

    std::vector<const TreeNode*> leaves() const;  // left-to-right
};

// Normalizes the request weights into edge weights and assigns per-property
// directions (response time/latency/price and unknown extras are
// lower-better; availability/throughput/reliability higher-better).
// `extension_properties` lists the non-canonical property names candidates
// actually carry; constraining anything outside canonical + extensions is an
// UnknownProperty error.
WeightedTree build_tree(const RequestMessage& message,
                        const std::set<std::string>& extension_properties = {});

// Min-max scores for one leaf: best candidate 1, worst 0, all-equal 1.
std::vector<std::pair<std::string, double>> leaf_scores(
    const std::vector<std::pair<std::string, double>>& values, Direction direction);

struct CandidateQos {
    std::string ws_id;
    QoSVector qos;
    bool from_assured = false;  // predicted QoS was absent, assured used
};

struct ScoredService {
    std::string ws_id;
    std::vector<double> leaf_scores;  // tree leaf order
    double total = 0.0;
    bool from_assured = false;

    bool operator==(const ScoredService&) const = default;
};

enum class ScorerMode {
    MinMax,     // normative
    RankPaper,  // literal endpoint formula, for side-by-side comparison
};

struct RankOptions {
    ScorerMode scorer = ScorerMode::MinMax;
    bool apply_constraint_filter = true;
};

struct RankResult {
    std::vector<ScoredService> ranked;  // total desc, ws_id asc on ties
    bool constraint_filter_skipped = false;  // every candidate violated
};

RankResult rank(const WeightedTree& tree, const std::vector<CandidateQos>& candidates,
                const RankOptions& options = {});

std::string ranked_to_csv(const WeightedTree& tree, const RankResult& result);

}  // namespace wsqos
