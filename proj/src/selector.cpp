#include "wsqos/selector.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "wsqos/errors.hpp"
#include "wsqos/text.hpp"

namespace wsqos {

namespace {

void collect_leaves(const TreeNode& node, std::vector<const TreeNode*>& out) {
    if (node.kind == TreeNode::Kind::Leaf) {
        out.push_back(&node);
        return;
    }
    for (const auto& [_, child] : node.children) collect_leaves(child, out);
}

bool violates_constraint(const TreeNode& leaf, double value) {
    return leaf.direction == Direction::LowerBetter ? value > leaf.constraint
                                                    : value < leaf.constraint;
}

// Literal endpoint formula: candidates in descending raw-value order; the
// endpoints are pinned and interior entries get 2*(anchor - value)/10. Kept
// verbatim for comparison; scores may leave [0,1] by construction.
std::map<std::string, double> rank_paper_scores(
    const std::vector<std::pair<std::string, double>>& values, Direction direction) {
    std::vector<std::pair<std::string, double>> ordered = values;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::map<std::string, double> out;
    const double first = ordered.front().second;
    const double last = ordered.back().second;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        double score;
        if (i == 0) {
            score = direction == Direction::LowerBetter ? 1.0 : 0.0;
        } else if (i + 1 == ordered.size()) {
            score = direction == Direction::LowerBetter ? 0.0 : 1.0;
        } else {
            double anchor = direction == Direction::LowerBetter ? last : first;
            score = 2.0 * (anchor - ordered[i].second) / 10.0;
        }
        if (ordered.size() == 1) score = 1.0;
        out[ordered[i].first] = score;
    }
    return out;
}

std::map<std::string, double> min_max_scores(
    const std::vector<std::pair<std::string, double>>& values, Direction direction) {
    std::map<std::string, double> out;
    for (const auto& [ws_id, score] : leaf_scores(values, direction)) {
        out[ws_id] = score;
    }
    return out;
}

}  // namespace

std::vector<const TreeNode*> WeightedTree::leaves() const {
    std::vector<const TreeNode*> out;
    collect_leaves(root, out);
    return out;
}

WeightedTree build_tree(const RequestMessage& message,
                        const std::set<std::string>& extension_properties) {
    if (message.quality_reqs.empty()) {
        raise(ErrorCode::EmptyConstraints,
              "request carries no quality constraints");
    }
    double weight_sum = 0.0;
    for (const QualityReq& req : message.quality_reqs) weight_sum += req.weight;

    WeightedTree tree;
    tree.root.kind = TreeNode::Kind::And;
    for (const QualityReq& req : message.quality_reqs) {
        std::string name = normalize_property_name(req.property);
        bool canonical = property_from_name(name).has_value();
        if (!canonical && !extension_properties.contains(name)) {
            raise(ErrorCode::UnknownProperty,
                  "no candidate carries property '" + name + "'", name);
        }
        TreeNode leaf;
        leaf.kind = TreeNode::Kind::Leaf;
        leaf.property = name;
        leaf.direction = direction_of_name(name);
        leaf.constraint = req.value;
        tree.root.children.emplace_back(req.weight / weight_sum, std::move(leaf));
    }
    return tree;
}

std::vector<std::pair<std::string, double>> leaf_scores(
    const std::vector<std::pair<std::string, double>>& values, Direction direction) {
    if (values.empty()) return {};
    double lo = values.front().second;
    double hi = lo;
    for (const auto& [_, v] : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<std::pair<std::string, double>> out;
    out.reserve(values.size());
    for (const auto& [ws_id, v] : values) {
        double score = 1.0;  // degenerate range: everyone is the best
        if (hi > lo) {
            score = direction == Direction::HigherBetter ? (v - lo) / (hi - lo)
                                                         : (hi - v) / (hi - lo);
        }
        out.emplace_back(ws_id, score);
    }
    return out;
}

RankResult rank(const WeightedTree& tree, const std::vector<CandidateQos>& candidates,
                const RankOptions& options) {
    if (candidates.empty()) {
        raise(ErrorCode::NoCandidates, "no candidates to rank");
    }
    std::vector<const TreeNode*> leaves = tree.leaves();

    RankResult result;
    std::vector<const CandidateQos*> admitted;
    if (options.apply_constraint_filter) {
        for (const CandidateQos& candidate : candidates) {
            bool violated = false;
            for (const TreeNode* leaf : leaves) {
                auto value = candidate.qos.get_named(leaf->property);
                if (value && violates_constraint(*leaf, *value)) {
                    violated = true;
                    break;
                }
            }
            if (!violated) admitted.push_back(&candidate);
        }
    }
    if (admitted.empty()) {
        // Nothing satisfies the thresholds: rank everyone instead of
        // returning an empty answer, and say so.
        result.constraint_filter_skipped = options.apply_constraint_filter;
        for (const CandidateQos& candidate : candidates) admitted.push_back(&candidate);
    }

    // Per-leaf score maps over candidates that carry the property.
    std::vector<std::map<std::string, double>> per_leaf;
    per_leaf.reserve(leaves.size());
    for (const TreeNode* leaf : leaves) {
        std::vector<std::pair<std::string, double>> values;
        for (const CandidateQos* candidate : admitted) {
            if (auto v = candidate->qos.get_named(leaf->property)) {
                values.emplace_back(candidate->ws_id, *v);
            }
        }
        if (values.empty()) {
            per_leaf.emplace_back();
        } else if (options.scorer == ScorerMode::RankPaper) {
            per_leaf.push_back(rank_paper_scores(values, leaf->direction));
        } else {
            per_leaf.push_back(min_max_scores(values, leaf->direction));
        }
    }

    for (const CandidateQos* candidate : admitted) {
        ScoredService scored;
        scored.ws_id = candidate->ws_id;
        scored.from_assured = candidate->from_assured;

        std::size_t leaf_index = 0;
        std::map<const TreeNode*, double> leaf_value;
        for (const TreeNode* leaf : leaves) {
            const auto& scores = per_leaf[leaf_index++];
            auto it = scores.find(candidate->ws_id);
            double score = it == scores.end() ? 0.0 : it->second;
            scored.leaf_scores.push_back(score);
            leaf_value[leaf] = score;
        }

        // Weighted-sum AND / max OR aggregation over the (possibly nested) tree.
        auto aggregate = [&](const TreeNode& node, auto&& self) -> double {
            if (node.kind == TreeNode::Kind::Leaf) return leaf_value.at(&node);
            if (node.kind == TreeNode::Kind::Or) {
                double best = 0.0;
                for (const auto& [_, child] : node.children) {
                    best = std::max(best, self(child, self));
                }
                return best;
            }
            double sum = 0.0;
            for (const auto& [weight, child] : node.children) {
                sum += weight * self(child, self);
            }
            return sum;
        };
        scored.total = aggregate(tree.root, aggregate);
        result.ranked.push_back(std::move(scored));
    }

    std::sort(result.ranked.begin(), result.ranked.end(),
              [](const ScoredService& a, const ScoredService& b) {
                  if (a.total != b.total) return a.total > b.total;
                  return a.ws_id < b.ws_id;
              });
    return result;
}

std::string ranked_to_csv(const WeightedTree& tree, const RankResult& result) {
    std::ostringstream out;
    out << "rank,ws_id,total";
    for (const TreeNode* leaf : tree.leaves()) {
        out << ',' << csv_field(leaf->property);
    }
    out << '\n';
    int position = 1;
    for (const ScoredService& scored : result.ranked) {
        out << position++ << ',' << csv_field(scored.ws_id) << ','
            << format_double(scored.total);
        for (double score : scored.leaf_scores) out << ',' << format_double(score);
        out << '\n';
    }
    return out.str();
}

}  // namespace wsqos
