#include "wsqos/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wsqos/errors.hpp"
#include "wsqos/text.hpp"

namespace wsqos {

namespace {

constexpr double kEpsilon = 1e-9;

}  // namespace

int credibility(const QoSVector& predicted, const QoSVector& assured,
                double tolerance) {
    if (tolerance < 0) {
        raise(ErrorCode::ConfigError, "credibility tolerance must be >= 0");
    }
    int matches = 0;
    for (const auto& [name, assured_value] : assured.as_map()) {
        auto predicted_value = predicted.get_named(name);
        if (!predicted_value) continue;
        double bound = tolerance * std::max(std::abs(assured_value), kEpsilon);
        if (std::abs(*predicted_value - assured_value) <= bound) ++matches;
    }
    return matches;
}

int comparable_properties(const QoSVector& predicted, const QoSVector& assured) {
    int count = 0;
    for (const auto& [name, _] : assured.as_map()) {
        if (predicted.get_named(name)) ++count;
    }
    return count;
}

ReputationMode reputation_mode_from_string(std::string_view name) {
    if (name == "literal") return ReputationMode::Literal;
    if (name == "normalized") return ReputationMode::Normalized;
    raise(ErrorCode::ConfigError,
          "unknown reputation mode '" + std::string(name) + "'");
}

std::string_view to_string(ReputationMode mode) {
    return mode == ReputationMode::Literal ? "literal" : "normalized";
}

double reputation_score(const ReputationRecord& record, ReputationMode mode,
                        long max_usage_among_candidates) {
    if (mode == ReputationMode::Literal) {
        return static_cast<double>(record.credibility) +
               static_cast<double>(record.usage_count);
    }
    double credibility_term =
        record.compared_properties > 0
            ? static_cast<double>(record.credibility) / record.compared_properties
            : 0.0;
    double usage_term =
        max_usage_among_candidates > 0
            ? static_cast<double>(record.usage_count) / static_cast<double>(max_usage_among_candidates)
            : 0.0;
    return 0.5 * credibility_term + 0.5 * usage_term;
}

std::vector<FinalChoice> finalize(const std::vector<ScoredService>& ranked,
                                  int max_service, Store& store,
                                  const FinalizeOptions& options) {
    if (ranked.empty()) {
        raise(ErrorCode::NoCandidates, "nothing to finalize");
    }
    if (max_service < 1) {
        raise(ErrorCode::ConfigError, "max_service must be >= 1");
    }
    const std::size_t slice =
        std::min<std::size_t>(static_cast<std::size_t>(max_service), ranked.size());

    struct Entry {
        const ScoredService* scored;
        ReputationRecord reputation;
    };
    std::vector<Entry> entries;
    entries.reserve(slice);
    long max_usage = 0;
    for (std::size_t i = 0; i < slice; ++i) {
        ReputationRecord record;
        record.ws_id = ranked[i].ws_id;
        try {
            record = store.reputation(ranked[i].ws_id);
        } catch (const Error&) {
            // cold start: no record yet, score 0
        }
        max_usage = std::max(max_usage, record.usage_count);
        entries.push_back({&ranked[i], std::move(record)});
    }

    std::vector<double> scores(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        scores[i] = reputation_score(entries[i].reputation, options.mode, max_usage);
    }
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    std::vector<FinalChoice> out;
    out.reserve(entries.size());
    for (std::size_t i : order) {
        FinalChoice choice;
        choice.ws_id = entries[i].scored->ws_id;
        choice.qos_score = entries[i].scored->total;
        choice.reputation = scores[i];
        choice.from_assured = entries[i].scored->from_assured;
        if (store.contains(choice.ws_id)) {
            choice.overview_url = store.get(choice.ws_id).tmodel.overview_url;
        }
        out.push_back(std::move(choice));
    }
    if (options.count_usage) {
        for (const FinalChoice& choice : out) {
            if (store.contains(choice.ws_id)) store.record_usage(choice.ws_id);
        }
    }
    return out;
}

std::string reputation_to_csv(const std::vector<ReputationRecord>& records,
                              ReputationMode mode) {
    long max_usage = 0;
    for (const ReputationRecord& record : records) {
        max_usage = std::max(max_usage, record.usage_count);
    }
    std::ostringstream out;
    out << "ws_id,credibility,usage_count,score,mode\n";
    for (const ReputationRecord& record : records) {
        out << csv_field(record.ws_id) << ',' << record.credibility << ','
            << record.usage_count << ','
            << format_double(reputation_score(record, mode, max_usage)) << ','
            << to_string(mode) << '\n';
    }
    return out.str();
}

}  // namespace wsqos
