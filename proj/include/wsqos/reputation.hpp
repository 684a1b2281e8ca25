#pragma once

#include <string>
#include <vector>

#include "wsqos/qos.hpp"
#include "wsqos/selector.hpp"
#include "wsqos/store.hpp"

namespace wsqos {

// Number of properties present in both vectors whose values agree within a
// relative tolerance: |predicted - assured| <= tolerance * max(|assured|, 1e-9).
// tolerance 0 recovers exact-match counting.
int credibility(const QoSVector& predicted, const QoSVector& assured,
                double tolerance);

// Properties present in both vectors, i.e. the count credibility is taken over.
int comparable_properties(const QoSVector& predicted, const QoSVector& assured);

enum class ReputationMode {
    Literal,     // credibility + usage count
    Normalized,  // 0.5*(credibility/P) + 0.5*(usage/max usage among candidates)
};

ReputationMode reputation_mode_from_string(std::string_view name);
std::string_view to_string(ReputationMode mode);

double reputation_score(const ReputationRecord& record, ReputationMode mode,
                        long max_usage_among_candidates = 0);

struct FinalChoice {
    std::string ws_id;
    std::string overview_url;
    double qos_score = 0.0;
    double reputation = 0.0;
    bool from_assured = false;
};

struct FinalizeOptions {
    ReputationMode mode = ReputationMode::Literal;
    bool count_usage = true;  // usage is recorded at WSDL handoff
};

// Takes the top max_service entries of the QoS ranking, reorders that slice
// by reputation (descending, QoS order preserved on ties) and records one
// usage per returned service.
std::vector<FinalChoice> finalize(const std::vector<ScoredService>& ranked,
                                  int max_service, Store& store,
                                  const FinalizeOptions& options = {});

std::string reputation_to_csv(const std::vector<ReputationRecord>& records,
                              ReputationMode mode);

}  // namespace wsqos
