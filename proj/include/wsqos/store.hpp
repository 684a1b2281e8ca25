#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "wsqos/messages.hpp"
#include "wsqos/qos.hpp"

namespace wsqos {

struct ServiceRecord {
    std::string ws_id;
    TModelDocument tmodel;
    std::string wsdl_text;  // cached WSDL body, may be empty
    QoSVector assured_qos;
    std::optional<QoSVector> predicted_qos;
    std::int64_t published_at = 0;  // ms since epoch, strictly increasing

    bool operator==(const ServiceRecord&) const = default;
};

struct ReputationRecord {
    std::string ws_id;
    int credibility = 0;          // C_WSi: matched-property count
    int compared_properties = 0;  // properties the credibility was taken over
    long usage_count = 0;         // WS_count

    bool operator==(const ReputationRecord&) const = default;
};

// Extracts the provider-assured QoS from a tModel's keyedReferences.
// keyName matching is case-insensitive contains-match on the five canonical
// names ("response" covers response time); percent-suffixed values are scaled
// by 1/100, as are bare availability/reliability values above 1. References
// that name a QoS property but do not parse numerically raise
// UnparseableQoSValue; other non-numeric references are treated as metadata
// and skipped; remaining numeric references land in the extras map.
QoSVector extract_assured_qos(const TModelDocument& tmodel);

// Durable registry of services and reputation records keyed by ws_id.
// Persistence is an append-only journal of JSON lines, fully replayed at
// construction; every mutation is appended and flushed before it returns.
// Concurrency: any number of readers, one writer at a time.
class Store {
public:
    // Empty path keeps the store memory-only (tests).
    explicit Store(std::string journal_path = "");

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    std::string publish(const TModelDocument& tmodel, std::string wsdl_text = "");
    ServiceRecord get(const std::string& ws_id) const;
    bool contains(const std::string& ws_id) const;
    void set_predicted_qos(const std::string& ws_id, const QoSVector& qos);
    void set_wsdl_text(const std::string& ws_id, const std::string& wsdl_text);
    void remove(const std::string& ws_id);
    std::vector<ServiceRecord> list_all() const;
    std::size_t size() const;

    void set_credibility(const std::string& ws_id, int value, int compared);
    long record_usage(const std::string& ws_id);
    ReputationRecord reputation(const std::string& ws_id) const;
    std::vector<ReputationRecord> reputation_all() const;

    // Rewrites the journal as one entry per current record.
    void compact();

    const std::string& journal_path() const { return journal_path_; }

private:
    void replay();
    void append(const std::string& line);
    void apply_journal_line(const std::string& line, std::size_t line_no);
    std::int64_t next_publish_stamp();

    ServiceRecord& locked_get(const std::string& ws_id);

    std::string journal_path_;
    std::ofstream journal_;
    std::map<std::string, ServiceRecord> services_;
    std::map<std::string, ReputationRecord> reputations_;
    std::int64_t last_published_at_ = 0;
    mutable std::shared_mutex mutex_;
};

}  // namespace wsqos
