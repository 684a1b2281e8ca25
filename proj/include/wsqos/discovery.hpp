#pragma once

#include <string>
#include <vector>

#include "wsqos/messages.hpp"
#include "wsqos/store.hpp"

namespace wsqos {

// Lowercased alphanumeric tokens, minus tokens shorter than 3 chars and the
// stopwords {the, and, for, web, service, services}. Sorted, deduplicated.
std::vector<std::string> tokenize(std::string_view text);

// Distinct shared tokens between a query phrase and a service's searchable
// text (function name plus every keyedReference keyName).
int token_overlap(const std::vector<std::string>& query_tokens,
                  const ServiceRecord& record);

// ws_ids whose searchable text shares >= 1 token with the query phrase,
// ordered by overlap desc then ws_id asc, capped at key_limit.
std::vector<std::string> find_tmodel(const DiscoveryQuery& query, const Store& store);

// Same matching rule over a free-text functional requirement; uncapped.
std::vector<std::string> find_by_function(std::string_view keywords, const Store& store);

struct FetchResult {
    bool ok = false;
    int status = 0;          // HTTP status when a response arrived
    std::string body;
    std::string category;    // "ok", "timeout", "connection-refused", "dns", "non-2xx"
    std::string detail;
};

// Plain HTTP GET. Throws Error{InvalidUrl} when the URL is not http://.
FetchResult fetch_url(const std::string& url, int timeout_ms);

struct UrlRecord {
    std::string ws_id;
    std::string url;
};

struct ValidationEntry {
    std::string ws_id;
    std::string url;
    int status = 0;
    std::string category;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;  // input order
    int reachable = 0;
    int unreachable = 0;

    std::string to_csv() const;  // header ws_id,url,status,category
};

ValidationReport validate_dataset(const std::vector<UrlRecord>& records,
                                  int timeout_ms = 5000, int parallelism = 8);

}  // namespace wsqos
