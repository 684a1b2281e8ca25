#include "wsqos/discovery.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cctype>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "wsqos/errors.hpp"
#include "wsqos/text.hpp"

namespace wsqos {

namespace {

const std::set<std::string, std::less<>> kStopwords = {
    "the", "and", "for", "web", "service", "services"};

struct ParsedUrl {
    std::string host;
    int port = 80;
    std::string path = "/";
};

ParsedUrl parse_http_url(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    if (url.size() <= scheme.size() ||
        lowercase_copy(url.substr(0, scheme.size())) != scheme) {
        raise(ErrorCode::InvalidUrl, "expected http:// URL, got '" + url + "'");
    }
    std::string rest = url.substr(scheme.size());
    ParsedUrl out;
    size_t slash = rest.find('/');
    std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : rest.substr(slash);
    size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
        auto port = parse_integer(authority.substr(colon + 1));
        if (!port || *port < 1 || *port > 65535) {
            raise(ErrorCode::InvalidUrl, "bad port in '" + url + "'");
        }
        out.port = static_cast<int>(*port);
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) {
        raise(ErrorCode::InvalidUrl, "missing host in '" + url + "'");
    }
    out.host = authority;
    return out;
}

// The HTTP client library reports refused connections and read timeouts with
// the same error, so failure categories come from a raw connect probe.
// Returns the failure category, or nullopt when the host accepts a connection.
std::optional<std::string> probe_connect(const std::string& host, int port,
                                         int timeout_ms) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* list = nullptr;
    if (getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &list) != 0) {
        return "dns";
    }
    std::string category = "connection-refused";
    for (addrinfo* ai = list; ai != nullptr; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK,
                          ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            ::close(fd);
            freeaddrinfo(list);
            return std::nullopt;
        }
        if (errno == EINPROGRESS) {
            pollfd pfd{fd, POLLOUT, 0};
            int ready = ::poll(&pfd, 1, timeout_ms);
            if (ready > 0) {
                int err = 0;
                socklen_t len = sizeof err;
                ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
                if (err == 0) {
                    ::close(fd);
                    freeaddrinfo(list);
                    return std::nullopt;
                }
                category = err == ETIMEDOUT ? "timeout" : "connection-refused";
            } else if (ready == 0) {
                category = "timeout";
            }
        }
        ::close(fd);
    }
    freeaddrinfo(list);
    return category;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::set<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= 3 && !kStopwords.contains(current)) {
            tokens.insert(current);
        }
        current.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            flush();
        }
    }
    flush();
    return {tokens.begin(), tokens.end()};
}

int token_overlap(const std::vector<std::string>& query_tokens,
                  const ServiceRecord& record) {
    std::set<std::string> service_tokens;
    for (const std::string& t : tokenize(record.tmodel.function)) {
        service_tokens.insert(t);
    }
    for (const KeyedReference& ref : record.tmodel.keyed_references) {
        for (const std::string& t : tokenize(ref.key_name)) {
            service_tokens.insert(t);
        }
    }
    int overlap = 0;
    for (const std::string& t : query_tokens) {
        if (service_tokens.contains(t)) ++overlap;
    }
    return overlap;
}

namespace {

std::vector<std::string> match_services(std::string_view phrase,
                                        const Store& store, int cap) {
    std::vector<std::string> query_tokens = tokenize(phrase);
    std::vector<std::pair<int, std::string>> hits;  // (-overlap, ws_id)
    for (const ServiceRecord& record : store.list_all()) {
        int overlap = token_overlap(query_tokens, record);
        if (overlap > 0) hits.emplace_back(-overlap, record.ws_id);
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::string> out;
    for (const auto& [_, ws_id] : hits) {
        if (cap >= 0 && static_cast<int>(out.size()) >= cap) break;
        out.push_back(ws_id);
    }
    return out;
}

}  // namespace

std::vector<std::string> find_tmodel(const DiscoveryQuery& query, const Store& store) {
    return match_services(query.key_name, store, query.key_limit);
}

std::vector<std::string> find_by_function(std::string_view keywords, const Store& store) {
    return match_services(keywords, store, -1);
}

FetchResult fetch_url(const std::string& url, int timeout_ms) {
    ParsedUrl parsed = parse_http_url(url);
    FetchResult result;
    if (auto failure = probe_connect(parsed.host, parsed.port, timeout_ms)) {
        result.category = *failure;
        result.detail = "cannot connect to '" + parsed.host + ":" +
                        std::to_string(parsed.port) + "'";
        return result;
    }
    httplib::Client client(parsed.host, parsed.port);
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(0, timeout_ms * 1000);
    client.set_write_timeout(0, timeout_ms * 1000);

    httplib::Result response = client.Get(parsed.path);
    if (!response) {
        // the probe just connected, so a failure here is the request stalling
        result.category = response.error() == httplib::Error::Connection
                              ? "connection-refused"
                              : "timeout";
        result.detail = httplib::to_string(response.error());
        return result;
    }
    result.status = response->status;
    if (response->status >= 200 && response->status < 300) {
        result.ok = true;
        result.category = "ok";
        result.body = response->body;
    } else {
        result.category = "non-2xx";
    }
    return result;
}

ValidationReport validate_dataset(const std::vector<UrlRecord>& records,
                                  int timeout_ms, int parallelism) {
    ValidationReport report;
    report.entries.resize(records.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= records.size()) return;
            ValidationEntry& entry = report.entries[i];
            entry.ws_id = records[i].ws_id;
            entry.url = records[i].url;
            try {
                FetchResult fetched = fetch_url(records[i].url, timeout_ms);
                entry.status = fetched.status;
                entry.category = fetched.category;
            } catch (const Error&) {
                entry.category = "invalid-url";
            }
        }
    };

    int workers = std::clamp<int>(parallelism, 1,
                                  static_cast<int>(std::max<std::size_t>(records.size(), 1)));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    for (const ValidationEntry& entry : report.entries) {
        if (entry.category == "ok") ++report.reachable;
        else ++report.unreachable;
    }
    return report;
}

std::string ValidationReport::to_csv() const {
    std::ostringstream out;
    out << "ws_id,url,status,category\n";
    for (const ValidationEntry& entry : entries) {
        out << csv_field(entry.ws_id) << ',' << csv_field(entry.url) << ','
            << entry.status << ',' << entry.category << '\n';
    }
    return out.str();
}

}  // namespace wsqos
