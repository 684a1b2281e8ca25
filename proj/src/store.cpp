#include "wsqos/store.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "wsqos/errors.hpp"
#include "wsqos/text.hpp"

namespace wsqos {

namespace {

using nlohmann::json;

// First match wins; "response" also covers decorated names like
// "Avg_Response_Time".
const std::pair<std::string_view, QosProperty> kNameMap[] = {
    {"availability", QosProperty::Availability},
    {"throughput", QosProperty::Throughput},
    {"reliability", QosProperty::Reliability},
    {"response", QosProperty::ResponseTime},
    {"latency", QosProperty::Latency},
};

std::optional<QosProperty> match_qos_property(std::string_view key_name) {
    std::string lowered = lowercase_copy(key_name);
    for (const auto& [needle, property] : kNameMap) {
        if (lowered.find(needle) != std::string::npos) return property;
    }
    return std::nullopt;
}

json qos_to_json(const QoSVector& qos) {
    json out = json::object();
    for (const auto& [name, value] : qos.as_map()) out[name] = value;
    return out;
}

QoSVector qos_from_json(const json& j) {
    QoSVector out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out.set_named(it.key(), it.value().get<double>());
    }
    return out;
}

}  // namespace

QoSVector extract_assured_qos(const TModelDocument& tmodel) {
    QoSVector assured;
    for (const KeyedReference& ref : tmodel.keyed_references) {
        auto property = match_qos_property(ref.key_name);
        auto number = parse_qos_number(ref.key_value);
        if (!number) {
            if (property) {
                raise(ErrorCode::UnparseableQoSValue,
                      "keyValue '" + ref.key_value + "' for '" + ref.key_name +
                          "' is not numeric",
                      ref.key_name);
            }
            continue;  // metadata reference (e.g. a WSDL location)
        }
        double value = number->value;
        if (number->unit == "%") value /= 100.0;
        if (property) {
            if (*property == QosProperty::Availability ||
                *property == QosProperty::Reliability) {
                if (value > 1.0) value /= 100.0;  // bare percent scale
                if (value < 0.0 || value > 1.0) {
                    raise(ErrorCode::UnparseableQoSValue,
                          "'" + ref.key_value + "' for '" + ref.key_name +
                              "' is outside [0,1] even as a percentage",
                          ref.key_name);
                }
            }
            if (value < 0.0) {
                raise(ErrorCode::UnparseableQoSValue,
                      "negative value for '" + ref.key_name + "'",
                      ref.key_name);
            }
            assured.set(*property, value);
        } else {
            assured.extras[normalize_property_name(ref.key_name)] = value;
        }
    }
    return assured;
}

Store::Store(std::string journal_path) : journal_path_(std::move(journal_path)) {
    if (journal_path_.empty()) return;
    replay();
    journal_.open(journal_path_, std::ios::app);
    if (!journal_.is_open()) {
        raise(ErrorCode::ConfigError,
              "cannot open journal '" + journal_path_ + "' for append");
    }
}

void Store::replay() {
    std::ifstream in(journal_path_, std::ios::binary);
    if (!in.is_open()) return;  // fresh store
    std::ostringstream buffer;
    buffer << in.rdbuf();
    in.close();
    const std::string content = buffer.str();

    std::vector<std::pair<std::size_t, std::string>> lines;  // (offset, text)
    for (std::size_t begin = 0; begin < content.size();) {
        std::size_t end = content.find('\n', begin);
        std::size_t stop = end == std::string::npos ? content.size() : end;
        lines.emplace_back(begin, content.substr(begin, stop - begin));
        if (end == std::string::npos) break;
        begin = end + 1;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim_copy(lines[i].second).empty()) continue;
        try {
            apply_journal_line(lines[i].second, i + 1);
        } catch (const json::exception&) {
            // A torn final line is the expected crash artifact; anything
            // earlier means real corruption. Drop the torn tail so future
            // appends start on a clean line boundary.
            if (i + 1 == lines.size()) {
                std::error_code ec;
                std::filesystem::resize_file(journal_path_, lines[i].first, ec);
                if (ec) {
                    raise(ErrorCode::ConfigError,
                          "cannot truncate torn journal tail: " + ec.message());
                }
                break;
            }
            raise(ErrorCode::CorruptJournal,
                  "unparseable journal entry at line " + std::to_string(i + 1));
        }
    }
}

void Store::apply_journal_line(const std::string& line, std::size_t line_no) {
    json entry = json::parse(line);
    const std::string op = entry.at("op").get<std::string>();
    if (op == "publish") {
        TModelDocument tmodel = parse_tmodel(entry.at("tmodel").get<std::string>());
        ServiceRecord record;
        record.ws_id = tmodel.ws_id;
        record.assured_qos = extract_assured_qos(tmodel);
        record.tmodel = std::move(tmodel);
        record.wsdl_text = entry.value("wsdl", "");
        record.published_at = entry.at("at").get<std::int64_t>();
        last_published_at_ = std::max(last_published_at_, record.published_at);
        const std::string ws_id = record.ws_id;
        services_[ws_id] = std::move(record);
        reputations_[ws_id].ws_id = ws_id;
    } else if (op == "predict") {
        auto it = services_.find(entry.at("ws_id").get<std::string>());
        if (it != services_.end()) {
            it->second.predicted_qos = qos_from_json(entry.at("qos"));
        }
    } else if (op == "wsdl") {
        auto it = services_.find(entry.at("ws_id").get<std::string>());
        if (it != services_.end()) {
            it->second.wsdl_text = entry.at("body").get<std::string>();
        }
    } else if (op == "cred") {
        ReputationRecord& record = reputations_[entry.at("ws_id").get<std::string>()];
        record.ws_id = entry.at("ws_id").get<std::string>();
        record.credibility = entry.at("value").get<int>();
        record.compared_properties = entry.value("compared", 0);
    } else if (op == "usage") {
        ReputationRecord& record = reputations_[entry.at("ws_id").get<std::string>()];
        record.ws_id = entry.at("ws_id").get<std::string>();
        record.usage_count += entry.value("count", 1L);
    } else if (op == "remove") {
        services_.erase(entry.at("ws_id").get<std::string>());
        reputations_.erase(entry.at("ws_id").get<std::string>());
    } else {
        raise(ErrorCode::CorruptJournal,
              "unknown journal op '" + op + "' at line " + std::to_string(line_no));
    }
}

void Store::append(const std::string& line) {
    if (journal_path_.empty()) return;
    journal_ << line << '\n';
    journal_.flush();
}

std::int64_t Store::next_publish_stamp() {
    auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();
    last_published_at_ = std::max<std::int64_t>(now, last_published_at_ + 1);
    return last_published_at_;
}

std::string Store::publish(const TModelDocument& tmodel, std::string wsdl_text) {
    std::unique_lock lock(mutex_);
    if (tmodel.ws_id.empty()) {
        raise(ErrorCode::SchemaViolation, "tModel carries no ws_id", "ws_id");
    }
    if (services_.contains(tmodel.ws_id)) {
        raise(ErrorCode::DuplicateId,
              "ws_id '" + tmodel.ws_id + "' is already published");
    }
    ServiceRecord record;
    record.ws_id = tmodel.ws_id;
    record.tmodel = tmodel;
    record.wsdl_text = std::move(wsdl_text);
    record.assured_qos = extract_assured_qos(tmodel);
    record.published_at = next_publish_stamp();

    json entry = {{"op", "publish"},
                  {"tmodel", serialize_tmodel(tmodel)},
                  {"at", record.published_at}};
    if (!record.wsdl_text.empty()) entry["wsdl"] = record.wsdl_text;
    append(entry.dump());

    reputations_[record.ws_id].ws_id = record.ws_id;
    services_[record.ws_id] = std::move(record);
    return tmodel.ws_id;
}

ServiceRecord& Store::locked_get(const std::string& ws_id) {
    auto it = services_.find(ws_id);
    if (it == services_.end()) {
        raise(ErrorCode::NotFound, "no service '" + ws_id + "'");
    }
    return it->second;
}

ServiceRecord Store::get(const std::string& ws_id) const {
    std::shared_lock lock(mutex_);
    auto it = services_.find(ws_id);
    if (it == services_.end()) {
        raise(ErrorCode::NotFound, "no service '" + ws_id + "'");
    }
    return it->second;
}

bool Store::contains(const std::string& ws_id) const {
    std::shared_lock lock(mutex_);
    return services_.contains(ws_id);
}

void Store::set_predicted_qos(const std::string& ws_id, const QoSVector& qos) {
    std::unique_lock lock(mutex_);
    ServiceRecord& record = locked_get(ws_id);
    append(json{{"op", "predict"}, {"ws_id", ws_id}, {"qos", qos_to_json(qos)}}
               .dump());
    record.predicted_qos = qos;
}

void Store::set_wsdl_text(const std::string& ws_id, const std::string& wsdl_text) {
    std::unique_lock lock(mutex_);
    ServiceRecord& record = locked_get(ws_id);
    append(json{{"op", "wsdl"}, {"ws_id", ws_id}, {"body", wsdl_text}}.dump());
    record.wsdl_text = wsdl_text;
}

void Store::remove(const std::string& ws_id) {
    std::unique_lock lock(mutex_);
    if (!services_.contains(ws_id)) {
        raise(ErrorCode::NotFound, "no service '" + ws_id + "'");
    }
    append(json{{"op", "remove"}, {"ws_id", ws_id}}.dump());
    services_.erase(ws_id);
    reputations_.erase(ws_id);
}

std::vector<ServiceRecord> Store::list_all() const {
    std::shared_lock lock(mutex_);
    std::vector<ServiceRecord> out;
    out.reserve(services_.size());
    for (const auto& [_, record] : services_) out.push_back(record);
    std::sort(out.begin(), out.end(),
              [](const ServiceRecord& a, const ServiceRecord& b) {
                  if (a.published_at != b.published_at) {
                      return a.published_at < b.published_at;
                  }
                  return a.ws_id < b.ws_id;
              });
    return out;
}

std::size_t Store::size() const {
    std::shared_lock lock(mutex_);
    return services_.size();
}

void Store::set_credibility(const std::string& ws_id, int value, int compared) {
    std::unique_lock lock(mutex_);
    if (!services_.contains(ws_id)) {
        raise(ErrorCode::NotFound, "no service '" + ws_id + "'");
    }
    append(json{{"op", "cred"},
                {"ws_id", ws_id},
                {"value", value},
                {"compared", compared}}
               .dump());
    ReputationRecord& record = reputations_[ws_id];
    record.ws_id = ws_id;
    record.credibility = value;
    record.compared_properties = compared;
}

long Store::record_usage(const std::string& ws_id) {
    std::unique_lock lock(mutex_);
    if (!services_.contains(ws_id)) {
        raise(ErrorCode::NotFound, "no service '" + ws_id + "'");
    }
    append(json{{"op", "usage"}, {"ws_id", ws_id}}.dump());
    ReputationRecord& record = reputations_[ws_id];
    record.ws_id = ws_id;
    return ++record.usage_count;
}

ReputationRecord Store::reputation(const std::string& ws_id) const {
    std::shared_lock lock(mutex_);
    auto it = reputations_.find(ws_id);
    if (it == reputations_.end()) {
        raise(ErrorCode::NotFound, "no reputation record for '" + ws_id + "'");
    }
    return it->second;
}

std::vector<ReputationRecord> Store::reputation_all() const {
    std::shared_lock lock(mutex_);
    std::vector<ReputationRecord> out;
    out.reserve(reputations_.size());
    for (const auto& [_, record] : reputations_) out.push_back(record);
    return out;
}

void Store::compact() {
    std::unique_lock lock(mutex_);
    if (journal_path_.empty()) return;
    journal_.close();
    std::string tmp = journal_path_ + ".compact";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out.is_open()) {
            raise(ErrorCode::ConfigError, "cannot write '" + tmp + "'");
        }
        for (const auto& [_, record] : services_) {
            json entry = {{"op", "publish"},
                          {"tmodel", serialize_tmodel(record.tmodel)},
                          {"at", record.published_at}};
            if (!record.wsdl_text.empty()) entry["wsdl"] = record.wsdl_text;
            out << entry.dump() << '\n';
            if (record.predicted_qos) {
                out << json{{"op", "predict"},
                            {"ws_id", record.ws_id},
                            {"qos", qos_to_json(*record.predicted_qos)}}
                           .dump()
                    << '\n';
            }
        }
        for (const auto& [ws_id, record] : reputations_) {
            if (!services_.contains(ws_id)) continue;
            if (record.credibility != 0 || record.compared_properties != 0) {
                out << json{{"op", "cred"},
                            {"ws_id", ws_id},
                            {"value", record.credibility},
                            {"compared", record.compared_properties}}
                           .dump()
                    << '\n';
            }
            if (record.usage_count > 0) {
                out << json{{"op", "usage"},
                            {"ws_id", ws_id},
                            {"count", record.usage_count}}
                           .dump()
                    << '\n';
            }
        }
        out.flush();
    }
    std::rename(tmp.c_str(), journal_path_.c_str());
    journal_.open(journal_path_, std::ios::app);
}

}  // namespace wsqos
