#include "wsqos/qos.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace wsqos {

std::string_view canonical_name(QosProperty p) {
    switch (p) {
        case QosProperty::ResponseTime: return "response time";
        case QosProperty::Availability: return "availability";
        case QosProperty::Throughput: return "throughput";
        case QosProperty::Reliability: return "reliability";
        case QosProperty::Latency: return "latency";
    }
    return "";
}

std::optional<QosProperty> property_from_name(std::string_view normalized) {
    for (QosProperty p : kCanonicalProperties) {
        if (canonical_name(p) == normalized) return p;
    }
    return std::nullopt;
}

Direction direction_of(QosProperty p) {
    switch (p) {
        case QosProperty::ResponseTime:
        case QosProperty::Latency:
            return Direction::LowerBetter;
        case QosProperty::Availability:
        case QosProperty::Throughput:
        case QosProperty::Reliability:
            return Direction::HigherBetter;
    }
    return Direction::LowerBetter;
}

Direction direction_of_name(std::string_view normalized) {
    if (auto p = property_from_name(normalized)) return direction_of(*p);
    return Direction::LowerBetter;
}

std::string normalize_property_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool pending_space = false;
    for (char c : name) {
        if (c == '_' || c == '-' || std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::optional<QosNumber> parse_qos_number(std::string_view raw) {
    size_t begin = 0, end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string_view s = raw.substr(begin, end - begin);
    if (s.empty()) return std::nullopt;

    QosNumber out;
    for (std::string_view cmp : {"<=", ">=", "<", ">"}) {
        if (s.substr(0, cmp.size()) == cmp) {
            out.comparator = std::string(cmp);
            s.remove_prefix(cmp.size());
            break;
        }
    }
    // Longest unit first so "Mbps" is not consumed as "bps"/"s".
    for (std::string_view unit : {"Mbps", "bps", "ms", "s", "%"}) {
        if (s.size() > unit.size() &&
            s.substr(s.size() - unit.size()) == unit) {
            out.unit = std::string(unit);
            s.remove_suffix(unit.size());
            break;
        }
    }
    std::string body(s);
    if (body.empty()) return std::nullopt;
    char* parse_end = nullptr;
    out.value = std::strtod(body.c_str(), &parse_end);
    if (parse_end != body.c_str() + body.size()) return std::nullopt;
    if (!std::isfinite(out.value)) return std::nullopt;
    return out;
}

std::optional<double> QoSVector::get(QosProperty p) const {
    switch (p) {
        case QosProperty::ResponseTime: return response_time;
        case QosProperty::Availability: return availability;
        case QosProperty::Throughput: return throughput;
        case QosProperty::Reliability: return reliability;
        case QosProperty::Latency: return latency;
    }
    return std::nullopt;
}

void QoSVector::set(QosProperty p, double value) {
    switch (p) {
        case QosProperty::ResponseTime: response_time = value; break;
        case QosProperty::Availability: availability = value; break;
        case QosProperty::Throughput: throughput = value; break;
        case QosProperty::Reliability: reliability = value; break;
        case QosProperty::Latency: latency = value; break;
    }
}

std::optional<double> QoSVector::get_named(std::string_view normalized) const {
    if (auto p = property_from_name(normalized)) return get(*p);
    auto it = extras.find(std::string(normalized));
    if (it != extras.end()) return it->second;
    return std::nullopt;
}

void QoSVector::set_named(const std::string& normalized, double value) {
    if (auto p = property_from_name(normalized)) {
        set(*p, value);
    } else {
        extras[normalized] = value;
    }
}

std::map<std::string, double> QoSVector::as_map() const {
    std::map<std::string, double> out;
    for (QosProperty p : kCanonicalProperties) {
        if (auto v = get(p)) out[std::string(canonical_name(p))] = *v;
    }
    for (const auto& [name, value] : extras) out[name] = value;
    return out;
}

QoSVector QoSVector::from_map(const std::map<std::string, double>& values) {
    QoSVector out;
    for (const auto& [name, value] : values) out.set_named(name, value);
    return out;
}

bool QoSVector::empty() const {
    return !response_time && !availability && !throughput && !reliability &&
           !latency && extras.empty();
}

}  // namespace wsqos
