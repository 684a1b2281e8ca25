#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace wsqos {

// The five canonical QoS properties. Everything else a provider publishes
// (e.g. "price") travels in QoSVector::extras.
enum class QosProperty {
    ResponseTime,
    Availability,
    Throughput,
    Reliability,
    Latency,
};

inline constexpr std::array<QosProperty, 5> kCanonicalProperties = {
    QosProperty::ResponseTime, QosProperty::Availability,
    QosProperty::Throughput,   QosProperty::Reliability,
    QosProperty::Latency,
};

enum class Direction { LowerBetter, HigherBetter };

std::string_view canonical_name(QosProperty p);
std::optional<QosProperty> property_from_name(std::string_view normalized);
Direction direction_of(QosProperty p);

// Direction for an arbitrary (normalized) property name. Unknown extension
// properties default to lower-better, like "price".
Direction direction_of_name(std::string_view normalized);

// lowercase, '_'/'-' and whitespace runs collapsed to single spaces, trimmed.
std::string normalize_property_name(std::string_view name);

// Numeric payload of a keyedReference / quality constraint: an optional
// leading comparator (< > <= >=), a decimal, and an optional trailing unit
// from {% ms s Mbps bps}.
struct QosNumber {
    double value = 0.0;
    std::string comparator;  // "" when absent
    std::string unit;        // "" when absent
};
std::optional<QosNumber> parse_qos_number(std::string_view raw);

struct QoSVector {
    std::optional<double> response_time;  // ms
    std::optional<double> availability;   // fraction in [0,1]
    std::optional<double> throughput;     // invocations/s
    std::optional<double> reliability;    // fraction in [0,1]
    std::optional<double> latency;        // ms
    std::map<std::string, double> extras; // normalized name -> value

    std::optional<double> get(QosProperty p) const;
    void set(QosProperty p, double value);

    // Lookup by normalized property name across canonical fields and extras.
    std::optional<double> get_named(std::string_view normalized) const;
    void set_named(const std::string& normalized, double value);

    // (name, value) pairs for every property present, canonical order then
    // extras in map order.
    std::map<std::string, double> as_map() const;
    static QoSVector from_map(const std::map<std::string, double>& values);

    bool empty() const;
    bool operator==(const QoSVector&) const = default;
};

}  // namespace wsqos
