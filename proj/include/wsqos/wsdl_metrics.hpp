#pragma once

#include <array>
#include <string>
#include <string_view>

namespace wsqos {

// Message-level interface metrics computed from a WSDL body. A message's
// structural signature is the sorted list of its part type names (namespace
// prefixes stripped).
struct InterfaceMetrics {
    int data_weight = 0;              // total <part> elements
    int total_messages = 0;
    int distinct_message_count = 0;   // distinct structural signatures
    double message_entropy = 0.0;     // bits, over signature frequencies
    double message_repetition_scale = 1.0;  // total / distinct, 1 when empty

    std::array<double, 4> as_features() const {
        return {static_cast<double>(data_weight),
                static_cast<double>(distinct_message_count), message_entropy,
                message_repetition_scale};
    }
};

// Feature-column names matching as_features(), used when a trained model is
// applied to freshly computed interface metrics.
inline constexpr std::array<std::string_view, 4> kInterfaceMetricNames = {
    "data weight", "distinct message count", "message entropy",
    "message repetition scale"};

InterfaceMetrics compute_wsdl_metrics(std::string_view wsdl_xml);

}  // namespace wsqos
