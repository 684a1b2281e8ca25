#include "wsqos/wsdl_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "wsqos/xml.hpp"

namespace wsqos {

namespace {

void collect_messages(const xml::Element& element,
                      std::map<std::string, int>& signature_counts,
                      int& part_count) {
    if (xml::local_name(element.name) == "message") {
        std::vector<std::string> part_types;
        for (const xml::Element& child : element.children) {
            if (xml::local_name(child.name) != "part") continue;
            ++part_count;
            std::string type;
            if (auto t = child.attribute("type")) type = *t;
            else if (auto e = child.attribute("element")) type = *e;
            part_types.emplace_back(xml::local_name(type));
        }
        std::sort(part_types.begin(), part_types.end());
        std::string signature;
        for (const std::string& t : part_types) {
            signature += t;
            signature += '|';
        }
        ++signature_counts[signature];
        return;
    }
    for (const xml::Element& child : element.children) {
        collect_messages(child, signature_counts, part_count);
    }
}

}  // namespace

InterfaceMetrics compute_wsdl_metrics(std::string_view wsdl_xml) {
    xml::Element root = xml::parse(wsdl_xml);

    std::map<std::string, int> signature_counts;
    int part_count = 0;
    collect_messages(root, signature_counts, part_count);

    InterfaceMetrics metrics;
    metrics.data_weight = part_count;
    metrics.distinct_message_count = static_cast<int>(signature_counts.size());
    for (const auto& [_, count] : signature_counts) {
        metrics.total_messages += count;
    }
    if (metrics.total_messages > 0 && metrics.distinct_message_count > 1) {
        double total = metrics.total_messages;
        for (const auto& [_, count] : signature_counts) {
            double p = count / total;
            metrics.message_entropy -= p * std::log2(p);
        }
    }
    metrics.message_repetition_scale =
        metrics.distinct_message_count > 0
            ? static_cast<double>(metrics.total_messages) /
                  metrics.distinct_message_count
            : 1.0;
    return metrics;
}

}  // namespace wsqos
