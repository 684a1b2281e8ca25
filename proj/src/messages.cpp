#include "wsqos/messages.hpp"

#include <cmath>
#include <set>

#include "wsqos/errors.hpp"
#include "wsqos/qos.hpp"
#include "wsqos/text.hpp"
#include "wsqos/xml.hpp"

namespace wsqos {

namespace {

constexpr std::string_view kUddiNamespace = "urn:uddi-org:api";

void require_root(const xml::Element& root, std::string_view name) {
    if (xml::local_name(root.name) != name) {
        raise(ErrorCode::SchemaViolation,
              "expected <" + std::string(name) + "> document root, got <" +
                  root.name + ">",
              std::string(name));
    }
}

std::string required_text(const xml::Element& parent, std::string_view name) {
    const xml::Element* child = parent.child(name);
    if (child == nullptr) {
        raise(ErrorCode::SchemaViolation,
              "missing <" + std::string(name) + ">", std::string(name));
    }
    return child->text;
}

int parse_bounded_int(const std::string& text, std::string_view element,
                      long long min_value, long long max_value) {
    auto value = parse_integer(text);
    if (!value) {
        raise(ErrorCode::SchemaViolation,
              "'" + text + "' is not an integer", std::string(element));
    }
    if (*value < min_value || *value > max_value) {
        raise(ErrorCode::SchemaViolation,
              "value " + std::to_string(*value) + " outside [" +
                  std::to_string(min_value) + "," + std::to_string(max_value) + "]",
              std::string(element));
    }
    return static_cast<int>(*value);
}

}  // namespace

RequestMessage parse_request(std::string_view xml_text) {
    xml::Element root = xml::parse(xml_text);
    require_root(root, "find_service");

    RequestMessage message;
    message.functional_req = required_text(root, "functionalReq");

    std::set<std::string> seen_properties;
    for (const xml::Element* req : root.children_named("qualityReq")) {
        QualityReq quality;
        quality.property =
            normalize_property_name(required_text(*req, "property"));
        if (quality.property.empty()) {
            raise(ErrorCode::SchemaViolation, "empty <property>", "property");
        }
        if (!seen_properties.insert(quality.property).second) {
            raise(ErrorCode::SchemaViolation,
                  "duplicate property '" + quality.property + "'", "property");
        }
        auto value = parse_double(required_text(*req, "value"));
        if (!value || !std::isfinite(*value) || *value < 0) {
            raise(ErrorCode::SchemaViolation,
                  "non-numeric or negative <value>", "value");
        }
        quality.value = *value;
        quality.weight = parse_bounded_int(required_text(*req, "weight"),
                                           "weight", 1, 5);
        message.quality_reqs.push_back(std::move(quality));
    }

    if (const xml::Element* max = root.child("MaxService")) {
        message.max_service = parse_bounded_int(max->text, "MaxService", 1,
                                                1'000'000);
    } else {
        message.max_service = 1;
    }
    return message;
}

std::string serialize_request(const RequestMessage& message) {
    xml::Element root;
    root.name = "find_service";
    root.set_attribute("generic", "1.0");
    root.set_attribute("xmlns", std::string(kUddiNamespace));
    root.add_child("functionalReq").text = message.functional_req;
    for (const QualityReq& quality : message.quality_reqs) {
        xml::Element& req = root.add_child("qualityReq");
        req.add_child("property").text = quality.property;
        req.add_child("value").text = format_double(quality.value);
        req.add_child("weight").text = std::to_string(quality.weight);
    }
    root.add_child("MaxService").text = std::to_string(message.max_service);
    return xml::write(root);
}

TModelDocument parse_tmodel(std::string_view xml_text) {
    xml::Element root = xml::parse(xml_text);
    require_root(root, "tModel");

    TModelDocument document;
    if (auto key = root.attribute("tModelKey"); key && !key->empty()) {
        document.tmodel_key = *key;
    } else {
        raise(ErrorCode::SchemaViolation, "missing tModelKey attribute",
              "tModelKey");
    }
    if (const xml::Element* function = root.child("function")) {
        document.function = function->text;
    }
    document.ws_id = required_text(root, "ws_id");
    if (document.ws_id.empty()) {
        raise(ErrorCode::SchemaViolation, "empty <ws_id>", "ws_id");
    }
    if (const xml::Element* doc = root.child("overviewDoc")) {
        if (const xml::Element* url = doc->child("overviewURL")) {
            document.overview_url = url->text;
        }
    }

    std::set<std::string> seen_names;
    if (const xml::Element* bag = root.child("categoryBag")) {
        for (const xml::Element* ref : bag->children_named("keyedReference")) {
            KeyedReference reference;
            reference.tmodel_key = ref->attribute("tModelKey").value_or("");
            auto key_name = ref->attribute("keyName");
            if (!key_name || key_name->empty()) {
                raise(ErrorCode::SchemaViolation,
                      "keyedReference missing keyName", "keyName");
            }
            reference.key_name = *key_name;
            reference.key_value = ref->attribute("keyValue").value_or("");
            if (!seen_names.insert(normalize_property_name(reference.key_name))
                     .second) {
                raise(ErrorCode::SchemaViolation,
                      "duplicate keyName '" + reference.key_name + "'",
                      "keyName");
            }
            document.keyed_references.push_back(std::move(reference));
        }
    }
    return document;
}

std::string serialize_tmodel(const TModelDocument& document) {
    xml::Element root;
    root.name = "tModel";
    root.set_attribute("tModelKey", document.tmodel_key);
    if (!document.function.empty()) {
        root.add_child("function").text = document.function;
    }
    root.add_child("ws_id").text = document.ws_id;
    if (!document.overview_url.empty()) {
        root.add_child("overviewDoc").add_child("overviewURL").text =
            document.overview_url;
    }
    if (!document.keyed_references.empty()) {
        xml::Element& bag = root.add_child("categoryBag");
        for (const KeyedReference& reference : document.keyed_references) {
            xml::Element& ref = bag.add_child("keyedReference");
            if (!reference.tmodel_key.empty()) {
                ref.set_attribute("tModelKey", reference.tmodel_key);
            }
            ref.set_attribute("keyName", reference.key_name);
            ref.set_attribute("keyValue", reference.key_value);
        }
    }
    return xml::write(root);
}

DiscoveryQuery parse_find_tmodel(std::string_view xml_text) {
    xml::Element root = xml::parse(xml_text);
    require_root(root, "find_tModel");

    const xml::Element* bag = root.child("categoryBag");
    if (bag == nullptr) {
        raise(ErrorCode::SchemaViolation, "missing <categoryBag>",
              "categoryBag");
    }
    auto references = bag->children_named("keyedReference");
    if (references.empty()) {
        raise(ErrorCode::SchemaViolation,
              "categoryBag holds no keyedReference", "keyedReference");
    }
    // Only the first reference carries the query; extra refinements are not
    // modeled.
    const xml::Element& ref = *references.front();

    DiscoveryQuery query;
    query.find_key = ref.attribute("tM_find_Key").value_or("");
    auto key_name = ref.attribute("keyName");
    if (!key_name) {
        raise(ErrorCode::SchemaViolation, "keyedReference missing keyName",
              "keyName");
    }
    query.key_name = *key_name;
    if (auto limit = ref.attribute("keylimit")) {
        query.key_limit = parse_bounded_int(*limit, "keylimit", 1, 1'000'000);
    } else {
        query.key_limit = 50;
    }
    return query;
}

std::string serialize_find_tmodel(const DiscoveryQuery& query) {
    xml::Element root;
    root.name = "find_tModel";
    root.set_attribute("generic", "1.0");
    root.set_attribute("xmlns", std::string(kUddiNamespace));
    xml::Element& ref = root.add_child("categoryBag").add_child("keyedReference");
    if (!query.find_key.empty()) {
        ref.set_attribute("tM_find_Key", query.find_key);
    }
    ref.set_attribute("keyName", query.key_name);
    ref.set_attribute("keylimit", std::to_string(query.key_limit));
    return xml::write(root);
}

}  // namespace wsqos
