#pragma once

#include <string>
#include <vector>

namespace wsqos {

// The three XML wire formats of the registry: find_service requests,
// tModel service descriptions and find_tModel discovery queries.
//
// Canonical grammar (UTF-8, xmlns="urn:uddi-org:api" accepted and ignored):
//
//   <find_service generic="1.0">
//     <functionalReq>...</functionalReq>
//     <qualityReq><property/><value/><weight/></qualityReq>*
//     <MaxService>n</MaxService>
//   </find_service>
//
//   <tModel tModelKey="...">
//     <function/> <ws_id/> <overviewDoc><overviewURL/></overviewDoc>
//     <categoryBag>
//       <keyedReference tModelKey=".." keyName=".." keyValue=".."/>*
//     </categoryBag>
//   </tModel>
//
//   <find_tModel generic="1.0">
//     <categoryBag>
//       <keyedReference tM_find_Key=".." keyName=".." keylimit="n"/>
//     </categoryBag>
//   </find_tModel>

struct QualityReq {
    std::string property;  // normalized name
    double value = 0.0;    // constraint threshold, finite and >= 0
    int weight = 1;        // 1 (low) .. 5 (high)

    bool operator==(const QualityReq&) const = default;
};

struct RequestMessage {
    std::string functional_req;
    std::vector<QualityReq> quality_reqs;  // property names unique
    int max_service = 1;

    bool operator==(const RequestMessage&) const = default;
};

struct KeyedReference {
    std::string tmodel_key;
    std::string key_name;
    std::string key_value;  // verbatim, unit suffix preserved

    bool operator==(const KeyedReference&) const = default;
};

struct TModelDocument {
    std::string tmodel_key;
    std::string function;
    std::string ws_id;
    std::string overview_url;
    std::vector<KeyedReference> keyed_references;  // document order

    bool operator==(const TModelDocument&) const = default;
};

struct DiscoveryQuery {
    std::string find_key;   // opaque correlation string
    std::string key_name;   // free-text category phrase
    int key_limit = 50;

    bool operator==(const DiscoveryQuery&) const = default;
};

RequestMessage parse_request(std::string_view xml_text);
std::string serialize_request(const RequestMessage& message);

TModelDocument parse_tmodel(std::string_view xml_text);
std::string serialize_tmodel(const TModelDocument& document);

DiscoveryQuery parse_find_tmodel(std::string_view xml_text);
std::string serialize_find_tmodel(const DiscoveryQuery& query);

}  // namespace wsqos
