#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "wsqos/errors.hpp"
#include "wsqos/messages.hpp"
#include "wsqos/xml.hpp"

using namespace wsqos;

namespace {

template <typename F>
ErrorCode thrown_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::ConfigError;
}

constexpr const char* kRequestListing = R"(<?xml version="1.0" encoding="UTF-8"?>
<find_service generic="1.0" xmlns="urn:uddi-org:api">
  <functionalReq>credit card validation</functionalReq>
  <qualityReq>
    <property>price</property>
    <value>0.01</value>
    <weight>2</weight>
  </qualityReq>
  <qualityReq>
    <property>Response time</property>
    <value>0.05</value>
    <weight>3</weight>
  </qualityReq>
  <MaxService>2</MaxService>
</find_service>
)";

constexpr const char* kTModelListing = R"(<tModel tModelKey="mycompany.com:StockQuote:QoS">
  <function>Stock_Quote_Service</function>
  <ws_id>abdc12345</ws_id>
  <overviewDoc>
    <overviewURL>http://quotes.example.com/qos.wsdl</overviewURL>
  </overviewDoc>
  <categoryBag>
    <keyedReference tModelKey="uddi:uddi.org:QoS:Availability"
                    keyName="Availability" keyValue="99.9%"/>
    <keyedReference tModelKey="uddi:uddi.org:QoS:Throughput"
                    keyName="Average_Throughput" keyValue="&gt;10Mbps"/>
    <keyedReference tModelKey="uddi:uddi.org:QoS:Reliability"
                    keyName="Average_Reliability" keyValue="99.9%"/>
  </categoryBag>
</tModel>
)";

constexpr const char* kDiscoveryListing = R"(<find_tModel generic="1.0" xmlns="urn:uddi-org:api">
  <categoryBag>
    <keyedReference tM_find_Key="UUID:DB77450D-9FA8"
                    keyName="Stock market trading services"
                    keylimit="50"/>
  </categoryBag>
</find_tModel>
)";

// Deterministic value generators for the round-trip properties.
struct Gen {
    std::mt19937 rng{987654321u};

    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
    }

    std::string word(int min_len, int max_len) {
        int len = range(min_len, max_len);
        std::string out;
        for (int i = 0; i < len; ++i) out += static_cast<char>('a' + range(0, 25));
        return out;
    }

    // Normalization-stable property name: lowercase words, single spaces.
    std::string property_name() {
        std::string out = word(3, 8);
        for (int i = range(0, 2); i > 0; --i) out += " " + word(3, 8);
        return out;
    }

    // Trim-stable free text with XML-hostile characters.
    std::string text() {
        static const std::string pool =
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
            "&<>\"'%/:=.,-_ ";
        int len = range(1, 30);
        std::string out;
        for (int i = 0; i < len; ++i) out += pool[rng() % pool.size()];
        if (out.front() == ' ') out.front() = 'x';
        if (out.back() == ' ') out.back() = 'x';
        return out;
    }

    double number() {
        std::uniform_real_distribution<double> uniform(0.0, 1000.0);
        double v = uniform(rng);
        // every other draw is an awkward non-round decimal
        return range(0, 1) ? v : v / 3.0;
    }

    RequestMessage request() {
        RequestMessage m;
        m.functional_req = text();
        std::set<std::string> used;
        for (int i = range(0, 5); i > 0; --i) {
            QualityReq q;
            do {
                q.property = property_name();
            } while (!used.insert(q.property).second);
            q.value = number();
            q.weight = range(1, 5);
            m.quality_reqs.push_back(q);
        }
        m.max_service = range(1, 40);
        return m;
    }

    TModelDocument tmodel() {
        TModelDocument d;
        d.tmodel_key = "uddi:" + word(4, 12);
        if (range(0, 3) > 0) d.function = text();
        d.ws_id = word(6, 12);
        if (range(0, 3) > 0) d.overview_url = "http://" + word(4, 10) + "/" + word(3, 8);
        std::set<std::string> used;
        for (int i = range(0, 6); i > 0; --i) {
            KeyedReference r;
            do {
                r.key_name = property_name();
            } while (!used.insert(r.key_name).second);
            if (range(0, 1)) r.tmodel_key = "uddi:" + word(3, 9);
            r.key_value = text();
            d.keyed_references.push_back(r);
        }
        return d;
    }

    DiscoveryQuery query() {
        DiscoveryQuery q;
        if (range(0, 3) > 0) q.find_key = "UUID:" + word(8, 8);
        q.key_name = text();
        q.key_limit = range(1, 500);
        return q;
    }
};

}  // namespace

TEST_CASE("request message parses to its documented field values") {
    RequestMessage m = parse_request(kRequestListing);
    CHECK(m.functional_req == "credit card validation");
    REQUIRE(m.quality_reqs.size() == 2);
    CHECK(m.quality_reqs[0] == QualityReq{"price", 0.01, 2});
    CHECK(m.quality_reqs[1] == QualityReq{"response time", 0.05, 3});
    CHECK(m.max_service == 2);
}

TEST_CASE("request message defaults and minimal documents") {
    RequestMessage no_reqs = parse_request(
        "<find_service><functionalReq>payments</functionalReq>"
        "<MaxService>1</MaxService></find_service>");
    CHECK(no_reqs.quality_reqs.empty());
    CHECK(no_reqs.max_service == 1);

    RequestMessage no_cap = parse_request(
        "<find_service><functionalReq>payments</functionalReq></find_service>");
    CHECK(no_cap.max_service == 1);
}

TEST_CASE("request property names are case and separator normalized") {
    RequestMessage m = parse_request(
        "<find_service><functionalReq>x</functionalReq><qualityReq>"
        "<property>  Response \t Time </property><value>1</value>"
        "<weight>3</weight></qualityReq></find_service>");
    CHECK(m.quality_reqs[0].property == "response time");
}

TEST_CASE("request schema violations are diagnosed") {
    auto req = [](const std::string& quality, const std::string& cap = "") {
        return "<find_service><functionalReq>x</functionalReq>" + quality +
               cap + "</find_service>";
    };
    auto quality = [](const std::string& p, const std::string& v,
                      const std::string& w) {
        return "<qualityReq><property>" + p + "</property><value>" + v +
               "</value><weight>" + w + "</weight></qualityReq>";
    };

    CHECK(thrown_code([&] { parse_request(req(quality("price", "1", "6"))); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] { parse_request(req(quality("price", "1", "0"))); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] { parse_request(req(quality("price", "cheap", "2"))); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] { parse_request(req(quality("price", "-3", "2"))); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] { parse_request(req(quality("price", "1", "two"))); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] {
        parse_request(req(quality("price", "1", "2") + quality("Price", "2", "3")));
    }) == ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] { parse_request(req("", "<MaxService>0</MaxService>")); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] { parse_request("<find_service/>"); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([&] { parse_request("<tModel tModelKey='k'/>"); }) ==
          ErrorCode::SchemaViolation);

    try {
        parse_request(req(quality("price", "1", "9")));
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(e.element() == "weight");
    }
}

TEST_CASE("request messages round-trip through serialization") {
    RequestMessage listing = parse_request(kRequestListing);
    CHECK(parse_request(serialize_request(listing)) == listing);

    RequestMessage empty;
    empty.functional_req = "image conversion";
    std::string text = serialize_request(empty);
    CHECK(text.find("qualityReq") == std::string::npos);
    CHECK(parse_request(text) == empty);

    Gen gen;
    for (int i = 0; i < 100; ++i) {
        RequestMessage m = gen.request();
        CAPTURE(i);
        CHECK(parse_request(serialize_request(m)) == m);
    }
}

TEST_CASE("tModel parses to its documented field values") {
    TModelDocument d = parse_tmodel(kTModelListing);
    CHECK(d.tmodel_key == "mycompany.com:StockQuote:QoS");
    CHECK(d.function == "Stock_Quote_Service");
    CHECK(d.ws_id == "abdc12345");
    CHECK(d.overview_url == "http://quotes.example.com/qos.wsdl");
    REQUIRE(d.keyed_references.size() == 3);
    CHECK(d.keyed_references[0].key_name == "Availability");
    CHECK(d.keyed_references[0].key_value == "99.9%");
    CHECK(d.keyed_references[1].key_name == "Average_Throughput");
    CHECK(d.keyed_references[1].key_value == ">10Mbps");
    CHECK(d.keyed_references[2].key_name == "Average_Reliability");
    CHECK(d.keyed_references[2].key_value == "99.9%");
    CHECK(d.keyed_references[1].tmodel_key == "uddi:uddi.org:QoS:Throughput");
}

TEST_CASE("tModel optional parts and schema violations") {
    TModelDocument bare = parse_tmodel(
        "<tModel tModelKey='k'><ws_id>svc1</ws_id><categoryBag/></tModel>");
    CHECK(bare.keyed_references.empty());
    CHECK(bare.function.empty());
    CHECK(bare.overview_url.empty());

    CHECK(thrown_code([] { parse_tmodel("<tModel><ws_id>svc</ws_id></tModel>"); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([] { parse_tmodel("<tModel tModelKey='k'/>"); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([] {
        parse_tmodel("<tModel tModelKey='k'><ws_id></ws_id></tModel>");
    }) == ErrorCode::SchemaViolation);
    CHECK(thrown_code([] {
        parse_tmodel(
            "<tModel tModelKey='k'><ws_id>svc</ws_id><categoryBag>"
            "<keyedReference keyName='Latency' keyValue='1'/>"
            "<keyedReference keyName='latency' keyValue='2'/>"
            "</categoryBag></tModel>");
    }) == ErrorCode::SchemaViolation);
    CHECK(thrown_code([] {
        parse_tmodel(
            "<tModel tModelKey='k'><ws_id>svc</ws_id><categoryBag>"
            "<keyedReference keyValue='2'/></categoryBag></tModel>");
    }) == ErrorCode::SchemaViolation);
}

TEST_CASE("tModels round-trip through serialization") {
    TModelDocument listing = parse_tmodel(kTModelListing);
    CHECK(parse_tmodel(serialize_tmodel(listing)) == listing);

    TModelDocument minimal;
    minimal.tmodel_key = "k";
    minimal.ws_id = "svc";
    CHECK(parse_tmodel(serialize_tmodel(minimal)) == minimal);

    Gen gen;
    for (int i = 0; i < 100; ++i) {
        TModelDocument d = gen.tmodel();
        CAPTURE(i);
        CHECK(parse_tmodel(serialize_tmodel(d)) == d);
    }
}

TEST_CASE("unit suffixes survive a serialize/parse cycle verbatim") {
    TModelDocument d;
    d.tmodel_key = "k";
    d.ws_id = "svc";
    for (auto [name, value] : std::vector<std::pair<std::string, std::string>>{
             {"Availability", "99.9%"},
             {"Throughput", ">10Mbps"},
             {"Response", "<=250ms"},
             {"Latency", "0.5s"},
             {"Rate", "1200bps"}}) {
        d.keyed_references.push_back({"", name, value});
    }
    TModelDocument back = parse_tmodel(serialize_tmodel(d));
    for (size_t i = 0; i < d.keyed_references.size(); ++i) {
        CHECK(back.keyed_references[i].key_value == d.keyed_references[i].key_value);
    }
}

TEST_CASE("find_tModel parses to its documented field values") {
    DiscoveryQuery q = parse_find_tmodel(kDiscoveryListing);
    CHECK(q.find_key == "UUID:DB77450D-9FA8");
    CHECK(q.key_name == "Stock market trading services");
    CHECK(q.key_limit == 50);
}

TEST_CASE("find_tModel defaults and violations") {
    DiscoveryQuery q = parse_find_tmodel(
        "<find_tModel><categoryBag>"
        "<keyedReference keyName='stock quotes'/>"
        "</categoryBag></find_tModel>");
    CHECK(q.key_limit == 50);
    CHECK(q.find_key.empty());

    CHECK(thrown_code([] {
        parse_find_tmodel(
            "<find_tModel><categoryBag>"
            "<keyedReference keyName='x' keylimit='0'/>"
            "</categoryBag></find_tModel>");
    }) == ErrorCode::SchemaViolation);
    CHECK(thrown_code([] { parse_find_tmodel("<find_tModel/>"); }) ==
          ErrorCode::SchemaViolation);
    CHECK(thrown_code([] {
        parse_find_tmodel("<find_tModel><categoryBag/></find_tModel>");
    }) == ErrorCode::SchemaViolation);
}

TEST_CASE("find_tModel round-trips through serialization") {
    DiscoveryQuery listing = parse_find_tmodel(kDiscoveryListing);
    CHECK(parse_find_tmodel(serialize_find_tmodel(listing)) == listing);

    Gen gen;
    for (int i = 0; i < 100; ++i) {
        DiscoveryQuery q = gen.query();
        CAPTURE(i);
        CHECK(parse_find_tmodel(serialize_find_tmodel(q)) == q);
    }
}

TEST_CASE("malformed documents raise MalformedXml") {
    for (const char* doc : {
             "<a><b></a>",                   // mismatched close
             "<a",                           // unterminated tag
             "<a x='1' x='2'/>",             // duplicate attribute
             "<a>&nope;</a>",                // unknown entity
             "<a/><b/>",                     // two roots
             "<a b='<'/>",                   // raw '<' in attribute
             "<a>text<b/></a>",              // mixed content
             "plain text",                   // no markup
             "<a>unclosed",                  // missing close tag
             "<!-- only a comment -->",      // no root element
         }) {
        CAPTURE(doc);
        CHECK(thrown_code([&] { xml::parse(doc); }) == ErrorCode::MalformedXml);
    }
}

TEST_CASE("parser handles prolog, comments, CDATA and entities") {
    xml::Element root = xml::parse(
        "<?xml version=\"1.0\"?><!DOCTYPE tModel>"
        "<!-- preamble --><root a=\"A&amp;B&#33;\">"
        "<inner><![CDATA[a<b&c]]></inner>"
        "<coded>&#65;&#x42;</coded>"
        "<!-- middle --><empty/></root><!-- trailing -->");
    CHECK(root.attribute("a") == "A&B!");
    CHECK(root.child("inner")->text == "a<b&c");
    CHECK(root.child("coded")->text == "AB");
    CHECK(root.child("empty") != nullptr);
}

TEST_CASE("namespace prefixes are ignored for element matching") {
    RequestMessage m = parse_request(
        "<uddi:find_service xmlns:uddi='urn:uddi-org:api'>"
        "<uddi:functionalReq>tax lookup</uddi:functionalReq>"
        "</uddi:find_service>");
    CHECK(m.functional_req == "tax lookup");
    CHECK(xml::local_name("uddi:find_service") == "find_service");
    CHECK(xml::local_name("plain") == "plain");
}

TEST_CASE("element trees with hostile characters survive write/parse") {
    xml::Element root;
    root.name = "root";
    root.set_attribute("attr", "a&b<c>\"d'\n\te");
    root.add_child("leaf").text = "5 < 6 && 7 > 2";
    xml::Element& nested = root.add_child("nested");
    nested.add_child("deep").text = "x";
    CHECK(xml::parse(xml::write(root)) == root);
}
