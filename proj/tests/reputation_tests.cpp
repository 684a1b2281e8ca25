#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "wsqos/errors.hpp"
#include "wsqos/reputation.hpp"
#include "wsqos/store.hpp"

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

QoSVector vector_of(std::map<std::string, double> values) {
    QoSVector q;
    for (const auto& [name, value] : values) q.set_named(name, value);
    return q;
}

void seed_service(Store& store, const std::string& ws_id,
                  const std::string& url = "") {
    TModelDocument d;
    d.tmodel_key = "key:" + ws_id;
    d.function = "Service " + ws_id;
    d.ws_id = ws_id;
    d.overview_url = url;
    store.publish(d);
}

ScoredService scored(std::string ws_id, double total) {
    ScoredService s;
    s.ws_id = std::move(ws_id);
    s.total = total;
    return s;
}

std::vector<std::string> ids_of(const std::vector<FinalChoice>& choices) {
    std::vector<std::string> out;
    for (const FinalChoice& c : choices) out.push_back(c.ws_id);
    return out;
}

}  // namespace

TEST_CASE("zero tolerance counts exact matches only") {
    QoSVector assured = vector_of(
        {{"availability", 0.99}, {"response time", 120.0}, {"throughput", 8.0}});
    QoSVector predicted = vector_of(
        {{"availability", 0.99}, {"response time", 120.0}, {"throughput", 8.0}});
    CHECK(credibility(predicted, assured, 0.0) == 3);

    predicted.set_named("throughput", 8.0000001);
    CHECK(credibility(predicted, assured, 0.0) == 2);
}

TEST_CASE("a ten percent tolerance admits exactly the close properties") {
    QoSVector assured = vector_of({{"availability", 0.90},
                                   {"reliability", 0.80},
                                   {"response time", 100.0},
                                   {"throughput", 10.0},
                                   {"latency", 50.0}});
    QoSVector predicted = vector_of({{"availability", 0.95},   // off by 5.6%
                                     {"reliability", 0.60},    // off by 25%
                                     {"response time", 109.0}, // off by 9%
                                     {"throughput", 10.5},     // off by 5%
                                     {"latency", 70.0}});      // off by 40%
    CHECK(credibility(predicted, assured, 0.10) == 3);
    CHECK(comparable_properties(predicted, assured) == 5);
}

TEST_CASE("widening the tolerance never loses matches") {
    std::mt19937_64 rng(55001);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<std::string> names = {"availability", "throughput",
                                            "reliability", "response time",
                                            "latency", "price"};
    for (int trial = 0; trial < 40; ++trial) {
        QoSVector assured, predicted;
        for (const std::string& name : names) {
            if (unit(rng) < 0.8) assured.set_named(name, 10.0 * unit(rng));
            if (unit(rng) < 0.8) predicted.set_named(name, 10.0 * unit(rng));
        }
        int last = 0;
        for (double tolerance : {0.0, 0.05, 0.2, 0.5, 2.0}) {
            int now = credibility(predicted, assured, tolerance);
            CHECK(now >= last);
            CHECK(now <= comparable_properties(predicted, assured));
            last = now;
        }
    }
}

TEST_CASE("only properties present on both sides are compared") {
    QoSVector assured = vector_of(
        {{"availability", 0.99}, {"price", 0.01}, {"latency", 20.0}});
    QoSVector predicted = vector_of({{"availability", 0.99}});
    CHECK(comparable_properties(predicted, assured) == 1);
    CHECK(credibility(predicted, assured, 0.0) == 1);
    CHECK(comparable_properties(QoSVector{}, assured) == 0);
    CHECK(credibility(QoSVector{}, assured, 1.0) == 0);
}

TEST_CASE("an assured value of zero still tolerates rounding noise") {
    QoSVector assured = vector_of({{"latency", 0.0}});
    QoSVector near = vector_of({{"latency", 5e-10}});
    QoSVector far = vector_of({{"latency", 0.1}});
    CHECK(credibility(near, assured, 1.0) == 1);
    CHECK(credibility(far, assured, 1.0) == 0);
}

TEST_CASE("a negative tolerance is a configuration error") {
    CHECK(thrown_code([] {
              credibility(QoSVector{}, QoSVector{}, -0.1);
          }) == ErrorCode::ConfigError);
}

TEST_CASE("the literal score adds credibility and usage") {
    ReputationRecord record;
    record.ws_id = "a";
    record.credibility = 5;
    record.compared_properties = 5;
    record.usage_count = 12;
    CHECK(reputation_score(record, ReputationMode::Literal) ==
          doctest::Approx(17.0).epsilon(1e-12));
}

TEST_CASE("a cold-start record scores zero in both modes") {
    ReputationRecord fresh;
    fresh.ws_id = "new";
    CHECK(reputation_score(fresh, ReputationMode::Literal) == 0.0);
    CHECK(reputation_score(fresh, ReputationMode::Normalized, 10) == 0.0);
    CHECK(reputation_score(fresh, ReputationMode::Normalized, 0) == 0.0);
}

TEST_CASE("the normalized score peaks at one") {
    ReputationRecord record;
    record.ws_id = "a";
    record.credibility = 4;
    record.compared_properties = 4;
    record.usage_count = 9;
    CHECK(reputation_score(record, ReputationMode::Normalized, 9) ==
          doctest::Approx(1.0).epsilon(1e-12));

    record.credibility = 2;
    record.usage_count = 5;
    CHECK(reputation_score(record, ReputationMode::Normalized, 10) ==
          doctest::Approx(0.5 * 0.5 + 0.5 * 0.5).epsilon(1e-12));
}

TEST_CASE("mode names round-trip and reject strangers") {
    CHECK(reputation_mode_from_string("literal") == ReputationMode::Literal);
    CHECK(reputation_mode_from_string("normalized") == ReputationMode::Normalized);
    CHECK(to_string(ReputationMode::Literal) == "literal");
    CHECK(to_string(ReputationMode::Normalized) == "normalized");
    CHECK(thrown_code([] { reputation_mode_from_string("karma"); }) ==
          ErrorCode::ConfigError);
}

TEST_CASE("finalize returns a reputation-ordered permutation of the top slice") {
    Store store;
    for (const char* id : {"a", "b", "c", "d"}) seed_service(store, id);
    store.set_credibility("a", 1, 5);
    store.set_credibility("b", 4, 5);
    store.set_credibility("c", 2, 5);
    for (int i = 0; i < 3; ++i) store.record_usage("c");

    std::vector<ScoredService> ranked = {scored("a", 0.9), scored("b", 0.8),
                                         scored("c", 0.7), scored("d", 0.6)};
    std::vector<FinalChoice> choices = finalize(ranked, 3, store);
    REQUIRE(choices.size() == 3);

    std::vector<std::string> returned = ids_of(choices);
    std::vector<std::string> sorted_returned = returned;
    std::sort(sorted_returned.begin(), sorted_returned.end());
    CHECK(sorted_returned == std::vector<std::string>{"a", "b", "c"});

    // Literal scores before usage counting: c = 2+3, b = 4+0, a = 1+0.
    CHECK(returned == std::vector<std::string>{"c", "b", "a"});
    CHECK(choices[0].reputation == doctest::Approx(5.0));
    CHECK(choices[1].reputation == doctest::Approx(4.0));
    CHECK(choices[2].reputation == doctest::Approx(1.0));
    CHECK(choices[0].qos_score == doctest::Approx(0.7));
}

TEST_CASE("the slice never exceeds the ranking") {
    Store store;
    seed_service(store, "a");
    seed_service(store, "b");
    std::vector<ScoredService> ranked = {scored("a", 0.9), scored("b", 0.8)};
    CHECK(finalize(ranked, 10, store).size() == 2);
    CHECK(finalize(ranked, 1, store).size() == 1);
    CHECK(finalize(ranked, 1, store)[0].ws_id == "a");
}

TEST_CASE("reputation ties keep the qos order") {
    Store store;
    for (const char* id : {"x", "y", "z"}) seed_service(store, id);
    std::vector<ScoredService> ranked = {scored("y", 0.9), scored("x", 0.8),
                                         scored("z", 0.7)};
    std::vector<FinalChoice> choices = finalize(ranked, 3, store,
                                                {ReputationMode::Literal, false});
    CHECK(ids_of(choices) == std::vector<std::string>{"y", "x", "z"});
    for (const FinalChoice& c : choices) CHECK(c.reputation == 0.0);
}

TEST_CASE("each returned service is charged one usage") {
    Store store;
    for (const char* id : {"a", "b", "c"}) seed_service(store, id);
    std::vector<ScoredService> ranked = {scored("a", 0.9), scored("b", 0.8),
                                         scored("c", 0.7)};
    finalize(ranked, 2, store);
    CHECK(store.reputation("a").usage_count == 1);
    CHECK(store.reputation("b").usage_count == 1);
    CHECK(store.reputation("c").usage_count == 0);

    finalize(ranked, 2, store);
    CHECK(store.reputation("a").usage_count == 2);

    FinalizeOptions no_count;
    no_count.count_usage = false;
    finalize(ranked, 2, store, no_count);
    CHECK(store.reputation("a").usage_count == 2);
}

TEST_CASE("usage feedback shifts later selections") {
    Store store;
    seed_service(store, "a");
    seed_service(store, "b");
    std::vector<ScoredService> ranked = {scored("a", 0.9), scored("b", 0.8)};
    CHECK(finalize(ranked, 2, store)[0].ws_id == "a");  // tie: qos order
    store.record_usage("b");
    store.record_usage("b");
    CHECK(finalize(ranked, 2, store)[0].ws_id == "b");  // 3+1 usages vs 2
}

TEST_CASE("the normalized mode scales usage by the slice maximum") {
    Store store;
    for (const char* id : {"a", "b"}) seed_service(store, id);
    store.set_credibility("a", 3, 4);
    store.set_credibility("b", 4, 4);
    for (int i = 0; i < 8; ++i) store.record_usage("a");
    for (int i = 0; i < 2; ++i) store.record_usage("b");

    std::vector<ScoredService> ranked = {scored("a", 0.9), scored("b", 0.8)};
    FinalizeOptions options;
    options.mode = ReputationMode::Normalized;
    options.count_usage = false;
    std::vector<FinalChoice> choices = finalize(ranked, 2, store, options);
    // a: 0.5*(3/4) + 0.5*(8/8) = 0.875; b: 0.5*1 + 0.5*(2/8) = 0.625.
    CHECK(choices[0].ws_id == "a");
    CHECK(choices[0].reputation == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(choices[1].reputation == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("finalize carries the handoff URL and assured marker") {
    Store store;
    seed_service(store, "a", "http://a.example.com/svc.wsdl");
    ScoredService s = scored("a", 1.0);
    s.from_assured = true;
    std::vector<FinalChoice> choices = finalize({s}, 1, store);
    CHECK(choices[0].overview_url == "http://a.example.com/svc.wsdl");
    CHECK(choices[0].from_assured);
}

TEST_CASE("candidates unknown to the store still come back") {
    Store store;
    seed_service(store, "known");
    std::vector<ScoredService> ranked = {scored("ghost", 0.9),
                                         scored("known", 0.8)};
    std::vector<FinalChoice> choices = finalize(ranked, 2, store);
    REQUIRE(choices.size() == 2);
    const FinalChoice& ghost =
        choices[0].ws_id == "ghost" ? choices[0] : choices[1];
    CHECK(ghost.overview_url.empty());
    CHECK(ghost.reputation == 0.0);
    CHECK(store.reputation("known").usage_count == 1);
}

TEST_CASE("finalize validates its inputs") {
    Store store;
    seed_service(store, "a");
    CHECK(thrown_code([&] { finalize({}, 1, store); }) == ErrorCode::NoCandidates);
    CHECK(thrown_code([&] {
              finalize({scored("a", 1.0)}, 0, store);
          }) == ErrorCode::ConfigError);
}

TEST_CASE("the reputation table lists scores per service") {
    std::vector<ReputationRecord> records;
    ReputationRecord a{"a", 5, 5, 12};
    ReputationRecord b{"b", 2, 4, 3};
    records = {a, b};
    std::string csv = reputation_to_csv(records, ReputationMode::Literal);
    CHECK(csv.rfind("ws_id,credibility,usage_count,score,mode\n", 0) == 0);
    CHECK(csv.find("a,5,12,17,literal\n") != std::string::npos);
    CHECK(csv.find("b,2,3,5,literal\n") != std::string::npos);

    std::string normalized = reputation_to_csv(records, ReputationMode::Normalized);
    // a: 0.5*1 + 0.5*(12/12) = 1; b: 0.5*0.5 + 0.5*(3/12) = 0.375.
    CHECK(normalized.find("a,5,12,1,normalized\n") != std::string::npos);
    CHECK(normalized.find("b,2,3,0.375,normalized\n") != std::string::npos);
}
