#include "flowaudit/digest.hpp"
#include "flowaudit/rules.hpp"
#include "flowaudit/scan.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace flowaudit;

namespace {

RuleSet shipped_rules() {
    static RuleSet rs = RuleSet::load(
        FLOWAUDIT_SOURCE_DIR "/data/rules.json",
        FLOWAUDIT_SOURCE_DIR "/tests/fixtures/profile.json");
    return rs;
}

HttpTransaction txn_with_body(const std::string& body) {
    HttpTransaction t;
    t.app_id = "com.test.app";
    t.host = "sink.example.com";
    t.method = "POST";
    t.path = "/collect";
    t.body = body;
    return t;
}

std::set<std::string> types_of(const std::vector<Detection>& dets) {
    std::set<std::string> out;
    for (const auto& d : dets)
        out.insert(d.data_type);
    return out;
}

} // namespace

TEST_CASE("user id key in body") {
    auto dets = scan(txn_with_body("user_id=12345"), shipped_rules().rules());
    REQUIRE(!dets.empty());
    CHECK(types_of(dets) == std::set<std::string>{"user id"});
    CHECK(dets[0].kind == MatchKind::Key);
}

TEST_CASE("unity version header matches sdk version") {
    HttpTransaction t = txn_with_body("");
    t.headers = {{"X-Unity-Version", "2020.1.14"}};
    auto dets = scan(t, shipped_rules().rules());
    CHECK(types_of(dets) == std::set<std::string>{"sdk version"});
}

TEST_CASE("unity player regex matches in user agent") {
    HttpTransaction t = txn_with_body("");
    t.headers = {{"User-Agent", "UnityPlayer/2020.1.14 (UnityWebRequest/1.0)"}};
    auto dets = scan(t, shipped_rules().rules());
    REQUIRE(types_of(dets).count("sdk version"));
    bool pattern_hit = std::any_of(dets.begin(), dets.end(), [](const Detection& d) {
        return d.kind == MatchKind::Pattern && d.matched == "UnityPlayer/2020.1.14";
    });
    CHECK(pattern_hit);
}

TEST_CASE("static value matches raw, md5 and sha1 forms") {
    // fixture profile pins serial_number = 1WMHH000X00000
    std::string serial = "1WMHH000X00000";
    SUBCASE("raw") {
        auto dets = scan(txn_with_body("sn=" + serial), shipped_rules().rules());
        CHECK(types_of(dets).count("serial number"));
    }
    SUBCASE("md5") {
        auto dets = scan(txn_with_body("{\"h\":\"" + md5_hex(serial) + "\"}"),
                         shipped_rules().rules());
        REQUIRE(types_of(dets).count("serial number"));
        bool hash_hit = std::any_of(dets.begin(), dets.end(), [](const Detection& d) {
            return d.data_type == "serial number" && d.kind == MatchKind::Hash;
        });
        CHECK(hash_hit);
    }
    SUBCASE("sha1") {
        auto dets = scan(txn_with_body(sha1_hex(serial)), shipped_rules().rules());
        CHECK(types_of(dets).count("serial number"));
    }
}

TEST_CASE("key separators are interchangeable") {
    HttpTransaction t = txn_with_body("");
    t.headers = {{"x-oc-selected-headset-serial", "XYZ"}};
    auto dets = scan(t, shipped_rules().rules());
    CHECK(types_of(dets).count("serial number"));
}

TEST_CASE("query keys are decomposed") {
    HttpTransaction t = txn_with_body("");
    t.query = "countryCode=US&timeZoneOffset=-480";
    auto dets = scan(t, shipped_rules().rules());
    CHECK(types_of(dets) == std::set<std::string>{"geolocation"});
}

TEST_CASE("json body keys are walked recursively") {
    auto dets = scan(txn_with_body(R"({"device":{"device_id":"abc","gpu_vendor":"Qualcomm"}})"),
                     shipped_rules().rules());
    auto types = types_of(dets);
    CHECK(types.count("device id"));
    CHECK(types.count("hardware information"));
}

TEST_CASE("binary bodies only match inside ascii spans") {
    std::string body;
    body.push_back('\x00');
    body.push_back('\x01');
    body += "user_id=77";
    body.push_back('\xff');
    auto dets = scan(txn_with_body(body), shipped_rules().rules());
    CHECK(types_of(dets).count("user id"));
}

TEST_CASE("scan result is independent of rule order and unions over rule splits") {
    HttpTransaction t = txn_with_body("user_id=1&os_version=10");
    t.headers = {{"X-Unity-Version", "2020.1.14"}};
    auto rules = shipped_rules().rules();
    auto base = scan(t, rules);

    auto reversed = rules;
    std::reverse(reversed.begin(), reversed.end());
    auto rev = scan(t, reversed);
    CHECK(types_of(base) == types_of(rev));
    CHECK(base.size() == rev.size());

    // scan(R1 ∪ R2) == scan(R1) ∪ scan(R2)
    std::vector<ExtractionRule> r1(rules.begin(), rules.begin() + rules.size() / 2);
    std::vector<ExtractionRule> r2(rules.begin() + rules.size() / 2, rules.end());
    auto d1 = scan(t, r1);
    auto d2 = scan(t, r2);
    CHECK(d1.size() + d2.size() == base.size());
    auto u = types_of(d1);
    for (const auto& ty : types_of(d2))
        u.insert(ty);
    CHECK(u == types_of(base));
}

TEST_CASE("flows group by app, data type and host") {
    RuleSet rs = shipped_rules();
    std::vector<HttpTransaction> txns;
    auto t1 = txn_with_body("user_id=1");
    auto t2 = txn_with_body("user_id=2");
    auto t3 = txn_with_body("user_id=3");
    t3.host = "other.example.com";
    txns = {t1, t2, t3};
    auto dets = scan_all(txns, rs.rules());
    auto flows = flows_from_detections(dets, txns);
    REQUIRE(flows.size() == 2);
    CHECK(flows[0].destination_fqdn == "other.example.com");
    CHECK(flows[1].destination_fqdn == "sink.example.com");
    CHECK(flows[1].evidence.size() == 2);
    CHECK(!flows[0].evidence.empty());

    CHECK(flows_from_detections({}, txns).empty());
}

TEST_CASE("hash_variants digests are the search needles") {
    auto v = hash_variants("MYSERIAL123");
    CHECK(v.count("MYSERIAL123"));
    CHECK(v.count(md5_hex("MYSERIAL123")));
    CHECK(v.count(sha1_hex("MYSERIAL123")));
}

TEST_CASE("rule set rejects a data type spanning two categories") {
    std::string bad = R"([
      {"data_type": "thing", "category": "PII", "key_names": ["a"]},
      {"data_type": "thing", "category": "Fingerprint", "key_names": ["b"]}
    ])";
    CHECK_THROWS(RuleSet::from_json(bad));
}

TEST_CASE("every shipped pattern compiles and every data type has one category") {
    RuleSet rs = shipped_rules();
    CHECK(rs.rules().size() == 21);
    for (const auto& rule : rs.rules())
        CHECK(rule.patterns.size() == rule.pattern_sources.size());
}
