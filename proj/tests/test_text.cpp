#include "flowaudit/text.hpp"

#include <doctest.h>

using namespace flowaudit;

TEST_CASE("key normalization folds separator styles together") {
    CHECK(normalize_key("X--Unity--Version") == "x_unity_version");
    CHECK(normalize_key("x-unity-version") == "x_unity_version");
    CHECK(normalize_key("x_unity_version") == "x_unity_version");
    CHECK(normalize_key("user_id") == "user_id");
    CHECK(normalize_key("UserID") == "userid");
    CHECK(normalize_key("__lead") == "lead");
}

TEST_CASE("term normalization") {
    CHECK(normalize_term("Email Address") == "email address");
    CHECK(normalize_term("  PII ") == "pii");
    CHECK(normalize_term("e-mail") == "e-mail");
    CHECK(normalize_term("device   id!") == "device id");
    CHECK(normalize_term("Third-Party") == "third-party");
}

TEST_CASE("bag of words drops single-character tokens") {
    auto bag = bag_of_words("We collect a timestamp, OK?");
    CHECK(bag.count("we"));
    CHECK(bag.count("collect"));
    CHECK(bag.count("timestamp"));
    CHECK(bag.count("ok"));
    CHECK(!bag.count("a"));
}

TEST_CASE("sentence splitting keeps decimals intact") {
    auto s = split_sentences("We use Unity 2020.1.14 daily. It works! Right?");
    REQUIRE(s.size() == 3);
    CHECK(s[0] == "We use Unity 2020.1.14 daily.");
    CHECK(s[1] == "It works!");
    CHECK(s[2] == "Right?");
}

TEST_CASE("ip literal detection") {
    CHECK(is_ip_literal("52.53.43.176"));
    CHECK(!is_ip_literal("unity3d.com"));
    CHECK(!is_ip_literal("1.2.3"));
    CHECK(is_ip_literal("::1"));
}

TEST_CASE("base64 round trip") {
    std::string data = "any carnal pleasure.";
    CHECK(base64_decode(base64_encode(data)) == data);
    CHECK(base64_encode("") == "");
    std::string binary;
    for (int i = 0; i < 256; ++i)
        binary.push_back(static_cast<char>(i));
    CHECK(base64_decode(base64_encode(binary)) == binary);
}
