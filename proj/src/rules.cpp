#include "flowaudit/rules.hpp"

#include "flowaudit/digest.hpp"
#include "flowaudit/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

using nlohmann::json;

namespace flowaudit {

std::string to_string(DataCategory c) {
    switch (c) {
    case DataCategory::Pii: return "PII";
    case DataCategory::Fingerprint: return "Fingerprint";
    case DataCategory::VrSensoryData: return "VR Sensory Data";
    }
    return "?";
}

DataCategory category_from_string(const std::string& s) {
    std::string norm = normalize_term(s);
    if (norm == "pii")
        return DataCategory::Pii;
    if (norm == "fingerprint")
        return DataCategory::Fingerprint;
    if (norm == "vr sensory data" || norm == "vrsensorydata")
        return DataCategory::VrSensoryData;
    throw std::runtime_error("unknown data category: " + s);
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::regex compile_pattern(const std::string& src, const std::string& data_type) {
    auto flags = std::regex::ECMAScript;
    std::string body = src;
    // "(?i)" prefix opts a pattern out of case sensitivity
    if (body.starts_with("(?i)")) {
        body = body.substr(4);
        flags |= std::regex::icase;
    }
    try {
        return std::regex(body, flags);
    } catch (const std::regex_error& e) {
        throw std::runtime_error("rule '" + data_type + "': bad pattern '" + src +
                                 "': " + e.what());
    }
}

} // namespace

RuleSet RuleSet::load(const std::string& rules_path, const std::string& profile_path) {
    return from_json(slurp(rules_path), profile_path.empty() ? "" : slurp(profile_path));
}

RuleSet RuleSet::from_json(const std::string& rules_json, const std::string& profile_json) {
    json spec = json::parse(rules_json);
    std::map<std::string, std::string> profile_values;
    if (!profile_json.empty()) {
        json prof = json::parse(profile_json);
        json statics = prof.value("static_values", json::object());
        for (auto& [name, value] : statics.items())
            profile_values[name] = value.get<std::string>();
    }

    RuleSet rs;
    for (const auto& item : spec) {
        ExtractionRule rule;
        rule.data_type = normalize_term(item.at("data_type").get<std::string>());
        rule.category = category_from_string(item.at("category").get<std::string>());
        for (const auto& lit : item.value("literals", json::array()))
            rule.literals.push_back(lit.get<std::string>());
        for (const auto& pat : item.value("patterns", json::array())) {
            rule.pattern_sources.push_back(pat.get<std::string>());
            rule.patterns.push_back(compile_pattern(rule.pattern_sources.back(), rule.data_type));
        }
        for (const auto& key : item.value("key_names", json::array()))
            rule.key_names.push_back(normalize_key(key.get<std::string>()));
        for (const auto& ref : item.value("static_value_refs", json::array())) {
            rule.static_value_refs.push_back(ref.get<std::string>());
            auto it = profile_values.find(rule.static_value_refs.back());
            if (it != profile_values.end() && !it->second.empty()) {
                rule.static_values.push_back(it->second);
                rule.static_hashes.push_back(md5_hex(it->second));
                rule.static_hashes.push_back(sha1_hex(it->second));
            }
        }
        rs.rules_.push_back(std::move(rule));
    }
    rs.index();
    return rs;
}

void RuleSet::index() {
    for (const auto& rule : rules_) {
        auto [it, fresh] = category_by_type_.emplace(rule.data_type, rule.category);
        if (!fresh && it->second != rule.category)
            throw std::runtime_error("data type '" + rule.data_type +
                                     "' appears in more than one category");
    }
}

DataCategory RuleSet::category_of(const std::string& data_type) const {
    auto it = category_by_type_.find(normalize_term(data_type));
    if (it == category_by_type_.end())
        throw std::runtime_error("unknown data type: " + data_type);
    return it->second;
}

} // namespace flowaudit
