#pragma once

#include <map>
#include <regex>
#include <string>
#include <vector>

namespace flowaudit {

enum class DataCategory { Pii, Fingerprint, VrSensoryData };

std::string to_string(DataCategory c);
DataCategory category_from_string(const std::string& s);

// One data type's matching recipe: literal keywords, regex patterns, key
// names for key-value decomposition, and per-device static values that are
// also searched as MD5/SHA1 digests.
struct ExtractionRule {
    std::string data_type;
    DataCategory category = DataCategory::Pii;
    std::vector<std::string> literals;
    std::vector<std::string> pattern_sources;
    std::vector<std::regex> patterns;
    std::vector<std::string> key_names; // normalized via normalize_key
    std::vector<std::string> static_value_refs;
    std::vector<std::string> static_values; // resolved from the profile
    std::vector<std::string> static_hashes; // md5/sha1 of each static value
};

class RuleSet {
  public:
    // rules file: [{data_type, category, literals[], patterns[], key_names[],
    // static_value_refs[]}]; profile file: {"static_values": {name: value}}.
    static RuleSet load(const std::string& rules_path, const std::string& profile_path = "");
    static RuleSet from_json(const std::string& rules_json, const std::string& profile_json = "");

    const std::vector<ExtractionRule>& rules() const { return rules_; }
    DataCategory category_of(const std::string& data_type) const;
    const std::map<std::string, DataCategory>& categories() const { return category_by_type_; }

  private:
    std::vector<ExtractionRule> rules_;
    std::map<std::string, DataCategory> category_by_type_;
    void index();
};

} // namespace flowaudit
