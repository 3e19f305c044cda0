#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace flowaudit {

// Public-suffix matcher over a bundled snapshot (ICANN section only).
// Supports exact rules, "*." wildcard rules and "!" exception rules.
class PublicSuffixList {
  public:
    static PublicSuffixList load(const std::string& path);
    static PublicSuffixList from_lines(const std::vector<std::string>& lines);

    // Longest matching public suffix for a lowercase fqdn. When no rule
    // matches, the last label is used (the PSL's implicit "*" rule).
    std::string public_suffix(std::string_view fqdn) const;

    // Registrable domain: public suffix plus one label. IP literals pass
    // through unchanged; a bare public suffix returns itself.
    std::string esld(std::string_view fqdn) const;

    bool is_suffix_label(std::string_view label) const { return suffix_labels_.count(std::string(label)) > 0; }

    size_t rule_count() const { return rules_.size() + wildcards_.size(); }

  private:
    std::unordered_set<std::string> rules_;
    std::unordered_set<std::string> wildcards_;  // stored without the "*." prefix
    std::unordered_set<std::string> exceptions_; // stored without the "!" prefix
    std::unordered_set<std::string> suffix_labels_;
};

} // namespace flowaudit
