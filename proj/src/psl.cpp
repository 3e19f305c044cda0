#include "flowaudit/psl.hpp"

#include "flowaudit/text.hpp"

#include <fstream>
#include <stdexcept>

namespace flowaudit {

PublicSuffixList PublicSuffixList::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open public suffix snapshot: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return from_lines(lines);
}

PublicSuffixList PublicSuffixList::from_lines(const std::vector<std::string>& lines) {
    PublicSuffixList psl;
    for (const auto& raw : lines) {
        auto s = trim(raw);
        if (s.empty() || s.starts_with("//") || s.front() == '#')
            continue;
        std::string rule = to_lower(s);
        if (rule.starts_with("!")) {
            psl.exceptions_.insert(rule.substr(1));
        } else if (rule.starts_with("*.")) {
            psl.wildcards_.insert(rule.substr(2));
        } else {
            psl.rules_.insert(rule);
        }
        for (const auto& label : split(rule, ".!*"))
            psl.suffix_labels_.insert(label);
    }
    return psl;
}

std::string PublicSuffixList::public_suffix(std::string_view fqdn) const {
    auto labels = split(fqdn, ".");
    if (labels.empty())
        return std::string(fqdn);
    // Walk candidate suffixes from longest to shortest; the longest matching
    // rule wins per PSL semantics. Exceptions knock one label off.
    for (size_t i = 0; i < labels.size(); ++i) {
        std::string cand;
        for (size_t j = i; j < labels.size(); ++j) {
            if (!cand.empty())
                cand.push_back('.');
            cand += labels[j];
        }
        if (exceptions_.count(cand)) {
            auto dot = cand.find('.');
            return dot == std::string::npos ? cand : cand.substr(dot + 1);
        }
        if (rules_.count(cand))
            return cand;
        auto dot = cand.find('.');
        if (dot != std::string::npos && wildcards_.count(cand.substr(dot + 1)))
            return cand;
    }
    return labels.back();
}

std::string PublicSuffixList::esld(std::string_view fqdn) const {
    std::string host = to_lower(trim(fqdn));
    while (!host.empty() && host.back() == '.')
        host.pop_back();
    if (host.empty() || is_ip_literal(host))
        return host;
    std::string suffix = public_suffix(host);
    if (suffix.size() >= host.size())
        return host;
    std::string_view rest = std::string_view(host).substr(0, host.size() - suffix.size() - 1);
    auto dot = rest.rfind('.');
    std::string label(dot == std::string_view::npos ? rest : rest.substr(dot + 1));
    return label + "." + suffix;
}

} // namespace flowaudit
