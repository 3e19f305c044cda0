#include "flowaudit/destination.hpp"

#include "flowaudit/text.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace flowaudit {

std::string to_string(Party p) {
    switch (p) {
    case Party::First: return "first";
    case Party::Third: return "third";
    case Party::Platform: return "platform";
    }
    return "?";
}

Party party_from_string(const std::string& s) {
    std::string v = to_lower(s);
    if (v == "first")
        return Party::First;
    if (v == "third")
        return Party::Third;
    if (v == "platform")
        return Party::Platform;
    throw std::runtime_error("unknown party: " + s);
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

} // namespace

EntityMap EntityMap::load(const std::string& path) {
    return from_lines(read_lines(path));
}

EntityMap EntityMap::from_lines(const std::vector<std::string>& lines) {
    EntityMap map;
    for (const auto& raw : lines) {
        auto s = trim(raw);
        if (s.empty() || s.front() == '#')
            continue;
        auto tab = s.find('\t');
        if (tab == std::string_view::npos)
            throw std::runtime_error("entity map: expected 'pattern<TAB>entity', got '" +
                                     std::string(s) + "'");
        map.add(std::string(trim(s.substr(0, tab))), std::string(trim(s.substr(tab + 1))));
    }
    return map;
}

void EntityMap::add(const std::string& pattern, const std::string& entity) {
    Entry e;
    std::string p = to_lower(pattern);
    if (p.starts_with("*.")) {
        e.wildcard = true;
        p = p.substr(2);
    }
    e.pattern = std::move(p);
    e.entity = entity;
    entries_.push_back(std::move(e));
}

std::string EntityMap::lookup(std::string_view fqdn) const {
    std::string host = canonical_host(fqdn);
    const Entry* best = nullptr;
    for (const auto& e : entries_) {
        bool hit = e.wildcard
                       ? host == e.pattern || (host.size() > e.pattern.size() &&
                                               host.ends_with(e.pattern) &&
                                               host[host.size() - e.pattern.size() - 1] == '.')
                       : host == e.pattern;
        if (hit && (!best || e.pattern.size() > best->pattern.size()))
            best = &e;
    }
    return best ? best->entity : kUnknown;
}

Blocklist Blocklist::load(const std::string& name, const std::string& path, BlocklistFormat fmt) {
    return from_lines(name, read_lines(path), fmt);
}

Blocklist Blocklist::from_lines(const std::string& name, const std::vector<std::string>& lines,
                                BlocklistFormat fmt) {
    Blocklist bl;
    bl.name = name;
    for (const auto& raw : lines) {
        std::string_view s = raw;
        if (auto hash = s.find('#'); hash != std::string_view::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty())
            continue;
        if (fmt == BlocklistFormat::Hosts) {
            // "0.0.0.0 domain" / "127.0.0.1 domain"
            auto space = s.find_first_of(" \t");
            if (space == std::string_view::npos)
                continue;
            auto domain = trim(s.substr(space + 1));
            if (!domain.empty())
                bl.entries.insert(to_lower(domain));
        } else {
            if (s.find_first_of(" \t") == std::string_view::npos)
                bl.entries.insert(to_lower(s));
        }
    }
    return bl;
}

namespace {

// fqdn labels split further on '-' and '_', stoplisted tokens and short
// tokens dropped
std::set<std::string> domain_tokens(std::string_view domain, const PartyConfig& cfg,
                                    const PublicSuffixList& psl) {
    std::set<std::string> out;
    for (const auto& token : split(to_lower(domain), ".-_")) {
        if (token.size() < cfg.min_token_len)
            continue;
        if (cfg.stoplist.count(token) || psl.is_suffix_label(token))
            continue;
        out.insert(token);
    }
    return out;
}

std::set<std::string> text_tokens(std::string_view text, const PartyConfig& cfg,
                                  const PublicSuffixList& psl) {
    std::set<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= cfg.min_token_len && !cfg.stoplist.count(cur) &&
            !psl.is_suffix_label(cur))
            out.insert(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c))
            cur.push_back(static_cast<char>(std::tolower(c)));
        else
            flush();
    }
    flush();
    return out;
}

// For cloud-hosted domains only the subdomain left of the cloud suffix
// counts. Entries ending in ".*" match a label prefix ("execute-api.*").
std::string strip_cloud_suffix(const std::string& host, const std::string& esld,
                               const PartyConfig& cfg) {
    for (const auto& entry : cfg.cloud_suffixes) {
        if (entry.ends_with(".*")) {
            std::string label = entry.substr(0, entry.size() - 2);
            auto pos = host.find("." + label + ".");
            if (pos != std::string::npos)
                return host.substr(0, pos);
            if (host.starts_with(label + "."))
                return "";
        } else if (host == entry) {
            return "";
        } else if (host.size() > entry.size() && host.ends_with(entry) &&
                   host[host.size() - entry.size() - 1] == '.') {
            return host.substr(0, host.size() - entry.size() - 1);
        } else if (esld == entry) {
            auto pos = host.rfind("." + esld);
            if (pos != std::string::npos)
                return host.substr(0, pos);
        }
    }
    return host; // not cloud-hosted: all labels count
}

} // namespace

Party categorize_party(std::string_view fqdn, const AppMeta& meta, const PublicSuffixList& psl,
                       const PartyConfig& cfg) {
    std::string host = canonical_host(fqdn);
    std::string esld = psl.esld(host);

    std::set<std::string> own = text_tokens(meta.policy_url, cfg, psl);
    for (const auto& tok : text_tokens(meta.package, cfg, psl))
        own.insert(tok);

    std::string token_source = strip_cloud_suffix(host, esld, cfg);
    for (const auto& tok : domain_tokens(token_source, cfg, psl))
        if (own.count(tok))
            return Party::First;

    for (const auto& kw : cfg.platform_keywords)
        if (host.find(kw) != std::string::npos)
            return Party::Platform;

    return Party::Third;
}

std::pair<bool, std::vector<std::string>> match_ats(std::string_view fqdn, std::string_view esld,
                                                    const std::vector<Blocklist>& lists) {
    std::string host = canonical_host(fqdn);
    std::string stop(esld);
    std::vector<std::string> matched;
    for (const auto& list : lists) {
        std::string cand = host;
        while (true) {
            if (list.entries.count(cand)) {
                matched.push_back(list.name);
                break;
            }
            if (cand == stop)
                break;
            auto dot = cand.find('.');
            if (dot == std::string::npos)
                break;
            cand = cand.substr(dot + 1);
        }
    }
    return {!matched.empty(), matched};
}

DestinationLabel label_destination(std::string_view fqdn, const AppMeta& meta,
                                   const PublicSuffixList& psl, const EntityMap& entities,
                                   const std::vector<Blocklist>& lists, const PartyConfig& cfg) {
    DestinationLabel label;
    label.fqdn = canonical_host(fqdn);
    label.esld = psl.esld(label.fqdn);
    label.entity = entities.lookup(label.fqdn);
    label.party = categorize_party(label.fqdn, meta, psl, cfg);
    auto [ats, names] = match_ats(label.fqdn, label.esld, lists);
    label.ats = ats;
    label.matched_lists = std::move(names);
    return label;
}

std::string label_key(std::string_view app, std::string_view fqdn) {
    return std::string(app) + "\t" + std::string(fqdn);
}

std::vector<MissedRow> missed_by_blocklists(const std::vector<DataFlow>& flows,
                                            const std::map<std::string, DestinationLabel>& labels) {
    std::map<std::string, MissedRow> rows;
    for (const auto& flow : flows) {
        auto it = labels.find(label_key(flow.app_id, flow.destination_fqdn));
        if (it == labels.end())
            it = labels.find(flow.destination_fqdn); // plain-fqdn keyed maps also accepted
        if (it == labels.end())
            continue;
        const auto& label = it->second;
        if (label.party != Party::Third || label.ats)
            continue;
        auto& row = rows[flow.destination_fqdn];
        row.fqdn = flow.destination_fqdn;
        row.entity = label.entity;
        row.data_types.insert(flow.data_type);
    }
    std::vector<MissedRow> out;
    out.reserve(rows.size());
    for (auto& [fqdn, row] : rows)
        out.push_back(std::move(row));
    std::sort(out.begin(), out.end(), [](const MissedRow& a, const MissedRow& b) {
        if (a.data_types.size() != b.data_types.size())
            return a.data_types.size() > b.data_types.size();
        return a.fqdn < b.fqdn;
    });
    return out;
}

} // namespace flowaudit
