#include "flowaudit/scan.hpp"

#include "flowaudit/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace flowaudit {

std::string to_string(MatchKind k) {
    switch (k) {
    case MatchKind::Literal: return "literal";
    case MatchKind::Pattern: return "pattern";
    case MatchKind::Key: return "key";
    case MatchKind::Static: return "static";
    case MatchKind::Hash: return "hash";
    }
    return "?";
}

std::string to_string(Region r) {
    switch (r) {
    case Region::Path: return "path";
    case Region::Query: return "query";
    case Region::Header: return "header";
    case Region::Body: return "body";
    }
    return "?";
}

namespace {

bool ascii_text_byte(unsigned char c) {
    return c == '\t' || c == '\r' || c == '\n' || (c >= 0x20 && c < 0x7f);
}

// (start, text) pairs for maximal printable runs; short runs are noise.
std::vector<std::pair<size_t, std::string_view>> ascii_spans(std::string_view data,
                                                             size_t min_len = 4) {
    std::vector<std::pair<size_t, std::string_view>> spans;
    size_t i = 0;
    while (i < data.size()) {
        if (!ascii_text_byte(static_cast<unsigned char>(data[i]))) {
            ++i;
            continue;
        }
        size_t start = i;
        while (i < data.size() && ascii_text_byte(static_cast<unsigned char>(data[i])))
            ++i;
        if (i - start >= min_len)
            spans.emplace_back(start, data.substr(start, i - start));
    }
    return spans;
}

void find_ci(std::string_view haystack_lower, std::string_view needle, size_t base,
             std::vector<std::pair<size_t, size_t>>& hits) {
    if (needle.empty())
        return;
    std::string n = to_lower(needle);
    size_t pos = 0;
    while ((pos = haystack_lower.find(n, pos)) != std::string_view::npos) {
        hits.emplace_back(base + pos, n.size());
        pos += 1;
    }
}

struct Collector {
    size_t txn_index;
    std::vector<Detection> out;
    // one rule's overlapping self-matches collapse on (region, offset, len)
    std::set<std::tuple<std::string, Region, size_t, size_t>> seen;

    void add(const std::string& data_type, MatchKind kind, Region region, size_t offset,
             std::string_view matched) {
        if (!seen.emplace(data_type, region, offset, matched.size()).second)
            return;
        out.push_back({data_type, kind, region, std::string(matched), offset, txn_index});
    }
};

void scan_text_region(Collector& col, Region region, std::string_view text, size_t base,
                      const std::vector<ExtractionRule>& rules) {
    if (text.empty())
        return;
    std::string lower = to_lower(text);
    for (const auto& rule : rules) {
        std::vector<std::pair<size_t, size_t>> hits;
        for (const auto& lit : rule.literals)
            find_ci(lower, lit, 0, hits);
        for (auto [off, len] : hits)
            col.add(rule.data_type, MatchKind::Literal, region, base + off, text.substr(off, len));

        for (const auto& re : rule.patterns) {
            for (auto it = std::cregex_iterator(text.begin(), text.end(), re);
                 it != std::cregex_iterator(); ++it) {
                col.add(rule.data_type, MatchKind::Pattern, region,
                        base + static_cast<size_t>(it->position()), text.substr(
                            static_cast<size_t>(it->position()), static_cast<size_t>(it->length())));
            }
        }

        for (const auto& value : rule.static_values) {
            std::vector<std::pair<size_t, size_t>> vhits;
            find_ci(lower, value, 0, vhits);
            for (auto [off, len] : vhits)
                col.add(rule.data_type, MatchKind::Static, region, base + off,
                        text.substr(off, len));
        }
        for (const auto& digest : rule.static_hashes) {
            std::vector<std::pair<size_t, size_t>> hhits;
            find_ci(lower, digest, 0, hhits);
            for (auto [off, len] : hhits)
                col.add(rule.data_type, MatchKind::Hash, region, base + off,
                        text.substr(off, len));
        }
    }
}

bool key_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
}

// Candidate keys in free text: quoted JSON keys ("key":) and k=v pairs.
// This doubles as the recursive JSON key walk since nested object keys all
// appear as quoted-key-colon at the byte level.
std::vector<std::pair<size_t, std::string_view>> candidate_keys(std::string_view text) {
    std::vector<std::pair<size_t, std::string_view>> keys;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '"') {
            size_t start = i + 1;
            size_t end = start;
            while (end < text.size() && key_char(static_cast<unsigned char>(text[end])))
                ++end;
            if (end > start && end < text.size() && text[end] == '"') {
                size_t after = end + 1;
                while (after < text.size() &&
                       std::isspace(static_cast<unsigned char>(text[after])))
                    ++after;
                if (after < text.size() && text[after] == ':')
                    keys.emplace_back(start, text.substr(start, end - start));
            }
        } else if (text[i] == '=' && i > 0) {
            size_t end = i;
            size_t start = end;
            while (start > 0 && key_char(static_cast<unsigned char>(text[start - 1])))
                --start;
            if (end > start)
                keys.emplace_back(start, text.substr(start, end - start));
        }
    }
    return keys;
}

void match_keys(Collector& col, Region region,
                const std::vector<std::pair<size_t, std::string_view>>& keys,
                const std::vector<ExtractionRule>& rules) {
    for (const auto& [offset, key] : keys) {
        std::string norm = normalize_key(key);
        if (norm.empty())
            continue;
        for (const auto& rule : rules)
            for (const auto& want : rule.key_names)
                if (norm == want)
                    col.add(rule.data_type, MatchKind::Key, region, offset, key);
    }
}

} // namespace

std::vector<Detection> scan(const HttpTransaction& txn, const std::vector<ExtractionRule>& rules,
                            size_t txn_index) {
    Collector col{txn_index, {}, {}};

    scan_text_region(col, Region::Path, txn.path, 0, rules);

    scan_text_region(col, Region::Query, txn.query, 0, rules);
    {
        std::vector<std::pair<size_t, std::string_view>> keys;
        size_t pos = 0;
        std::string_view q = txn.query;
        while (pos < q.size()) {
            size_t amp = q.find('&', pos);
            if (amp == std::string_view::npos)
                amp = q.size();
            std::string_view pair = q.substr(pos, amp - pos);
            size_t eq = pair.find('=');
            std::string_view key = eq == std::string_view::npos ? pair : pair.substr(0, eq);
            if (!key.empty())
                keys.emplace_back(pos, key);
            pos = amp + 1;
        }
        match_keys(col, Region::Query, keys, rules);
    }

    {
        std::string blob;
        std::vector<std::pair<size_t, std::string_view>> keys;
        std::vector<std::pair<size_t, size_t>> name_spans; // offset, length
        for (const auto& [k, v] : txn.headers) {
            name_spans.emplace_back(blob.size(), k.size());
            blob += k;
            blob += ": ";
            blob += v;
            blob += "\r\n";
        }
        scan_text_region(col, Region::Header, blob, 0, rules);
        std::string_view view = blob;
        for (auto [off, len] : name_spans)
            keys.emplace_back(off, view.substr(off, len));
        for (const auto& [off, key] : candidate_keys(view))
            keys.emplace_back(off, key);
        match_keys(col, Region::Header, keys, rules);
    }

    for (const auto& [start, span] : ascii_spans(txn.body)) {
        scan_text_region(col, Region::Body, span, start, rules);
        std::vector<std::pair<size_t, std::string_view>> keys;
        for (const auto& [off, key] : candidate_keys(span))
            keys.emplace_back(start + off, key);
        match_keys(col, Region::Body, keys, rules);
    }

    auto& dets = col.out;
    std::sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        return std::tie(a.region, a.offset, a.data_type, a.kind, a.matched) <
               std::tie(b.region, b.offset, b.data_type, b.kind, b.matched);
    });
    return dets;
}

std::vector<Detection> scan_all(const std::vector<HttpTransaction>& txns,
                                const std::vector<ExtractionRule>& rules) {
    std::vector<Detection> all;
    for (size_t i = 0; i < txns.size(); ++i) {
        auto dets = scan(txns[i], rules, i);
        all.insert(all.end(), dets.begin(), dets.end());
    }
    return all;
}

std::vector<DataFlow> flows_from_detections(const std::vector<Detection>& detections,
                                            const std::vector<HttpTransaction>& txns) {
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<Detection>> groups;
    for (const auto& det : detections) {
        const auto& txn = txns.at(det.txn_index);
        groups[{txn.app_id, det.data_type, txn.host}].push_back(det);
    }
    std::vector<DataFlow> flows;
    flows.reserve(groups.size());
    for (auto& [key, evidence] : groups) {
        std::sort(evidence.begin(), evidence.end(), [](const Detection& a, const Detection& b) {
            return std::tie(a.txn_index, a.region, a.offset) <
                   std::tie(b.txn_index, b.region, b.offset);
        });
        flows.push_back(
            {std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(evidence)});
    }
    return flows; // std::map iteration already sorted by the triple
}

} // namespace flowaudit
