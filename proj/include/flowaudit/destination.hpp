#pragma once

#include "flowaudit/psl.hpp"
#include "flowaudit/scan.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace flowaudit {

enum class Party { First, Third, Platform };

std::string to_string(Party p);
Party party_from_string(const std::string& s);

struct DestinationLabel {
    std::string fqdn;
    std::string esld;
    std::string entity;
    Party party = Party::Third;
    bool ats = false;
    std::vector<std::string> matched_lists;
};

struct AppMeta {
    std::string package;
    std::string policy_url;
    std::vector<std::string> first_party_aliases;
    std::vector<std::string> referenced_policies;
};

// Ordered "pattern -> entity" list; "*." patterns match the domain itself and
// any subdomain. Longest pattern wins; unmapped domains are an unknown third
// party.
class EntityMap {
  public:
    static EntityMap load(const std::string& path);
    static EntityMap from_lines(const std::vector<std::string>& lines);
    void add(const std::string& pattern, const std::string& entity);

    std::string lookup(std::string_view fqdn) const;
    static constexpr const char* kUnknown = "unknown third party";

  private:
    struct Entry {
        std::string pattern; // lowercase, "*." stripped into `wildcard`
        bool wildcard = false;
        std::string entity;
    };
    std::vector<Entry> entries_;
};

enum class BlocklistFormat { Hosts, Domains };

struct Blocklist {
    std::string name;
    std::set<std::string> entries; // lowercase domains
    static Blocklist load(const std::string& name, const std::string& path, BlocklistFormat fmt);
    static Blocklist from_lines(const std::string& name, const std::vector<std::string>& lines,
                                BlocklistFormat fmt);
};

struct PartyConfig {
    std::set<std::string> stoplist = {"com", "net", "org", "www", "app", "api", "the"};
    size_t min_token_len = 3;
    std::vector<std::string> cloud_suffixes = {"amazonaws.com", "cloudfunctions.net",
                                               "firebaseapp.com", "execute-api.*"};
    std::vector<std::string> platform_keywords = {"oculus", "facebook"};
};

// First if domain tokens appear in the policy URL or package name (subdomain
// tokens only for cloud-hosted domains), else Platform on the platform
// keywords, else Third.
Party categorize_party(std::string_view fqdn, const AppMeta& meta, const PublicSuffixList& psl,
                       const PartyConfig& cfg = {});

// True when the fqdn or any parent domain up to its eSLD appears in a list.
std::pair<bool, std::vector<std::string>> match_ats(std::string_view fqdn, std::string_view esld,
                                                    const std::vector<Blocklist>& lists);

DestinationLabel label_destination(std::string_view fqdn, const AppMeta& meta,
                                   const PublicSuffixList& psl, const EntityMap& entities,
                                   const std::vector<Blocklist>& lists,
                                   const PartyConfig& cfg = {});

struct MissedRow {
    std::string fqdn;
    std::string entity;
    std::set<std::string> data_types;
};

// Party depends on the sending app, so labels are keyed per (app, fqdn).
std::string label_key(std::string_view app, std::string_view fqdn);

// Third-party, non-ATS FQDNs ranked by distinct data types received
// (descending), ties broken by fqdn.
std::vector<MissedRow> missed_by_blocklists(const std::vector<DataFlow>& flows,
                                            const std::map<std::string, DestinationLabel>& labels);

} // namespace flowaudit
