#pragma once

#include "flowaudit/consistency.hpp"
#include "flowaudit/destination.hpp"
#include "flowaudit/purpose.hpp"

#include <map>
#include <string>
#include <vector>

namespace flowaudit {

// Per data type and party: unique apps sending it, unique FQDNs receiving
// it, and which of those FQDNs a blocklist covers.
struct ExposureCell {
    std::set<std::string> apps;
    std::set<std::string> fqdns;
    std::set<std::string> blocked;
};

struct ReportBundle {
    // data_type -> party -> cell
    std::map<std::string, std::map<Party, ExposureCell>> exposure;
    std::map<std::string, DataCategory> categories; // data_type -> category
    ConsistencyTotals consistency;
    PurposeTallies purposes;
    std::vector<MissedRow> missed;

    std::string to_csv() const;
    std::string to_markdown() const;
    std::string histogram_json() const;
};

ReportBundle aggregate_report(const std::vector<DataFlow>& flows,
                              const std::map<std::string, DestinationLabel>& labels,
                              const std::vector<DisclosureVerdict>& verdicts,
                              const PurposeTallies& purposes,
                              const std::map<std::string, DataCategory>& categories);

} // namespace flowaudit
