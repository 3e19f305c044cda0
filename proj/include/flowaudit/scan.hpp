#pragma once

#include "flowaudit/rules.hpp"
#include "flowaudit/transaction.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace flowaudit {

enum class MatchKind { Literal, Pattern, Key, Static, Hash };
enum class Region { Path, Query, Header, Body };

std::string to_string(MatchKind k);
std::string to_string(Region r);

// Evidence for one rule firing inside one transaction.
struct Detection {
    std::string data_type;
    MatchKind kind = MatchKind::Literal;
    Region region = Region::Body;
    std::string matched;
    size_t offset = 0;    // within the searched region
    size_t txn_index = 0; // into the scanned transaction list
};

// The <app, data type, destination> tuple plus its supporting evidence.
struct DataFlow {
    std::string app_id;
    std::string data_type;
    std::string destination_fqdn;
    std::vector<Detection> evidence;
};

// All rule matches in one transaction. Literals/keys match case-insensitively,
// patterns as compiled; static values match via their hash variants too.
std::vector<Detection> scan(const HttpTransaction& txn, const std::vector<ExtractionRule>& rules,
                            size_t txn_index = 0);

std::vector<Detection> scan_all(const std::vector<HttpTransaction>& txns,
                                const std::vector<ExtractionRule>& rules);

// Groups detections by (app, data type, host); output sorted by that triple,
// evidence kept in capture order.
std::vector<DataFlow> flows_from_detections(const std::vector<Detection>& detections,
                                            const std::vector<HttpTransaction>& txns);

} // namespace flowaudit
