#include "flowaudit/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

using nlohmann::json;

namespace flowaudit {
namespace {

const Party kParties[] = {Party::First, Party::Third, Party::Platform};

const DisclosureClass kClasses[] = {DisclosureClass::Clear, DisclosureClass::Vague,
                                    DisclosureClass::Omitted, DisclosureClass::Ambiguous,
                                    DisclosureClass::Incorrect};

double pct_blocked(const ExposureCell& cell) {
    if (cell.fqdns.empty())
        return 0;
    return 100.0 * static_cast<double>(cell.blocked.size()) /
           static_cast<double>(cell.fqdns.size());
}

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_pct0(const ExposureCell& cell) {
    if (cell.fqdns.empty())
        return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f%%", pct_blocked(cell));
    return buf;
}

// category order mirrors the exposure tables: PII, Fingerprint, VR sensory
int category_rank(DataCategory c) {
    switch (c) {
    case DataCategory::Pii: return 0;
    case DataCategory::Fingerprint: return 1;
    case DataCategory::VrSensoryData: return 2;
    }
    return 3;
}

std::vector<std::string> ordered_data_types(const ReportBundle& b) {
    std::vector<std::string> types;
    for (const auto& [dt, cells] : b.exposure)
        types.push_back(dt);
    std::sort(types.begin(), types.end(), [&b](const std::string& x, const std::string& y) {
        auto cx = b.categories.count(x) ? category_rank(b.categories.at(x)) : 3;
        auto cy = b.categories.count(y) ? category_rank(b.categories.at(y)) : 3;
        return cx != cy ? cx < cy : x < y;
    });
    return types;
}

// totals are over unique sets, not sums of the per-type cells
ExposureCell union_cell(const ReportBundle& b, Party party) {
    ExposureCell total;
    for (const auto& [dt, cells] : b.exposure) {
        auto it = cells.find(party);
        if (it == cells.end())
            continue;
        total.apps.insert(it->second.apps.begin(), it->second.apps.end());
        total.fqdns.insert(it->second.fqdns.begin(), it->second.fqdns.end());
        total.blocked.insert(it->second.blocked.begin(), it->second.blocked.end());
    }
    return total;
}

} // namespace

ReportBundle aggregate_report(const std::vector<DataFlow>& flows,
                              const std::map<std::string, DestinationLabel>& labels,
                              const std::vector<DisclosureVerdict>& verdicts,
                              const PurposeTallies& purposes,
                              const std::map<std::string, DataCategory>& categories) {
    ReportBundle b;
    b.categories = categories;
    b.purposes = purposes;
    for (const auto& flow : flows) {
        auto lit = labels.find(label_key(flow.app_id, flow.destination_fqdn));
        if (lit == labels.end())
            lit = labels.find(flow.destination_fqdn);
        if (lit == labels.end())
            continue;
        auto& cell = b.exposure[flow.data_type][lit->second.party];
        cell.apps.insert(flow.app_id);
        cell.fqdns.insert(flow.destination_fqdn);
        if (lit->second.ats)
            cell.blocked.insert(flow.destination_fqdn);
    }
    b.consistency = summarize(verdicts, categories);
    b.missed = missed_by_blocklists(flows, labels);
    return b;
}

std::string ReportBundle::to_csv() const {
    std::ostringstream out;
    out << "section,data_type,category,party,apps,fqdns,pct_blocked\n";
    for (const auto& dt : ordered_data_types(*this)) {
        std::string cat =
            categories.count(dt) ? flowaudit::to_string(categories.at(dt)) : "Uncategorized";
        for (Party p : kParties) {
            auto it = exposure.at(dt).find(p);
            if (it == exposure.at(dt).end())
                continue;
            out << "exposure," << dt << ',' << cat << ',' << flowaudit::to_string(p) << ','
                << it->second.apps.size() << ',' << it->second.fqdns.size() << ','
                << fmt_full(pct_blocked(it->second)) << '\n';
        }
    }
    for (Party p : kParties) {
        ExposureCell total = union_cell(*this, p);
        out << "exposure_total,all,," << flowaudit::to_string(p) << ',' << total.apps.size() << ','
            << total.fqdns.size() << ',' << fmt_full(pct_blocked(total)) << '\n';
    }

    out << "section,group,class,count\n";
    for (const auto& [cat, by_class] : consistency.by_category)
        for (DisclosureClass c : kClasses) {
            auto it = by_class.find(c);
            out << "disclosure_by_category," << cat << ',' << flowaudit::to_string(c) << ','
                << (it == by_class.end() ? 0 : it->second) << '\n';
        }
    for (const auto& [entity, by_class] : consistency.by_entity)
        for (DisclosureClass c : kClasses) {
            auto it = by_class.find(c);
            out << "disclosure_by_entity," << entity << ',' << flowaudit::to_string(c) << ','
                << (it == by_class.end() ? 0 : it->second) << '\n';
        }

    out << "section,purpose,functional_class,count\n";
    for (const auto& [label, count] : purposes.by_label)
        out << "purpose," << label << ',' << flowaudit::to_string(functional_class(label)) << ','
            << count << '\n';
    out << "purpose_total,core,," << purposes.core << '\n';
    out << "purpose_total,unrelated,," << purposes.unrelated << '\n';
    out << "purpose_total,unspecific_flows,," << purposes.unspecific_flows << '\n';

    out << "section,fqdn,entity,data_types\n";
    for (const auto& row : missed)
        out << "missed_by_blocklists," << row.fqdn << ',' << row.entity << ','
            << row.data_types.size() << '\n';
    return out.str();
}

std::string ReportBundle::to_markdown() const {
    std::ostringstream out;
    out << "# Audit report\n\n";
    out << "## Data types exposed\n\n";
    out << "Cells read apps / FQDNs / % of FQDNs blocked.\n\n";
    out << "| Data type | Category | First | Third | Platform |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& dt : ordered_data_types(*this)) {
        std::string cat =
            categories.count(dt) ? flowaudit::to_string(categories.at(dt)) : "Uncategorized";
        out << "| " << dt << " | " << cat;
        for (Party p : kParties) {
            auto it = exposure.at(dt).find(p);
            if (it == exposure.at(dt).end() || it->second.fqdns.empty()) {
                out << " | -";
            } else {
                out << " | " << it->second.apps.size() << "/" << it->second.fqdns.size() << "/"
                    << fmt_pct0(it->second);
            }
        }
        out << " |\n";
    }
    out << "| **Total** | ";
    for (Party p : kParties) {
        ExposureCell total = union_cell(*this, p);
        out << "| " << total.apps.size() << "/" << total.fqdns.size() << "/" << fmt_pct0(total)
            << " ";
    }
    out << "|\n\n";

    out << "## Disclosure classes\n\n";
    out << "| Group | clear | vague | omitted | ambiguous | incorrect |\n";
    out << "|---|---|---|---|---|---|\n";
    auto class_row = [&out](const std::string& name,
                            const std::map<DisclosureClass, size_t>& by_class) {
        out << "| " << name;
        for (DisclosureClass c : kClasses) {
            auto it = by_class.find(c);
            out << " | " << (it == by_class.end() ? 0 : it->second);
        }
        out << " |\n";
    };
    class_row("all flows", consistency.by_class);
    for (const auto& [cat, by_class] : consistency.by_category)
        class_row("category: " + cat, by_class);
    for (const auto& [entity, by_class] : consistency.by_entity)
        class_row("entity: " + entity, by_class);
    out << "\nConsistent: " << consistency.consistent << " / " << consistency.total
        << ", inconsistent: " << consistency.inconsistent << "\n\n";

    out << "## Purposes\n\n";
    out << "| Purpose | Functional class | Flows |\n|---|---|---|\n";
    for (const auto& [label, count] : purposes.by_label)
        out << "| " << label << " | " << flowaudit::to_string(functional_class(label)) << " | "
            << count << " |\n";
    out << "\nCore: " << purposes.core << ", unrelated: " << purposes.unrelated
        << ", unspecific-only flows: " << purposes.unspecific_flows << "\n\n";

    if (!missed.empty()) {
        out << "## Missed by blocklists\n\n";
        out << "| FQDN | Entity | Distinct data types |\n|---|---|---|\n";
        for (const auto& row : missed)
            out << "| " << row.fqdn << " | " << row.entity << " | " << row.data_types.size()
                << " |\n";
        out << "\n";
    }
    return out.str();
}

std::string ReportBundle::histogram_json() const {
    json j;
    for (DisclosureClass c : kClasses) {
        auto it = consistency.by_class.find(c);
        j[flowaudit::to_string(c)] = it == consistency.by_class.end() ? 0 : it->second;
    }
    j["consistent"] = consistency.consistent;
    j["inconsistent"] = consistency.inconsistent;
    j["total"] = consistency.total;
    return j.dump(2) + "\n";
}

} // namespace flowaudit
