#include "flowaudit/consistency.hpp"

#include "flowaudit/text.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowaudit {

std::string to_string(PolicyAction a) {
    return a == PolicyAction::Collect ? "collect" : "not_collect";
}

std::string to_string(DisclosureClass c) {
    switch (c) {
    case DisclosureClass::Clear: return "clear";
    case DisclosureClass::Vague: return "vague";
    case DisclosureClass::Omitted: return "omitted";
    case DisclosureClass::Ambiguous: return "ambiguous";
    case DisclosureClass::Incorrect: return "incorrect";
    }
    return "?";
}

DisclosureClass disclosure_from_string(const std::string& s) {
    std::string v = to_lower(s);
    if (v == "clear")
        return DisclosureClass::Clear;
    if (v == "vague")
        return DisclosureClass::Vague;
    if (v == "omitted")
        return DisclosureClass::Omitted;
    if (v == "ambiguous")
        return DisclosureClass::Ambiguous;
    if (v == "incorrect")
        return DisclosureClass::Incorrect;
    throw std::runtime_error("unknown disclosure class: " + s);
}

bool is_consistent(DisclosureClass c) {
    return c == DisclosureClass::Clear || c == DisclosureClass::Vague;
}

std::vector<CollectionStatement> merge_policies(const std::vector<CollectionStatement>& app_stmts,
                                                const AppMeta& meta, const PolicyLibrary& library,
                                                const std::vector<std::string>& auto_include,
                                                const Ontology& entity_ont,
                                                MergeWarnings* warnings) {
    std::vector<CollectionStatement> merged = app_stmts;
    for (auto& s : merged)
        if (s.source_policy.empty())
            s.source_policy = "app";

    std::vector<std::string> wanted;
    auto want = [&wanted](const std::string& name) {
        std::string norm = normalize_term(name);
        if (std::find(wanted.begin(), wanted.end(), norm) == wanted.end())
            wanted.push_back(norm);
    };
    for (const auto& e : meta.referenced_policies)
        want(e);
    for (const auto& e : auto_include)
        want(e);

    for (const auto& entity_name : wanted) {
        auto it = library.find(entity_name);
        if (it == library.end()) {
            if (warnings)
                warnings->unknown_referenced_entities.push_back(entity_name);
            continue;
        }
        for (CollectionStatement stmt : it->second) {
            // first-person pronouns in the external policy mean that entity
            if (normalize_term(stmt.entity.raw) == "we" || stmt.entity.canonical == "we")
                stmt.entity = entity_ont.resolve(entity_name);
            stmt.source_policy = entity_name;
            merged.push_back(std::move(stmt));
        }
    }
    return merged;
}

CollectionStatement resolve_first_party(CollectionStatement stmt, const AppMeta& meta,
                                        const Ontology& entity_ont) {
    std::string norm = normalize_term(stmt.entity.raw);
    bool first_person = norm == "we" || norm == "us" || norm == "our";
    if (!first_person) {
        for (const auto& alias : meta.first_party_aliases)
            if (norm == normalize_term(alias)) {
                first_person = true;
                break;
            }
    }
    if (first_person)
        stmt.entity = entity_ont.resolve("we");
    return stmt;
}

DisclosureVerdict classify(const FlowKey& flow, const std::vector<CollectionStatement>& stmts,
                           const Ontology& data_ont, const Ontology& entity_ont) {
    if (!flow.data_type.resolved())
        throw UnresolvedTerm(flow.data_type.raw);
    if (!flow.entity.resolved())
        throw UnresolvedTerm(flow.entity.raw);

    DisclosureVerdict v;
    v.flow = flow;
    for (const auto& s : stmts) {
        if (!s.data_type.resolved() || !s.entity.resolved())
            continue; // unmatched policy terms cannot disclose anything
        if (!data_ont.subsumes(s.data_type, flow.data_type) ||
            !entity_ont.subsumes(s.entity, flow.entity))
            continue;
        if (s.action == PolicyAction::Collect)
            v.matched_collect.push_back(s);
        else
            v.matched_not_collect.push_back(s);
    }

    for (const auto& c : v.matched_collect)
        for (const auto& n : v.matched_not_collect)
            if (!c.sentence_id.empty() && c.sentence_id == n.sentence_id &&
                c.data_type.canonical == n.data_type.canonical &&
                c.entity.canonical == n.entity.canonical)
                v.conflicting_sentences.push_back(c.sentence_id);

    bool any_collect = !v.matched_collect.empty();
    bool any_not = !v.matched_not_collect.empty();
    if (!any_collect && !any_not) {
        v.cls = DisclosureClass::Omitted;
    } else if (any_collect && any_not) {
        v.cls = DisclosureClass::Ambiguous;
    } else if (!any_collect) {
        v.cls = DisclosureClass::Incorrect;
    } else {
        bool exact = std::any_of(v.matched_collect.begin(), v.matched_collect.end(),
                                 [&flow](const CollectionStatement& s) {
                                     return s.data_type.canonical == flow.data_type.canonical &&
                                            s.entity.canonical == flow.entity.canonical;
                                 });
        v.cls = exact ? DisclosureClass::Clear : DisclosureClass::Vague;
    }
    return v;
}

ConsistencyTotals summarize(const std::vector<DisclosureVerdict>& verdicts,
                            const std::map<std::string, DataCategory>& categories) {
    ConsistencyTotals t;
    t.total = verdicts.size();
    for (const auto& v : verdicts) {
        ++t.by_class[v.cls];
        auto cat = categories.find(v.flow.data_type.canonical);
        std::string cat_name = cat == categories.end() ? "Uncategorized" : to_string(cat->second);
        ++t.by_category[cat_name][v.cls];
        ++t.by_entity[v.flow.entity.canonical][v.cls];
        if (is_consistent(v.cls))
            ++t.consistent;
        else
            ++t.inconsistent;
    }
    return t;
}

} // namespace flowaudit
