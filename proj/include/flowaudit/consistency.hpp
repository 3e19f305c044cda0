#pragma once

#include "flowaudit/destination.hpp"
#include "flowaudit/ontology.hpp"

#include <map>
#include <string>
#include <vector>

namespace flowaudit {

enum class PolicyAction { Collect, NotCollect };
enum class DisclosureClass { Clear, Vague, Omitted, Ambiguous, Incorrect };

std::string to_string(PolicyAction a);
std::string to_string(DisclosureClass c);
DisclosureClass disclosure_from_string(const std::string& s);
bool is_consistent(DisclosureClass c);

// One policy-derived tuple <app, data type, entity> with its action and the
// sentence it came from.
struct CollectionStatement {
    std::string app_id;
    TermRef entity;
    PolicyAction action = PolicyAction::Collect;
    TermRef data_type;
    std::string sentence_id;
    std::string sentence_text;
    std::string source_policy; // "app" or the external policy's entity name
};

// The flow side of the comparison: <data type, entity>; entity is "we" for
// first-party flows.
struct FlowKey {
    TermRef data_type;
    TermRef entity;
};

struct DisclosureVerdict {
    FlowKey flow;
    DisclosureClass cls = DisclosureClass::Omitted;
    std::vector<CollectionStatement> matched_collect;
    std::vector<CollectionStatement> matched_not_collect;
    // sentence ids yielding both collect and not_collect for the same terms
    std::vector<std::string> conflicting_sentences;
};

// External policies indexed by owning entity; their statements use "we" for
// their own first person.
using PolicyLibrary = std::map<std::string, std::vector<CollectionStatement>>;

struct MergeWarnings {
    std::vector<std::string> unknown_referenced_entities;
};

// App statements plus any referenced or auto-included external policies with
// "we" rewritten to the owning entity's name.
std::vector<CollectionStatement> merge_policies(const std::vector<CollectionStatement>& app_stmts,
                                                const AppMeta& meta, const PolicyLibrary& library,
                                                const std::vector<std::string>& auto_include,
                                                const Ontology& entity_ont,
                                                MergeWarnings* warnings = nullptr);

// Entities named by a first-party alias (or we/us/our) become "we".
CollectionStatement resolve_first_party(CollectionStatement stmt, const AppMeta& meta,
                                        const Ontology& entity_ont);

DisclosureVerdict classify(const FlowKey& flow, const std::vector<CollectionStatement>& stmts,
                           const Ontology& data_ont, const Ontology& entity_ont);

struct ConsistencyTotals {
    std::map<DisclosureClass, size_t> by_class;
    std::map<std::string, std::map<DisclosureClass, size_t>> by_category;
    std::map<std::string, std::map<DisclosureClass, size_t>> by_entity;
    size_t consistent = 0;
    size_t inconsistent = 0;
    size_t total = 0;
};

ConsistencyTotals summarize(const std::vector<DisclosureVerdict>& verdicts,
                            const std::map<std::string, DataCategory>& categories);

} // namespace flowaudit
