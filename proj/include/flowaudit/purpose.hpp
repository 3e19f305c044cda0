#pragma once

#include "flowaudit/consistency.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flowaudit {

enum class FunctionalClass { Core, Unrelated, Unspecific };

std::string to_string(FunctionalClass c);

// The nine purpose labels plus "unspecific". Throws on anything else.
FunctionalClass functional_class(const std::string& purpose_label);
const std::vector<std::string>& purpose_labels();
inline constexpr const char* kUnspecific = "unspecific";

// One policy text segment with its annotated purposes; an empty annotation
// set means "unspecific".
struct AnnotatedSegment {
    std::string policy_id;
    std::string segment_id;
    std::string text;
    std::set<std::string> purposes;
};

// Binary bag-of-words containment: a sentence matches a segment when one
// side's token set contains the other's. Returns the first match in document
// order, or nullopt (the NO_MATCH outcome).
std::optional<size_t> match_segment(const std::string& sentence,
                                    const std::vector<AnnotatedSegment>& segments);
std::vector<size_t> match_segments(const std::string& sentence,
                                   const std::vector<AnnotatedSegment>& segments,
                                   bool first_match_only);

struct NotConsistent : std::runtime_error {
    explicit NotConsistent(const std::string& what)
        : std::runtime_error("purpose annotation requires a consistent verdict: " + what) {}
};

// Union of purposes over segments matching the verdict's collect sentences;
// empty union becomes {unspecific}. Precondition: verdict is clear or vague.
std::set<std::string> annotate_flow(const DisclosureVerdict& verdict,
                                    const std::vector<AnnotatedSegment>& segments,
                                    bool first_match_only = false);

// Same, also reporting which segment first contributed each purpose.
std::pair<std::set<std::string>, std::map<std::string, std::string>>
annotate_flow_with_provenance(const DisclosureVerdict& verdict,
                              const std::vector<AnnotatedSegment>& segments,
                              bool first_match_only = false);

struct PurposedFlow {
    DataFlow flow;
    std::string purpose;
    std::string segment_id;
};

struct PurposeTallies {
    size_t core = 0;
    size_t unrelated = 0;
    size_t unspecific_flows = 0; // flows with no purpose beyond "unspecific"
    std::map<std::string, size_t> by_label;
};

struct FlowPurposes {
    DataFlow flow;
    std::set<std::string> purposes;
    std::map<std::string, std::string> provenance; // purpose -> segment_id
};

// One record per (flow, purpose); unspecific-only flows are tallied apart and
// produce no records.
std::pair<std::vector<PurposedFlow>, PurposeTallies>
expand_and_categorize(const std::vector<FlowPurposes>& flows);

} // namespace flowaudit
