#include "flowaudit/purpose.hpp"

#include "flowaudit/text.hpp"

#include <algorithm>

namespace flowaudit {

std::string to_string(FunctionalClass c) {
    switch (c) {
    case FunctionalClass::Core: return "core";
    case FunctionalClass::Unrelated: return "unrelated";
    case FunctionalClass::Unspecific: return "unspecific";
    }
    return "?";
}

const std::vector<std::string>& purpose_labels() {
    static const std::vector<std::string> labels = {
        "additional service feature",
        "advertising",
        "analytics research",
        "basic service feature",
        "legal requirement",
        "marketing",
        "merger acquisition",
        "personalization customization",
        "service operation and security",
        "unspecific",
    };
    return labels;
}

FunctionalClass functional_class(const std::string& purpose_label) {
    static const std::set<std::string> core = {
        "basic service feature", "service operation and security",
        "personalization customization", "legal requirement", "merger acquisition"};
    static const std::set<std::string> unrelated = {"advertising", "analytics research",
                                                    "marketing", "additional service feature"};
    std::string norm = normalize_term(purpose_label);
    if (core.count(norm))
        return FunctionalClass::Core;
    if (unrelated.count(norm))
        return FunctionalClass::Unrelated;
    if (norm == kUnspecific)
        return FunctionalClass::Unspecific;
    throw std::runtime_error("unknown purpose label: " + purpose_label);
}

namespace {

bool tokens_match(const std::set<std::string>& sentence, const AnnotatedSegment& segment) {
    auto contains = [](const std::set<std::string>& big, const std::set<std::string>& small) {
        return !small.empty() &&
               std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    std::set<std::string> seg_tokens = bag_of_words(segment.text);
    if (contains(seg_tokens, sentence))
        return true;
    // also try the segment's own sentences against the query sentence
    for (const auto& seg_sentence : split_sentences(segment.text))
        if (contains(sentence, bag_of_words(seg_sentence)))
            return true;
    return false;
}

} // namespace

std::vector<size_t> match_segments(const std::string& sentence,
                                   const std::vector<AnnotatedSegment>& segments,
                                   bool first_match_only) {
    std::vector<size_t> out;
    std::set<std::string> tokens = bag_of_words(sentence);
    if (tokens.empty())
        return out;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (tokens_match(tokens, segments[i])) {
            out.push_back(i);
            if (first_match_only)
                break;
        }
    }
    return out;
}

std::optional<size_t> match_segment(const std::string& sentence,
                                    const std::vector<AnnotatedSegment>& segments) {
    auto hits = match_segments(sentence, segments, true);
    if (hits.empty())
        return std::nullopt;
    return hits.front();
}

std::pair<std::set<std::string>, std::map<std::string, std::string>>
annotate_flow_with_provenance(const DisclosureVerdict& verdict,
                              const std::vector<AnnotatedSegment>& segments,
                              bool first_match_only) {
    if (!is_consistent(verdict.cls))
        throw NotConsistent(to_string(verdict.cls) + " <" + verdict.flow.data_type.raw + ", " +
                            verdict.flow.entity.raw + ">");
    std::set<std::string> purposes;
    std::map<std::string, std::string> provenance;
    auto note = [&](const std::string& label, const std::string& segment_id) {
        purposes.insert(label);
        provenance.emplace(label, segment_id);
    };
    for (const auto& stmt : verdict.matched_collect) {
        for (size_t idx : match_segments(stmt.sentence_text, segments, first_match_only)) {
            const auto& seg = segments[idx];
            if (seg.purposes.empty())
                note(kUnspecific, seg.segment_id);
            else
                for (const auto& p : seg.purposes)
                    note(normalize_term(p), seg.segment_id);
        }
    }
    if (purposes.empty())
        purposes.insert(kUnspecific);
    return {std::move(purposes), std::move(provenance)};
}

std::set<std::string> annotate_flow(const DisclosureVerdict& verdict,
                                    const std::vector<AnnotatedSegment>& segments,
                                    bool first_match_only) {
    return annotate_flow_with_provenance(verdict, segments, first_match_only).first;
}

std::pair<std::vector<PurposedFlow>, PurposeTallies>
expand_and_categorize(const std::vector<FlowPurposes>& flows) {
    std::vector<PurposedFlow> records;
    PurposeTallies tallies;
    for (const auto& fp : flows) {
        std::set<std::string> named;
        for (const auto& p : fp.purposes) {
            std::string norm = normalize_term(p);
            if (norm != kUnspecific)
                named.insert(norm);
        }
        if (named.empty()) {
            ++tallies.unspecific_flows;
            ++tallies.by_label[kUnspecific];
            continue;
        }
        for (const auto& p : named) {
            PurposedFlow rec;
            rec.flow = fp.flow;
            rec.purpose = p;
            auto prov = fp.provenance.find(p);
            if (prov != fp.provenance.end())
                rec.segment_id = prov->second;
            records.push_back(std::move(rec));
            ++tallies.by_label[p];
            if (functional_class(p) == FunctionalClass::Core)
                ++tallies.core;
            else
                ++tallies.unrelated;
        }
    }
    return {std::move(records), tallies};
}

} // namespace flowaudit
