#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace flowaudit {

struct OntologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CycleDetected : OntologyError {
    explicit CycleDetected(const std::string& path)
        : OntologyError("ontology cycle: " + path) {}
};
struct DanglingSynonym : OntologyError {
    explicit DanglingSynonym(const std::string& alias, const std::string& target)
        : OntologyError("synonym '" + alias + "' points at unknown node '" + target + "'") {}
};
struct DuplicateNode : OntologyError {
    explicit DuplicateNode(const std::string& name)
        : OntologyError("synonym alias collides with node '" + name + "'") {}
};
struct UnresolvedTerm : OntologyError {
    explicit UnresolvedTerm(const std::string& raw)
        : OntologyError("unresolved term '" + raw + "'") {}
};

// A term as written somewhere (traffic, policy text), resolved against an
// ontology's synonym list and node set.
struct TermRef {
    std::string raw;
    std::string canonical; // empty when unresolved
    bool resolved() const { return !canonical.empty(); }
};

enum class OntologyKind { Data, Entity };

// Hypernym DAG: an edge child -> parent means the parent subsumes the child.
// Multi-parent nodes are allowed; the graph must be acyclic.
class Ontology {
  public:
    static Ontology load(const std::string& edges_path, const std::string& synonyms_path,
                         OntologyKind kind);
    static Ontology from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                               const std::vector<std::pair<std::string, std::string>>& synonyms,
                               OntologyKind kind);

    OntologyKind kind() const { return kind_; }
    size_t node_count() const { return names_.size(); }
    size_t leaf_count() const;
    bool has_node(std::string_view canonical) const;
    const std::vector<std::string>& nodes() const { return names_; }

    // Synonym lookup then exact node match, case-insensitive; never throws.
    TermRef resolve(std::string_view raw) const;

    // True iff ancestor == descendant or ancestor is reachable from descendant
    // via child->parent edges. Throws UnresolvedTerm on unresolved input.
    bool subsumes(const TermRef& ancestor, const TermRef& descendant) const;
    bool subsumes(std::string_view ancestor_raw, std::string_view descendant_raw) const;

  private:
    OntologyKind kind_ = OntologyKind::Data;
    std::vector<std::string> names_;
    std::unordered_map<std::string, uint32_t> index_;
    std::unordered_map<std::string, std::string> synonyms_;
    std::vector<std::vector<uint32_t>> parents_;
    // ancestors_[n] holds n itself plus every transitive parent, sorted.
    std::vector<std::vector<uint32_t>> ancestors_;

    void validate_and_close();
    uint32_t index_of(const TermRef& t) const;
};

} // namespace flowaudit
