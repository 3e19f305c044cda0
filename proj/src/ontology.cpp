#include "flowaudit/ontology.hpp"

#include "flowaudit/text.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

namespace flowaudit {
namespace {

std::vector<std::pair<std::string, std::string>> read_tsv_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw OntologyError("cannot open " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        auto stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;
        auto tab = stripped.find('\t');
        if (tab == std::string_view::npos)
            throw OntologyError(path + ": expected 'a<TAB>b', got '" + std::string(stripped) + "'");
        out.emplace_back(std::string(trim(stripped.substr(0, tab))),
                         std::string(trim(stripped.substr(tab + 1))));
    }
    return out;
}

} // namespace

Ontology Ontology::load(const std::string& edges_path, const std::string& synonyms_path,
                        OntologyKind kind) {
    return from_edges(read_tsv_pairs(edges_path),
                      synonyms_path.empty() ? std::vector<std::pair<std::string, std::string>>{}
                                            : read_tsv_pairs(synonyms_path),
                      kind);
}

Ontology Ontology::from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                              const std::vector<std::pair<std::string, std::string>>& synonyms,
                              OntologyKind kind) {
    Ontology ont;
    ont.kind_ = kind;
    auto intern = [&ont](std::string_view raw) -> uint32_t {
        std::string name = normalize_term(raw);
        auto it = ont.index_.find(name);
        if (it != ont.index_.end())
            return it->second;
        uint32_t id = static_cast<uint32_t>(ont.names_.size());
        ont.index_.emplace(name, id);
        ont.names_.push_back(std::move(name));
        ont.parents_.emplace_back();
        return id;
    };
    for (const auto& [child, parent] : edges) {
        uint32_t c = intern(child);
        uint32_t p = intern(parent);
        auto& ps = ont.parents_[c];
        if (std::find(ps.begin(), ps.end(), p) == ps.end())
            ps.push_back(p);
    }
    for (const auto& [alias, target] : synonyms) {
        std::string a = normalize_term(alias);
        std::string t = normalize_term(target);
        if (ont.index_.count(a))
            throw DuplicateNode(a);
        if (!ont.index_.count(t))
            throw DanglingSynonym(a, t);
        ont.synonyms_.emplace(std::move(a), std::move(t));
    }
    ont.validate_and_close();
    return ont;
}

void Ontology::validate_and_close() {
    size_t n = names_.size();
    // Kahn toposort; leftover edges mean a cycle.
    std::vector<uint32_t> pending(n, 0);
    std::vector<std::vector<uint32_t>> children(n);
    for (uint32_t c = 0; c < n; ++c) {
        pending[c] = static_cast<uint32_t>(parents_[c].size());
        for (uint32_t p : parents_[c])
            children[p].push_back(c);
    }
    std::deque<uint32_t> roots;
    for (uint32_t i = 0; i < n; ++i)
        if (pending[i] == 0)
            roots.push_back(i);
    std::vector<uint32_t> order;
    order.reserve(n);
    while (!roots.empty()) {
        uint32_t p = roots.front();
        roots.pop_front();
        order.push_back(p);
        for (uint32_t c : children[p])
            if (--pending[c] == 0)
                roots.push_back(c);
    }
    if (order.size() != n) {
        std::string path;
        for (uint32_t i = 0; i < n; ++i)
            if (pending[i] > 0)
                path += (path.empty() ? "" : " -> ") + names_[i];
        throw CycleDetected(path);
    }

    // Parents appear before children in `order`, so one pass builds the
    // full ancestor closure.
    ancestors_.assign(n, {});
    for (uint32_t node : order) {
        std::set<uint32_t> acc{node};
        for (uint32_t p : parents_[node])
            acc.insert(ancestors_[p].begin(), ancestors_[p].end());
        ancestors_[node].assign(acc.begin(), acc.end());
    }
}

size_t Ontology::leaf_count() const {
    std::vector<bool> has_child(names_.size(), false);
    for (uint32_t c = 0; c < names_.size(); ++c)
        for (uint32_t p : parents_[c])
            has_child[p] = true;
    size_t leaves = 0;
    for (bool b : has_child)
        if (!b)
            ++leaves;
    return leaves;
}

bool Ontology::has_node(std::string_view canonical) const {
    return index_.count(normalize_term(canonical)) > 0;
}

TermRef Ontology::resolve(std::string_view raw) const {
    std::string norm = normalize_term(raw);
    auto syn = synonyms_.find(norm);
    if (syn != synonyms_.end())
        return {std::string(raw), syn->second};
    if (index_.count(norm))
        return {std::string(raw), norm};
    return {std::string(raw), ""};
}

uint32_t Ontology::index_of(const TermRef& t) const {
    if (!t.resolved())
        throw UnresolvedTerm(t.raw);
    auto it = index_.find(t.canonical);
    if (it == index_.end())
        throw UnresolvedTerm(t.raw);
    return it->second;
}

bool Ontology::subsumes(const TermRef& ancestor, const TermRef& descendant) const {
    uint32_t a = index_of(ancestor);
    uint32_t d = index_of(descendant);
    const auto& anc = ancestors_[d];
    return std::binary_search(anc.begin(), anc.end(), a);
}

bool Ontology::subsumes(std::string_view ancestor_raw, std::string_view descendant_raw) const {
    return subsumes(resolve(ancestor_raw), resolve(descendant_raw));
}

} // namespace flowaudit
