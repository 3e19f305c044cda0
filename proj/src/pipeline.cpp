#include "flowaudit/pipeline.hpp"

#include "flowaudit/ingest.hpp"
#include "flowaudit/scan.hpp"
#include "flowaudit/text.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace flowaudit {
namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

std::vector<std::string> env_list_or(const char* name, std::vector<std::string> fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v)
        return fallback;
    return split(v, ",");
}

std::string resolve(const fs::path& base, const std::string& path) {
    if (path.empty())
        return path;
    fs::path p(path);
    return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

void for_each_jsonl(const std::string& path, const char* what,
                    const std::function<void(const json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        try {
            fn(json::parse(line));
        } catch (const json::exception& e) {
            throw std::runtime_error(std::string(what) + " line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
}

json term_to_json(const TermRef& t) {
    return json{{"raw", t.raw}, {"canonical", t.canonical}};
}

TermRef term_from_json(const json& j) {
    return {j.value("raw", ""), j.value("canonical", "")};
}

json statement_to_json(const CollectionStatement& s) {
    json j;
    j["app"] = s.app_id;
    j["entity"] = term_to_json(s.entity);
    j["action"] = to_string(s.action);
    j["data_type"] = term_to_json(s.data_type);
    j["sentence_id"] = s.sentence_id;
    j["sentence"] = s.sentence_text;
    j["source_policy"] = s.source_policy;
    return j;
}

CollectionStatement statement_from_json(const json& j) {
    CollectionStatement s;
    s.app_id = j.value("app", "");
    s.entity = term_from_json(j.at("entity"));
    s.action =
        j.value("action", "collect") == "not_collect" ? PolicyAction::NotCollect
                                                      : PolicyAction::Collect;
    s.data_type = term_from_json(j.at("data_type"));
    s.sentence_id = j.value("sentence_id", "");
    s.sentence_text = j.value("sentence", "");
    s.source_policy = j.value("source_policy", "");
    return s;
}

} // namespace

std::string PipelineConfig::artifact(const std::string& name) const {
    return (fs::path(output_dir) / name).string();
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    fs::path base = fs::path(path).parent_path();

    PipelineConfig cfg;
    auto str = [&](const char* key) { return j.value(key, std::string()); };
    for (const auto& c : j.value("captures", json::array()))
        cfg.captures.push_back(resolve(base, c.get<std::string>()));
    cfg.rules = resolve(base, str("rules"));
    cfg.profile = resolve(base, str("profile"));
    cfg.entity_map = resolve(base, str("entity_map"));
    for (const auto& b : j.value("blocklists", json::array())) {
        BlocklistRef ref;
        ref.name = b.value("name", "blocklist");
        ref.path = resolve(base, b.at("path").get<std::string>());
        ref.format = b.value("format", "domains") == "hosts" ? BlocklistFormat::Hosts
                                                             : BlocklistFormat::Domains;
        cfg.blocklists.push_back(std::move(ref));
    }
    cfg.psl = resolve(base, str("psl"));
    cfg.data_ontology_edges = resolve(base, str("data_ontology_edges"));
    cfg.data_ontology_synonyms = resolve(base, str("data_ontology_synonyms"));
    cfg.entity_ontology_edges = resolve(base, str("entity_ontology_edges"));
    cfg.entity_ontology_synonyms = resolve(base, str("entity_ontology_synonyms"));
    cfg.apps_meta = resolve(base, str("apps_meta"));
    cfg.statements = resolve(base, str("statements"));
    cfg.segments = resolve(base, str("segments"));
    cfg.policy_library = resolve(base, str("policy_library"));
    for (const auto& e : j.value("auto_include", json::array()))
        cfg.auto_include.push_back(e.get<std::string>());
    cfg.first_match_only = j.value("first_match_only", false);
    cfg.report_format = j.value("report_format", std::string("all"));
    cfg.output_dir = resolve(base, j.value("output_dir", std::string("out")));

    if (j.contains("token_stoplist")) {
        cfg.party.stoplist.clear();
        for (const auto& t : j["token_stoplist"])
            cfg.party.stoplist.insert(to_lower(t.get<std::string>()));
    }
    if (j.contains("min_token_len"))
        cfg.party.min_token_len = j["min_token_len"].get<size_t>();
    if (j.contains("cloud_suffixes")) {
        cfg.party.cloud_suffixes.clear();
        for (const auto& s : j["cloud_suffixes"])
            cfg.party.cloud_suffixes.push_back(to_lower(s.get<std::string>()));
    }
    if (j.contains("platform_keywords")) {
        cfg.party.platform_keywords.clear();
        for (const auto& s : j["platform_keywords"])
            cfg.party.platform_keywords.push_back(to_lower(s.get<std::string>()));
    }

    // FLOWAUDIT_* environment overrides
    cfg.rules = env_or("FLOWAUDIT_RULES", cfg.rules);
    cfg.profile = env_or("FLOWAUDIT_PROFILE", cfg.profile);
    cfg.entity_map = env_or("FLOWAUDIT_ENTITY_MAP", cfg.entity_map);
    cfg.psl = env_or("FLOWAUDIT_PSL", cfg.psl);
    cfg.apps_meta = env_or("FLOWAUDIT_APPS_META", cfg.apps_meta);
    cfg.statements = env_or("FLOWAUDIT_STATEMENTS", cfg.statements);
    cfg.segments = env_or("FLOWAUDIT_SEGMENTS", cfg.segments);
    cfg.policy_library = env_or("FLOWAUDIT_POLICY_LIBRARY", cfg.policy_library);
    cfg.output_dir = env_or("FLOWAUDIT_OUTPUT_DIR", cfg.output_dir);
    cfg.captures = env_list_or("FLOWAUDIT_CAPTURES", std::move(cfg.captures));
    cfg.auto_include = env_list_or("FLOWAUDIT_AUTO_INCLUDE", std::move(cfg.auto_include));
    if (const char* v = std::getenv("FLOWAUDIT_FIRST_MATCH_ONLY"); v && *v)
        cfg.first_match_only = std::string(v) != "0" && std::string(v) != "false";
    return cfg;
}

void PipelineConfig::validate() const {
    auto need = [](const std::string& path, const char* what) {
        if (path.empty())
            throw ConfigError(std::string("config: missing required path: ") + what);
        if (!fs::exists(path))
            throw ConfigError(std::string(what) + " not found: " + path);
    };
    auto optional = [](const std::string& path, const char* what) {
        if (!path.empty() && !fs::exists(path))
            throw ConfigError(std::string(what) + " not found: " + path);
    };
    if (captures.empty())
        throw ConfigError("config: no captures listed");
    for (const auto& c : captures)
        need(c, "capture");
    need(rules, "rules");
    need(psl, "psl");
    need(entity_map, "entity_map");
    need(data_ontology_edges, "data_ontology_edges");
    need(entity_ontology_edges, "entity_ontology_edges");
    optional(data_ontology_synonyms, "data_ontology_synonyms");
    optional(entity_ontology_synonyms, "entity_ontology_synonyms");
    optional(profile, "profile");
    optional(apps_meta, "apps_meta");
    optional(statements, "statements");
    optional(segments, "segments");
    optional(policy_library, "policy_library");
    for (const auto& b : blocklists)
        need(b.path, "blocklist");

    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec || !fs::is_directory(output_dir))
        throw ConfigError("output dir not writable: " + output_dir);
}

std::vector<CollectionStatement> parse_statements_jsonl(const std::string& path,
                                                        const Ontology& data_ont,
                                                        const Ontology& entity_ont) {
    std::vector<CollectionStatement> out;
    for_each_jsonl(path, "statements", [&](const json& j) {
        CollectionStatement s;
        s.app_id = j.at("app").get<std::string>();
        s.entity = entity_ont.resolve(j.at("entity").get<std::string>());
        s.action = j.at("action").get<std::string>() == "not_collect" ? PolicyAction::NotCollect
                                                                      : PolicyAction::Collect;
        s.data_type = data_ont.resolve(j.at("data_type").get<std::string>());
        s.sentence_id = j.value("sentence_id", "");
        s.sentence_text = j.value("sentence", "");
        s.source_policy = "app";
        out.push_back(std::move(s));
    });
    return out;
}

PolicyLibrary parse_policy_library_jsonl(const std::string& path, const Ontology& data_ont,
                                         const Ontology& entity_ont) {
    PolicyLibrary lib;
    for_each_jsonl(path, "policy library", [&](const json& j) {
        CollectionStatement s;
        std::string owner = normalize_term(j.at("policy").get<std::string>());
        s.app_id = "*";
        s.entity = entity_ont.resolve(j.at("entity").get<std::string>());
        s.action = j.at("action").get<std::string>() == "not_collect" ? PolicyAction::NotCollect
                                                                      : PolicyAction::Collect;
        s.data_type = data_ont.resolve(j.at("data_type").get<std::string>());
        s.sentence_id = j.value("sentence_id", "");
        s.sentence_text = j.value("sentence", "");
        s.source_policy = owner;
        lib[owner].push_back(std::move(s));
    });
    return lib;
}

std::map<std::string, AppMeta> parse_apps_meta_json(const std::string& path) {
    std::map<std::string, AppMeta> out;
    json j = json::parse(slurp(path));
    for (const auto& item : j) {
        AppMeta meta;
        meta.package = item.at("app").get<std::string>();
        meta.policy_url = item.value("policy_url", "");
        for (const auto& a : item.value("first_party_aliases", json::array()))
            meta.first_party_aliases.push_back(a.get<std::string>());
        for (const auto& r : item.value("referenced_policies", json::array()))
            meta.referenced_policies.push_back(r.get<std::string>());
        out.emplace(meta.package, std::move(meta));
    }
    return out;
}

std::vector<AnnotatedSegment> parse_segments_jsonl(const std::string& path) {
    std::vector<AnnotatedSegment> out;
    for_each_jsonl(path, "segments", [&](const json& j) {
        AnnotatedSegment seg;
        seg.policy_id = j.value("policy_id", "");
        seg.segment_id = j.value("segment_id", "");
        seg.text = j.at("text").get<std::string>();
        for (const auto& p : j.value("purposes", json::array())) {
            std::string label = normalize_term(p.get<std::string>());
            functional_class(label); // rejects labels outside the inventory
            seg.purposes.insert(std::move(label));
        }
        if (seg.purposes.empty())
            seg.purposes.insert(kUnspecific);
        out.push_back(std::move(seg));
    });
    return out;
}

std::vector<DataFlow> read_flows_jsonl(const std::string& path) {
    std::vector<DataFlow> out;
    for_each_jsonl(path, "flows", [&](const json& j) {
        DataFlow f;
        f.app_id = j.at("app").get<std::string>();
        f.data_type = j.at("data_type").get<std::string>();
        f.destination_fqdn = j.at("host").get<std::string>();
        for (const auto& e : j.value("evidence", json::array())) {
            Detection d;
            d.data_type = f.data_type;
            std::string kind = e.value("kind", "literal");
            d.kind = kind == "pattern"  ? MatchKind::Pattern
                     : kind == "key"    ? MatchKind::Key
                     : kind == "static" ? MatchKind::Static
                     : kind == "hash"   ? MatchKind::Hash
                                        : MatchKind::Literal;
            std::string region = e.value("region", "body");
            d.region = region == "path"    ? Region::Path
                       : region == "query" ? Region::Query
                       : region == "header" ? Region::Header
                                            : Region::Body;
            d.matched = e.value("matched", "");
            d.offset = e.value("offset", size_t{0});
            d.txn_index = e.value("txn_index", size_t{0});
            f.evidence.push_back(std::move(d));
        }
        out.push_back(std::move(f));
    });
    return out;
}

void write_flows_jsonl(const std::string& path, const std::vector<DataFlow>& flows) {
    std::ostringstream out;
    for (const auto& f : flows) {
        json j;
        j["app"] = f.app_id;
        j["data_type"] = f.data_type;
        j["host"] = f.destination_fqdn;
        json ev = json::array();
        for (const auto& d : f.evidence) {
            json e;
            e["kind"] = to_string(d.kind);
            e["region"] = to_string(d.region);
            e["matched"] = d.matched;
            e["offset"] = d.offset;
            e["txn_index"] = d.txn_index;
            ev.push_back(std::move(e));
        }
        j["evidence"] = ev;
        out << j.dump() << '\n';
    }
    spill(path, out.str());
}

std::map<std::string, DestinationLabel> read_labels_jsonl(const std::string& path) {
    std::map<std::string, DestinationLabel> out;
    for_each_jsonl(path, "labels", [&](const json& j) {
        DestinationLabel label;
        std::string app = j.at("app").get<std::string>();
        label.fqdn = j.at("fqdn").get<std::string>();
        label.esld = j.value("esld", "");
        label.entity = j.value("entity", EntityMap::kUnknown);
        label.party = party_from_string(j.value("party", "third"));
        label.ats = j.value("ats", false);
        for (const auto& l : j.value("matched_lists", json::array()))
            label.matched_lists.push_back(l.get<std::string>());
        out.emplace(label_key(app, label.fqdn), std::move(label));
    });
    return out;
}

void write_labels_jsonl(const std::string& path,
                        const std::map<std::string, DestinationLabel>& labels) {
    std::ostringstream out;
    for (const auto& [key, label] : labels) {
        auto tab = key.find('\t');
        json j;
        j["app"] = key.substr(0, tab);
        j["fqdn"] = label.fqdn;
        j["esld"] = label.esld;
        j["entity"] = label.entity;
        j["party"] = to_string(label.party);
        j["ats"] = label.ats;
        j["matched_lists"] = label.matched_lists;
        out << j.dump() << '\n';
    }
    spill(path, out.str());
}

std::vector<FlowVerdict> read_verdicts_jsonl(const std::string& path) {
    std::vector<FlowVerdict> out;
    for_each_jsonl(path, "verdicts", [&](const json& j) {
        FlowVerdict fv;
        fv.app_id = j.at("app").get<std::string>();
        fv.data_type = j.at("data_type").get<std::string>();
        fv.fqdn = j.at("fqdn").get<std::string>();
        fv.verdict.flow.data_type = term_from_json(j.at("flow_data_type"));
        fv.verdict.flow.entity = term_from_json(j.at("flow_entity"));
        fv.verdict.cls = disclosure_from_string(j.at("class").get<std::string>());
        for (const auto& s : j.value("matched_collect", json::array()))
            fv.verdict.matched_collect.push_back(statement_from_json(s));
        for (const auto& s : j.value("matched_not_collect", json::array()))
            fv.verdict.matched_not_collect.push_back(statement_from_json(s));
        for (const auto& s : j.value("conflicting_sentences", json::array()))
            fv.verdict.conflicting_sentences.push_back(s.get<std::string>());
        out.push_back(std::move(fv));
    });
    return out;
}

void write_verdicts_jsonl(const std::string& path, const std::vector<FlowVerdict>& verdicts) {
    std::ostringstream out;
    for (const auto& fv : verdicts) {
        json j;
        j["app"] = fv.app_id;
        j["data_type"] = fv.data_type;
        j["fqdn"] = fv.fqdn;
        j["flow_data_type"] = term_to_json(fv.verdict.flow.data_type);
        j["flow_entity"] = term_to_json(fv.verdict.flow.entity);
        j["class"] = to_string(fv.verdict.cls);
        json mc = json::array(), mn = json::array();
        for (const auto& s : fv.verdict.matched_collect)
            mc.push_back(statement_to_json(s));
        for (const auto& s : fv.verdict.matched_not_collect)
            mn.push_back(statement_to_json(s));
        j["matched_collect"] = mc;
        j["matched_not_collect"] = mn;
        j["conflicting_sentences"] = fv.verdict.conflicting_sentences;
        out << j.dump() << '\n';
    }
    spill(path, out.str());
}

void stage_ingest(const PipelineConfig& cfg) {
    std::vector<HttpTransaction> all;
    for (const auto& capture : cfg.captures) {
        auto txns = load_transactions(capture);
        all.insert(all.end(), std::make_move_iterator(txns.begin()),
                   std::make_move_iterator(txns.end()));
    }
    write_transactions_jsonl(cfg.artifact("transactions.jsonl"), all);
}

void stage_extract(const PipelineConfig& cfg) {
    auto txns = load_transactions(cfg.artifact("transactions.jsonl"), CaptureFormat::Jsonl);
    RuleSet rules = RuleSet::load(cfg.rules, cfg.profile);
    auto detections = scan_all(txns, rules.rules());
    auto flows = flows_from_detections(detections, txns);
    write_flows_jsonl(cfg.artifact("flows.jsonl"), flows);
}

void stage_label(const PipelineConfig& cfg) {
    auto flows = read_flows_jsonl(cfg.artifact("flows.jsonl"));
    auto psl = PublicSuffixList::load(cfg.psl);
    auto entities = EntityMap::load(cfg.entity_map);
    std::vector<Blocklist> lists;
    for (const auto& ref : cfg.blocklists)
        lists.push_back(Blocklist::load(ref.name, ref.path, ref.format));
    std::map<std::string, AppMeta> metas;
    if (!cfg.apps_meta.empty())
        metas = parse_apps_meta_json(cfg.apps_meta);

    std::map<std::string, DestinationLabel> labels;
    for (const auto& flow : flows) {
        std::string key = label_key(flow.app_id, flow.destination_fqdn);
        if (labels.count(key))
            continue;
        AppMeta meta;
        auto it = metas.find(flow.app_id);
        if (it != metas.end())
            meta = it->second;
        else
            meta.package = flow.app_id;
        labels.emplace(key, label_destination(flow.destination_fqdn, meta, psl, entities, lists,
                                              cfg.party));
    }
    write_labels_jsonl(cfg.artifact("labels.jsonl"), labels);
}

void stage_check(const PipelineConfig& cfg) {
    auto flows = read_flows_jsonl(cfg.artifact("flows.jsonl"));
    auto labels = read_labels_jsonl(cfg.artifact("labels.jsonl"));
    Ontology data_ont =
        Ontology::load(cfg.data_ontology_edges, cfg.data_ontology_synonyms, OntologyKind::Data);
    Ontology entity_ont = Ontology::load(cfg.entity_ontology_edges, cfg.entity_ontology_synonyms,
                                         OntologyKind::Entity);

    std::map<std::string, std::vector<CollectionStatement>> by_app;
    if (!cfg.statements.empty())
        for (auto& s : parse_statements_jsonl(cfg.statements, data_ont, entity_ont))
            by_app[s.app_id].push_back(std::move(s));
    PolicyLibrary library;
    if (!cfg.policy_library.empty())
        library = parse_policy_library_jsonl(cfg.policy_library, data_ont, entity_ont);
    std::map<std::string, AppMeta> metas;
    if (!cfg.apps_meta.empty())
        metas = parse_apps_meta_json(cfg.apps_meta);

    std::map<std::string, std::vector<CollectionStatement>> merged_cache;
    auto statements_for = [&](const std::string& app) -> const std::vector<CollectionStatement>& {
        auto it = merged_cache.find(app);
        if (it != merged_cache.end())
            return it->second;
        AppMeta meta;
        auto mit = metas.find(app);
        if (mit != metas.end())
            meta = mit->second;
        else
            meta.package = app;
        auto app_stmts = by_app.count(app) ? by_app[app] : std::vector<CollectionStatement>{};
        auto merged =
            merge_policies(app_stmts, meta, library, cfg.auto_include, entity_ont, nullptr);
        for (auto& s : merged)
            s = resolve_first_party(std::move(s), meta, entity_ont);
        return merged_cache.emplace(app, std::move(merged)).first->second;
    };

    std::vector<FlowVerdict> verdicts;
    verdicts.reserve(flows.size());
    for (const auto& flow : flows) {
        auto lit = labels.find(label_key(flow.app_id, flow.destination_fqdn));
        if (lit == labels.end())
            throw std::runtime_error("no label for flow " + flow.app_id + " -> " +
                                     flow.destination_fqdn);
        const auto& label = lit->second;
        std::string entity_raw = label.party == Party::First ? "we" : label.entity;

        FlowKey key;
        key.data_type = data_ont.resolve(flow.data_type);
        key.entity = entity_ont.resolve(entity_raw);
        if (!key.data_type.resolved())
            throw std::runtime_error("flow data type does not resolve in the data ontology: " +
                                     flow.data_type);
        if (!key.entity.resolved())
            key.entity = entity_ont.resolve(EntityMap::kUnknown);

        FlowVerdict fv;
        fv.app_id = flow.app_id;
        fv.data_type = flow.data_type;
        fv.fqdn = flow.destination_fqdn;
        fv.verdict = classify(key, statements_for(flow.app_id), data_ont, entity_ont);
        verdicts.push_back(std::move(fv));
    }
    write_verdicts_jsonl(cfg.artifact("verdicts.jsonl"), verdicts);
}

void stage_purpose(const PipelineConfig& cfg) {
    auto verdicts = read_verdicts_jsonl(cfg.artifact("verdicts.jsonl"));
    std::vector<AnnotatedSegment> segments;
    if (!cfg.segments.empty())
        segments = parse_segments_jsonl(cfg.segments);

    std::vector<FlowPurposes> annotated;
    for (const auto& fv : verdicts) {
        if (!is_consistent(fv.verdict.cls))
            continue;
        FlowPurposes fp;
        fp.flow.app_id = fv.app_id;
        fp.flow.data_type = fv.data_type;
        fp.flow.destination_fqdn = fv.fqdn;
        auto [purposes, provenance] =
            annotate_flow_with_provenance(fv.verdict, segments, cfg.first_match_only);
        fp.purposes = std::move(purposes);
        fp.provenance = std::move(provenance);
        annotated.push_back(std::move(fp));
    }

    auto [records, tallies] = expand_and_categorize(annotated);
    std::ostringstream out;
    for (const auto& rec : records) {
        json j;
        j["app"] = rec.flow.app_id;
        j["data_type"] = rec.flow.data_type;
        j["host"] = rec.flow.destination_fqdn;
        j["purpose"] = rec.purpose;
        j["functional_class"] = to_string(functional_class(rec.purpose));
        j["segment_id"] = rec.segment_id;
        out << j.dump() << '\n';
    }
    // unspecific-only flows carry no purpose records but stay visible
    for (const auto& fp : annotated) {
        bool named = false;
        for (const auto& p : fp.purposes)
            if (normalize_term(p) != kUnspecific)
                named = true;
        if (named)
            continue;
        json j;
        j["app"] = fp.flow.app_id;
        j["data_type"] = fp.flow.data_type;
        j["host"] = fp.flow.destination_fqdn;
        j["purpose"] = kUnspecific;
        j["functional_class"] = "unspecific";
        j["segment_id"] = fp.provenance.count(kUnspecific) ? fp.provenance.at(kUnspecific) : "";
        out << j.dump() << '\n';
    }
    spill(cfg.artifact("purposes.jsonl"), out.str());
}

void stage_report(const PipelineConfig& cfg) {
    auto flows = read_flows_jsonl(cfg.artifact("flows.jsonl"));
    auto labels = read_labels_jsonl(cfg.artifact("labels.jsonl"));
    auto flow_verdicts = read_verdicts_jsonl(cfg.artifact("verdicts.jsonl"));

    std::vector<DisclosureVerdict> verdicts;
    verdicts.reserve(flow_verdicts.size());
    for (const auto& fv : flow_verdicts)
        verdicts.push_back(fv.verdict);

    PurposeTallies tallies;
    for_each_jsonl(cfg.artifact("purposes.jsonl"), "purposes", [&](const json& j) {
        std::string purpose = j.at("purpose").get<std::string>();
        ++tallies.by_label[purpose];
        switch (functional_class(purpose)) {
        case FunctionalClass::Core: ++tallies.core; break;
        case FunctionalClass::Unrelated: ++tallies.unrelated; break;
        case FunctionalClass::Unspecific: ++tallies.unspecific_flows; break;
        }
    });

    RuleSet rules = RuleSet::load(cfg.rules);
    Ontology data_ont =
        Ontology::load(cfg.data_ontology_edges, cfg.data_ontology_synonyms, OntologyKind::Data);
    std::map<std::string, DataCategory> categories = rules.categories();
    for (const auto& [name, cat] : rules.categories()) {
        auto ref = data_ont.resolve(name);
        if (ref.resolved())
            categories.emplace(ref.canonical, cat);
    }

    ReportBundle bundle = aggregate_report(flows, labels, verdicts, tallies, categories);
    bool all = cfg.report_format == "all" || cfg.report_format.empty();
    if (all || cfg.report_format == "csv")
        spill(cfg.artifact("report.csv"), bundle.to_csv());
    if (all || cfg.report_format == "md")
        spill(cfg.artifact("report.md"), bundle.to_markdown());
    if (all || cfg.report_format == "json")
        spill(cfg.artifact("histogram.json"), bundle.histogram_json());
}

int run_pipeline(const PipelineConfig& cfg) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    struct Stage {
        const char* name;
        void (*fn)(const PipelineConfig&);
    };
    const Stage stages[] = {
        {"ingest", stage_ingest},   {"extract", stage_extract}, {"label", stage_label},
        {"check", stage_check},     {"purpose", stage_purpose}, {"report", stage_report},
    };
    for (const auto& stage : stages) {
        try {
            stage.fn(cfg);
        } catch (const std::exception& e) {
            std::cerr << "stage " << stage.name << " failed: " << e.what() << "\n";
            return kExitParse;
        }
    }
    return kExitOk;
}

} // namespace flowaudit
