#pragma once

#include "flowaudit/consistency.hpp"
#include "flowaudit/destination.hpp"
#include "flowaudit/ontology.hpp"
#include "flowaudit/purpose.hpp"
#include "flowaudit/report.hpp"
#include "flowaudit/rules.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowaudit {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string stage_name, const std::string& what)
        : std::runtime_error("stage " + stage_name + ": " + what), stage(std::move(stage_name)) {}
};

// exit codes shared by the library entry points and the CLI
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitParse = 3;

struct BlocklistRef {
    std::string name;
    std::string path;
    BlocklistFormat format = BlocklistFormat::Domains;
};

struct PipelineConfig {
    std::vector<std::string> captures;
    std::string rules;
    std::string profile;
    std::string entity_map;
    std::vector<BlocklistRef> blocklists;
    std::string psl;
    std::string data_ontology_edges;
    std::string data_ontology_synonyms;
    std::string entity_ontology_edges;
    std::string entity_ontology_synonyms;
    std::string apps_meta;
    std::string statements;
    std::string segments;
    std::string policy_library;
    std::vector<std::string> auto_include;
    bool first_match_only = false;
    PartyConfig party;
    std::string report_format = "all"; // all|csv|md|json
    std::string output_dir = "out";

    // Reads a JSON config; relative paths resolve against the config file's
    // directory; FLOWAUDIT_* environment variables override scalar keys.
    static PipelineConfig load(const std::string& path);
    void validate() const; // throws ConfigError

    std::string artifact(const std::string& name) const;
};

// Statement/segment/meta file parsing (shared with the stage subcommands).
std::vector<CollectionStatement> parse_statements_jsonl(const std::string& path,
                                                        const Ontology& data_ont,
                                                        const Ontology& entity_ont);
PolicyLibrary parse_policy_library_jsonl(const std::string& path, const Ontology& data_ont,
                                         const Ontology& entity_ont);
std::map<std::string, AppMeta> parse_apps_meta_json(const std::string& path);
std::vector<AnnotatedSegment> parse_segments_jsonl(const std::string& path);

// Flow/verdict rows as stored in the intermediate jsonl artifacts.
struct FlowVerdict {
    std::string app_id;
    std::string data_type;
    std::string fqdn;
    DisclosureVerdict verdict;
};

std::vector<DataFlow> read_flows_jsonl(const std::string& path);
void write_flows_jsonl(const std::string& path, const std::vector<DataFlow>& flows);
std::map<std::string, DestinationLabel> read_labels_jsonl(const std::string& path);
void write_labels_jsonl(const std::string& path,
                        const std::map<std::string, DestinationLabel>& labels);
std::vector<FlowVerdict> read_verdicts_jsonl(const std::string& path);
void write_verdicts_jsonl(const std::string& path, const std::vector<FlowVerdict>& verdicts);

// Stage entry points; each reads its inputs from disk and writes one
// artifact, so a full run equals running the stages one by one.
void stage_ingest(const PipelineConfig& cfg);
void stage_extract(const PipelineConfig& cfg);
void stage_label(const PipelineConfig& cfg);
void stage_check(const PipelineConfig& cfg);
void stage_purpose(const PipelineConfig& cfg);
void stage_report(const PipelineConfig& cfg);

int run_pipeline(const PipelineConfig& cfg);

} // namespace flowaudit
