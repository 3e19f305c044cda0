#include "flowaudit/pipeline.hpp"
#include "flowaudit/sigscan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fa = flowaudit;

namespace {

std::string slurp_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + out_path);
    out << content;
}

struct StageArgs {
    std::string config;
    std::string mode;
    std::string report_format;
    bool first_match_only = false;
};

fa::PipelineConfig load_config(const StageArgs& args) {
    fa::PipelineConfig cfg = fa::PipelineConfig::load(args.config);
    if (args.mode == "reference-policies") {
        // include the platform and engine policies for every app
        cfg.auto_include = {"oculus", "unity"};
    } else if (!args.mode.empty()) {
        throw fa::ConfigError("unknown mode: " + args.mode);
    }
    if (!args.report_format.empty())
        cfg.report_format = args.report_format;
    if (args.first_match_only)
        cfg.first_match_only = true;
    return cfg;
}

int run_stage(const StageArgs& args, const char* name, void (*stage)(const fa::PipelineConfig&)) {
    try {
        fa::PipelineConfig cfg = load_config(args);
        cfg.validate();
        stage(cfg);
        return fa::kExitOk;
    } catch (const fa::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return fa::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "stage " << name << " failed: " << e.what() << "\n";
        return fa::kExitParse;
    }
}

void add_stage_options(CLI::App* cmd, StageArgs& args) {
    cmd->add_option("--config", args.config, "pipeline config file")->required();
    cmd->add_option("--mode", args.mode, "reference-policies: auto-include oculus/unity policies");
    cmd->add_option("--report-format", args.report_format, "all|csv|md|json");
    cmd->add_flag("--first-match-only", args.first_match_only,
                  "stop purpose matching at the first matching segment");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-to-policy privacy audit pipeline"};
    app.require_subcommand(1);

    StageArgs args;
    struct StageCmd {
        const char* name;
        const char* help;
        void (*fn)(const fa::PipelineConfig&);
    };
    const StageCmd stage_cmds[] = {
        {"ingest", "parse captures into transactions.jsonl", fa::stage_ingest},
        {"extract", "scan transactions into flows.jsonl", fa::stage_extract},
        {"label", "label destinations into labels.jsonl", fa::stage_label},
        {"check", "classify disclosures into verdicts.jsonl", fa::stage_check},
        {"purpose", "attach purposes into purposes.jsonl", fa::stage_purpose},
        {"report", "write the report bundle", fa::stage_report},
    };

    CLI::App* run = app.add_subcommand("run", "run the whole pipeline");
    add_stage_options(run, args);

    for (const auto& sc : stage_cmds)
        add_stage_options(app.add_subcommand(sc.name, sc.help), args);

    // sigscan: signature extraction and matching on raw binaries
    CLI::App* sigscan = app.add_subcommand("sigscan", "binary function signature tools");
    sigscan->require_subcommand(1);

    std::string ref_path, offset_str, label, sig_out;
    CLI::App* sx = sigscan->add_subcommand("extract", "extract a signature at a known offset");
    sx->add_option("reference", ref_path, "symbolicated reference binary")->required();
    sx->add_option("--offset", offset_str, "function offset (decimal or 0x hex)")->required();
    sx->add_option("--label", label, "signature label");
    sx->add_option("-o,--out", sig_out, "write signature JSON here (default stdout)");

    std::string stripped_path, sig_path, hits_out;
    bool exec_only = false;
    CLI::App* sl = sigscan->add_subcommand("locate", "locate a signature in a stripped binary");
    sl->add_option("stripped", stripped_path, "stripped binary to scan")->required();
    sl->add_option("--sig", sig_path, "signature JSON produced by extract")->required();
    sl->add_flag("--exec-only", exec_only, "scan only executable ELF segments");
    sl->add_option("-o,--out", hits_out, "write hits JSON here (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return fa::run_pipeline(load_config(args));
    for (const auto& sc : stage_cmds)
        if (app.get_subcommand(sc.name)->parsed())
            return run_stage(args, sc.name, sc.fn);

    try {
        if (sx->parsed()) {
            std::string blob = slurp_binary(ref_path);
            uint64_t offset = std::stoull(offset_str, nullptr, 0);
            fa::SignatureSpec sig = fa::extract_signature(blob, offset, label);
            emit(sig_out, sig.to_json());
            return fa::kExitOk;
        }
        if (sl->parsed()) {
            std::string blob = slurp_binary(stripped_path);
            fa::SignatureSpec sig = fa::SignatureSpec::from_json(slurp_binary(sig_path));
            std::vector<fa::ScanHit> hits;
            if (exec_only) {
                auto ranges = fa::elf_executable_ranges(blob);
                hits = ranges.empty() ? fa::locate(blob, sig)
                                      : fa::locate_in_ranges(blob, sig, ranges);
            } else {
                hits = fa::locate(blob, sig);
            }
            std::ostringstream out;
            out << "[";
            for (size_t i = 0; i < hits.size(); ++i)
                out << (i ? "," : "") << "{\"offset\":" << hits[i].offset << "}";
            out << "]";
            emit(hits_out, out.str());
            return fa::kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return fa::kExitParse;
    }
    return fa::kExitConfig;
}
