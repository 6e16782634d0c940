#include "dome/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dome/cli/ledger.hpp"
#include "dome/errors.hpp"
#include "dome/memory/retrieval.hpp"
#include "dome/metrics/metrics.hpp"
#include "dome/outline/pipeline.hpp"
#include "dome/outline/premise.hpp"
#include "dome/outline/theory.hpp"

namespace dome::cli {

namespace fs = std::filesystem;

namespace {

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const PremiseParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const OutlineParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParseContract;
    } catch (const ExtractionEmptyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParseContract;
    } catch (const VerdictParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParseContract;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const ProviderError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const FixtureMissError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const EmptyCompletionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const DimensionMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int cmd_generate(const std::string& premise_path, const RunConfig& config,
                 const std::string& out_dir) {
    return guarded([&] {
        const StoryPremise premise = load_premise_file(premise_path);
        const WritingTheory theory = five_stage_theory();
        RunStore store(out_dir);

        auto gateway = make_gateway(
            config, build_default_catalog(static_cast<int>(theory.stage_count()),
                                          config.expansion_count));
        std::ofstream trace_out(store.trace_path(), std::ios::app);
        gateway->trace().set_sink(&trace_out, make_run_id());

        TemporalKG kg;
        if (store.manifest_exists()) {
            if (fs::exists(store.kg_path())) kg = TemporalKG::load(store.kg_path());
            if (fs::exists(store.embedding_cache_path()))
                kg.load_embedding_cache(store.embedding_cache_path());
        }

        const PipelineOptions options{config.expansion_count, config.threshold, config.top_k};
        PipelineResult result;
        try {
            result = run_pipeline(premise, theory, options, *gateway, kg, &store,
                                  config.snapshot());
        } catch (...) {
            // keep the ledger for the partial run; the manifest already holds
            // every completed step
            store.write_text(store.ledger_path(),
                             CallLedger::from_trace(gateway->trace()).to_json());
            throw;
        }
        store.write_text(store.ledger_path(), CallLedger::from_trace(gateway->trace()).to_json());

        print_warnings(result.warnings);
        long words = 0;
        for (const ChapterRecord& chapter : result.state.chapters)
            words += word_count(chapter.text);
        std::cout << "chapters: " << result.state.chapters.size() << "\n"
                  << "words: " << words << "\n"
                  << "api_calls: " << gateway->trace().size() << "\n"
                  << "out_dir: " << store.dir() << "\n";
        return kExitOk;
    });
}

int cmd_analyze(const std::string& kg_path, const RunConfig& config, const std::string& out_path,
                bool stub_judge) {
    return guarded([&] {
        TemporalKG kg = TemporalKG::load(kg_path);
        auto gateway =
            make_gateway(config, build_default_catalog(5, config.expansion_count));
        const ConflictReport report =
            analyze(kg, *gateway, config.analyzer_options(stub_judge));

        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw InputError("cannot write report: " + out_path);
            out << report.to_json();
        }
        print_warnings(report.warnings);
        char cr[16];
        std::snprintf(cr, sizeof(cr), "%.2f", report.cr_percent);
        std::cout << "n_total: " << report.n_total << "\n"
                  << "m_conflict: " << report.m << "\n"
                  << "CR: " << cr << "%\n";
        return kExitOk;
    });
}

int cmd_eval(const std::string& story_path, const std::optional<std::string>& kg_path,
             const RunConfig& config, const std::optional<std::string>& out_path,
             bool stub_judge) {
    return guarded([&] {
        const std::string story = read_file_or_throw(story_path);

        EvalOptions options;
        options.ent_base = config.entropy_base;
        options.split_chapters = config.split_chapters;
        options.analyzer = config.analyzer_options(stub_judge);

        std::optional<TemporalKG> kg;
        std::unique_ptr<Gateway> gateway;
        if (kg_path) {
            kg = TemporalKG::load(*kg_path);
            gateway = make_gateway(config, build_default_catalog(5, config.expansion_count));
        }
        const MetricReport report =
            evaluate_story(story, options, kg ? &*kg : nullptr, gateway.get());

        if (out_path) {
            std::ofstream out(*out_path);
            if (!out) throw InputError("cannot write report: " + *out_path);
            out << report.to_json();
        }
        char ent[32];
        std::snprintf(ent, sizeof(ent), "%.4f", report.ent2);
        std::cout << "word_num: " << report.word_num << "\n"
                  << "ent2: " << ent << "\n";
        if (report.cr_percent) {
            char cr[16];
            std::snprintf(cr, sizeof(cr), "%.2f", *report.cr_percent);
            std::cout << "cr_percent: " << cr << "\n";
        }
        return kExitOk;
    });
}

int cmd_kg_inspect(const std::string& kg_path) {
    return guarded([&] {
        const TemporalKG kg = TemporalKG::load(kg_path);
        std::cout << "nodes: " << kg.distinct_entity_count() << "\n"
                  << "relations: " << kg.distinct_action_count() << "\n"
                  << "quadruples: " << kg.size() << "\n"
                  << "# nodes = distinct entities (subjects and objects); relations = distinct "
                     "actions\n";
        return kExitOk;
    });
}

int cmd_kg_query(const std::string& kg_path, const std::string& query_text,
                 const RunConfig& config) {
    return guarded([&] {
        TemporalKG kg = TemporalKG::load(kg_path);
        auto gateway = make_gateway(config, build_default_catalog(5, config.expansion_count));
        std::vector<std::string> warnings;
        const RelevantContext context =
            query_relevant(kg, query_text, config.top_k, *gateway, config.threshold, &warnings);
        print_warnings(warnings);
        if (context.empty()) {
            std::cout << "no relevant content\n";
        } else {
            for (const std::string& sentence : context.sentences) std::cout << sentence << "\n";
        }
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// argument parsing
// ---------------------------------------------------------------------------

namespace {

struct CommonConfigArgs {
    std::optional<std::string> config_path;
    ConfigOverrides overrides;
    bool no_consume = false;
    bool exclude_premise = false;
    bool merge_chapters = false;

    RunConfig resolve() {
        if (no_consume) overrides.grouping_consume = false;
        if (exclude_premise) overrides.include_premise = false;
        if (merge_chapters) overrides.split_chapters = false;
        return resolve_config(config_path, overrides);
    }
};

void add_config_options(CLI::App* cmd, CommonConfigArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value lines)");
    auto& o = args.overrides;
    cmd->add_option("--endpoint", o.endpoint, "chat provider endpoint");
    cmd->add_option("--model", o.model, "chat model name");
    cmd->add_option("--api-key-ref", o.api_key_ref, "environment variable holding the API key");
    cmd->add_option("--temperature", o.temperature, "sampling temperature");
    cmd->add_option("--max-tokens", o.max_tokens, "completion token cap");
    cmd->add_option("--retry-limit", o.retry_limit, "transport retries");
    cmd->add_option("--timeout", o.timeout_seconds, "request timeout (seconds)");
    cmd->add_option("--embedder", o.embedder, "hash or http");
    cmd->add_option("--embed-endpoint", o.embed_endpoint, "embedding endpoint");
    cmd->add_option("--embed-model", o.embed_model, "embedding model name");
    cmd->add_option("--embed-dimension", o.embed_dimension, "hash-mock embedding dimension");
    cmd->add_option("--expansion-count,-M", o.expansion_count,
                    "chapter outlines per stage (M)");
    cmd->add_option("--threshold", o.threshold, "entity-retrieval cosine threshold");
    cmd->add_option("--top-k", o.top_k, "relevant-context size");
    cmd->add_option("--entropy-base", o.entropy_base, "entropy base: e or 2");
    cmd->add_option("--mode", o.mode, "live or replay");
    cmd->add_option("--fixture", o.fixture_path, "replay fixture file");
    cmd->add_option("--rule5-actions", o.rule5_actions,
                    "comma-separated attributive actions for grouping rule 5");
    cmd->add_option("--chunk-size", o.chunk_size, "group chunk size for describe/judge");
    cmd->add_flag("--no-consume", args.no_consume,
                  "grouping without consumption (groups may overlap)");
    cmd->add_flag("--exclude-premise", args.exclude_premise,
                  "leave chapter-0 quadruples out of conflict analysis");
    cmd->add_flag("--merge-chapters", args.merge_chapters,
                  "let bigrams cross chapter boundaries in the entropy metric");
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"DOME: long-form story generation with a temporal-KG memory"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "generate a story from a premise");
    std::string premise_path, out_dir = "out";
    CommonConfigArgs generate_config;
    generate->add_option("--premise", premise_path, "premise file")->required();
    generate->add_option("--out", out_dir, "output directory");
    add_config_options(generate, generate_config);

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "conflict analysis of a KG file");
    std::string analyze_kg, analyze_out;
    bool analyze_stub = false;
    CommonConfigArgs analyze_config;
    analyze_cmd->add_option("--kg", analyze_kg, "KG file (jsonl)")->required();
    analyze_cmd->add_option("--out", analyze_out, "report file")->required();
    analyze_cmd->add_flag("--stub-judge", analyze_stub, "deterministic offline judge");
    add_config_options(analyze_cmd, analyze_config);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "auto metrics for a story document");
    std::string eval_story;
    std::optional<std::string> eval_kg, eval_out;
    bool eval_stub = false;
    CommonConfigArgs eval_config;
    eval_cmd->add_option("--story", eval_story, "story document")->required();
    eval_cmd->add_option("--kg", eval_kg, "KG file (enables the conflict rate)");
    eval_cmd->add_option("--out", eval_out, "metric report file");
    eval_cmd->add_flag("--stub-judge", eval_stub, "deterministic offline judge");
    add_config_options(eval_cmd, eval_config);

    // kg inspect / kg query
    auto* kg_cmd = app.add_subcommand("kg", "inspect or query a persisted KG");
    kg_cmd->require_subcommand(1);
    auto* inspect_cmd = kg_cmd->add_subcommand("inspect", "node/relation/quadruple counts");
    std::string inspect_kg;
    inspect_cmd->add_option("--kg", inspect_kg, "KG file")->required();
    auto* query_cmd = kg_cmd->add_subcommand("query", "query relevant content");
    std::string query_kg, query_text;
    CommonConfigArgs query_config;
    query_cmd->add_option("--kg", query_kg, "KG file")->required();
    query_cmd->add_option("text", query_text, "query text")->required();
    add_config_options(query_cmd, query_config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    return guarded([&]() -> int {
        if (generate->parsed())
            return cmd_generate(premise_path, generate_config.resolve(), out_dir);
        if (analyze_cmd->parsed())
            return cmd_analyze(analyze_kg, analyze_config.resolve(), analyze_out, analyze_stub);
        if (eval_cmd->parsed())
            return cmd_eval(eval_story, eval_kg, eval_config.resolve(), eval_out, eval_stub);
        if (inspect_cmd->parsed()) return cmd_kg_inspect(inspect_kg);
        if (query_cmd->parsed())
            return cmd_kg_query(query_kg, query_text, query_config.resolve());
        return kExitInput;
    });
}

}  // namespace dome::cli
