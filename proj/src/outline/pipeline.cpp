#include "dome/outline/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/memory/retrieval.hpp"
#include "dome/text_util.hpp"

namespace dome {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// RunStore
// ---------------------------------------------------------------------------

RunStore::RunStore(std::string out_dir) : out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
}

std::string RunStore::manifest_path() const { return out_dir_ + "/manifest.json"; }
std::string RunStore::outline_path() const { return out_dir_ + "/outline.json"; }
std::string RunStore::story_path() const { return out_dir_ + "/story.md"; }
std::string RunStore::kg_path() const { return out_dir_ + "/kg.jsonl"; }
std::string RunStore::embedding_cache_path() const { return out_dir_ + "/embedding_cache.jsonl"; }
std::string RunStore::ledger_path() const { return out_dir_ + "/ledger.json"; }
std::string RunStore::trace_path() const { return out_dir_ + "/trace.jsonl"; }

bool RunStore::manifest_exists() const { return fs::exists(manifest_path()); }

void RunStore::write_text(const std::string& path, const std::string& content) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw InputError("cannot write " + path);
        out << content;
    }
    std::rename(tmp.c_str(), path.c_str());
}

std::vector<std::string> RunStore::expected_artifacts() const {
    return {manifest_path(),          outline_path(), story_path(), kg_path(),
            embedding_cache_path(), ledger_path(),  trace_path()};
}

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

std::string render_story_document(const StoryState& state) {
    std::string out;
    for (const ChapterRecord& chapter : state.chapters)
        out += "# Chapter " + std::to_string(chapter.number) + "\n\n" + chapter.text + "\n\n";
    return out;
}

std::vector<ChapterRecord> parse_story_document(const std::string& text) {
    static const std::regex header_re(R"(^#\s*Chapter\s+(\d+)\s*$)");
    std::vector<ChapterRecord> chapters;
    std::string current;
    int current_number = -1;
    auto flush = [&]() {
        if (current_number >= 0) chapters.push_back({current_number, "", trim(current)});
        current.clear();
    };
    for (const std::string& line : split_lines(text)) {
        std::smatch m;
        if (std::regex_match(line, m, header_re)) {
            flush();
            current_number = std::stoi(m[1].str());
        } else if (current_number >= 0) {
            current += line;
            current += '\n';
        }
    }
    flush();
    return chapters;
}

std::string render_outline_document(const RoughOutline& rough,
                                    const std::vector<DetailedOutline>& detailed) {
    json stages = json::array();
    for (std::size_t i = 0; i < rough.entries.size(); ++i) {
        json stage{{"label", rough.entries[i].stage_label},
                   {"storyline", rough.entries[i].text}};
        for (const DetailedOutline& d : detailed)
            if (d.stage_index == static_cast<int>(i) + 1) stage["chapter_outlines"] = d.items;
        stages.push_back(std::move(stage));
    }
    return json{{"stages", stages}}.dump(2) + "\n";
}

void parse_outline_document(const std::string& text, RoughOutline& rough,
                            std::vector<DetailedOutline>& detailed) {
    rough.entries.clear();
    detailed.clear();
    try {
        json doc = json::parse(text);
        int stage_index = 0;
        for (const json& stage : doc.at("stages")) {
            ++stage_index;
            rough.entries.push_back({stage.at("label").get<std::string>(),
                                     stage.at("storyline").get<std::string>()});
            if (stage.contains("chapter_outlines"))
                detailed.push_back(
                    {stage_index, stage["chapter_outlines"].get<std::vector<std::string>>()});
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed outline document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string chapter_step(int stage, int item) {
    return "chapter_" + std::to_string(stage) + "_" + std::to_string(item);
}

}  // namespace

PipelineResult run_pipeline(const StoryPremise& premise, const WritingTheory& theory,
                            const PipelineOptions& options, Gateway& gateway, TemporalKG& kg,
                            RunStore* store,
                            const std::map<std::string, std::string>& config_snapshot) {
    theory.validate();
    if (options.expansion_count < 1) throw InputError("expansion_count must be >= 1");
    const int stage_count = static_cast<int>(theory.stage_count());
    const int expansion = options.expansion_count;

    RunManifest manifest;
    bool resuming = false;
    if (store && store->manifest_exists()) {
        manifest = RunManifest::load(store->manifest_path());
        resuming = true;
    } else {
        manifest.run_id = make_run_id();
        manifest.created_at = iso_timestamp();
        manifest.config_snapshot = config_snapshot;
    }
    if (store) {
        manifest.artifacts = {{"manifest", store->manifest_path()},
                              {"outline", store->outline_path()},
                              {"story", store->story_path()},
                              {"kg", store->kg_path()},
                              {"embedding_cache", store->embedding_cache_path()},
                              {"ledger", store->ledger_path()},
                              {"trace", store->trace_path()}};
    }

    const std::map<std::string, int> prior_tallies = manifest.api_tallies;
    const int prior_embeds = manifest.embed_calls;
    const std::size_t trace_base = gateway.trace().size();

    PipelineResult result;

    // Preload artifacts of completed steps.
    std::map<int, std::string> preloaded_chapters;
    if (resuming) {
        if (manifest.has_step("rough_outline")) {
            if (!fs::exists(store->outline_path()))
                throw InputError("resume: outline artifact missing: " + store->outline_path());
            parse_outline_document(read_file(store->outline_path()), result.rough,
                                   result.detailed);
        }
        if (fs::exists(store->story_path()))
            for (const ChapterRecord& c : parse_story_document(read_file(store->story_path())))
                preloaded_chapters[c.number] = c.text;
    }

    auto persist = [&](const std::string& step) {
        if (!store) return;
        std::map<std::string, int> tallies = prior_tallies;
        int embeds = prior_embeds;
        const auto records = gateway.trace().snapshot();
        for (std::size_t i = trace_base; i < records.size(); ++i) {
            if (records[i].kind == "chat")
                ++tallies[records[i].template_id];
            else
                ++embeds;
        }
        manifest.api_tallies = std::move(tallies);
        manifest.embed_calls = embeds;

        store->write_text(store->outline_path(),
                          render_outline_document(result.rough, result.detailed));
        store->write_text(store->story_path(), render_story_document(result.state));
        kg.save(store->kg_path() + ".tmp");
        std::rename((store->kg_path() + ".tmp").c_str(), store->kg_path().c_str());
        kg.save_embedding_cache(store->embedding_cache_path() + ".tmp");
        std::rename((store->embedding_cache_path() + ".tmp").c_str(),
                    store->embedding_cache_path().c_str());

        manifest.mark_step(step);
        manifest.save(store->manifest_path());
    };

    // The premise enters the KG before anything else, at chapter 0.
    if (!manifest.has_step("store_premise")) {
        store_text(kg, premise.to_text(), 0, gateway, &result.warnings);
        persist("store_premise");
    }

    if (manifest.has_step("rough_outline")) {
        if (result.rough.entries.size() != static_cast<std::size_t>(stage_count))
            throw InputError("resume: rough outline does not match the theory's stage count");
    } else {
        result.rough = plan_rough_outline(premise, theory, gateway, &result.warnings);
        persist("rough_outline");
    }

    std::optional<std::string> prev_item;
    for (int i = 1; i <= stage_count; ++i) {
        const std::string stage_step = "detailed_outline_" + std::to_string(i);
        const RoughOutline::Entry& stage_entry = result.rough.entries[static_cast<std::size_t>(i - 1)];

        DetailedOutline det;
        if (manifest.has_step(stage_step)) {
            bool found = false;
            for (const DetailedOutline& d : result.detailed)
                if (d.stage_index == i) { det = d; found = true; break; }
            if (!found)
                throw InputError("resume: detailed outline for stage " + std::to_string(i) +
                                 " marked complete but missing from the outline artifact");
        } else {
            // A crash between artifact write and manifest save can leave an
            // unmarked stage in the outline document; recompute it cleanly.
            result.detailed.erase(
                std::remove_if(result.detailed.begin(), result.detailed.end(),
                               [i](const DetailedOutline& d) { return d.stage_index == i; }),
                result.detailed.end());
            RelevantContext stage_context = query_relevant(
                kg, stage_entry.text, options.top_k, gateway, options.threshold, &result.warnings);
            det = plan_detailed_outline(stage_entry, i, prev_item, stage_context, expansion,
                                        gateway, &result.warnings);
            result.detailed.push_back(det);
            persist(stage_step);
        }

        for (int t = 1; t <= expansion; ++t) {
            const int number = (i - 1) * expansion + t;
            const std::string& item = det.items[static_cast<std::size_t>(t - 1)];
            if (manifest.has_step(chapter_step(i, t))) {
                auto it = preloaded_chapters.find(number);
                if (it == preloaded_chapters.end())
                    throw InputError("resume: chapter " + std::to_string(number) +
                                     " marked complete but missing from the story artifact");
                result.state.chapters.push_back({number, item, it->second});
                result.state.chapter_counter = number;
            } else {
                RelevantContext chapter_context = query_relevant(
                    kg, item, options.top_k, gateway, options.threshold, &result.warnings);
                const std::string text = write_chapter(item, chapter_context, gateway);
                result.state.chapters.push_back({number, item, text});
                result.state.chapter_counter = number;
                store_text(kg, text, number, gateway, &result.warnings);
                persist(chapter_step(i, t));
            }
        }
        prev_item = det.items.back();
    }
    return result;
}

}  // namespace dome
