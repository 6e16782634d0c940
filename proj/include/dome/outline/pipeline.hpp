#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dome/gateway/gateway.hpp"
#include "dome/memory/kg.hpp"
#include "dome/outline/manifest.hpp"
#include "dome/outline/outline.hpp"
#include "dome/outline/premise.hpp"
#include "dome/outline/theory.hpp"

namespace dome {

struct PipelineOptions {
    int expansion_count = 3;  // M: chapter outlines per stage
    double threshold = 0.75;  // entity-retrieval cosine threshold
    int top_k = 10;           // relevant-context size
};

struct ChapterRecord {
    int number = 0;
    std::string outline;
    std::string text;
};

struct StoryState {
    std::vector<ChapterRecord> chapters;
    int chapter_counter = 0;
};

struct PipelineResult {
    RoughOutline rough;
    std::vector<DetailedOutline> detailed;
    StoryState state;
    std::vector<std::string> warnings;
};

/// Artifact files of one generation run, all under a single output
/// directory. Writes go through a temp-file + rename.
class RunStore {
public:
    explicit RunStore(std::string out_dir);

    std::string manifest_path() const;
    std::string outline_path() const;
    std::string story_path() const;
    std::string kg_path() const;
    std::string embedding_cache_path() const;
    std::string ledger_path() const;
    std::string trace_path() const;
    const std::string& dir() const { return out_dir_; }

    bool manifest_exists() const;

    void write_text(const std::string& path, const std::string& content) const;

    /// All artifact paths a completed run must leave behind.
    std::vector<std::string> expected_artifacts() const;

private:
    std::string out_dir_;
};

/// "# Chapter N" delimited document.
std::string render_story_document(const StoryState& state);
std::vector<ChapterRecord> parse_story_document(const std::string& text);

/// outline.json: stages with storyline text and nested chapter outlines.
std::string render_outline_document(const RoughOutline& rough,
                                    const std::vector<DetailedOutline>& detailed);
void parse_outline_document(const std::string& text, RoughOutline& rough,
                            std::vector<DetailedOutline>& detailed);

/// Runs the full generation loop: store the premise at chapter 0, plan the
/// rough outline once, then per stage expand a detailed outline and write its
/// chapters, querying the KG before every generation call and storing every
/// chapter back. With a RunStore, each completed step persists artifacts and
/// a manifest marker, and a rerun resumes at the first incomplete step
/// without re-calling completed ones.
PipelineResult run_pipeline(const StoryPremise& premise, const WritingTheory& theory,
                            const PipelineOptions& options, Gateway& gateway, TemporalKG& kg,
                            RunStore* store = nullptr,
                            const std::map<std::string, std::string>& config_snapshot = {});

}  // namespace dome
