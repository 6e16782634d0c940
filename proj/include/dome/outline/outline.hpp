#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dome/gateway/gateway.hpp"
#include "dome/memory/retrieval.hpp"
#include "dome/outline/premise.hpp"
#include "dome/outline/theory.hpp"

namespace dome {

/// Stage-level storyline entries, one per theory stage, in theory order.
struct RoughOutline {
    struct Entry {
        std::string stage_label;
        std::string text;
    };
    std::vector<Entry> entries;
};

/// The chapter outlines a rough-outline stage expands into.
struct DetailedOutline {
    int stage_index = 0;  // 1-based
    std::vector<std::string> items;
};

/// Binding value used for the previous-chapter slot in the first stage.
inline constexpr const char* kNoPreviousChapterMarker = "(no previous chapter)";

struct RoughOutlineParse {
    std::vector<RoughOutline::Entry> entries;
    std::vector<std::string> warnings;
};

/// Parses a rough-outline completion: the first fenced code block must hold a
/// JSON list of `expected_count` stage objects. Entries are matched to theory
/// stages by order; a label that disagrees with the theory yields a warning,
/// not an error. Throws OutlineParseError when the fenced block is missing,
/// unparseable, or has the wrong cardinality.
RoughOutlineParse parse_rough_outline(const std::string& completion,
                                      const std::vector<std::string>& stage_labels);

struct DetailedOutlineParse {
    std::vector<std::string> items;
    std::vector<std::string> warnings;
};

/// Parses "- Chapter Outline n:" items; continuation lines attach to the
/// preceding item. Fewer than `expected_count` items is an OutlineParseError;
/// extra items are truncated with a warning.
DetailedOutlineParse parse_detailed_outline(const std::string& completion, int expected_count);

/// Strips a leading "- Story:" marker and surrounding whitespace. Throws
/// EmptyCompletionError when nothing remains.
std::string parse_story_completion(const std::string& completion);

// ---------------------------------------------------------------------------
// Generation calls (prompt + parse + one re-ask retry on parse failure)
// ---------------------------------------------------------------------------

RoughOutline plan_rough_outline(const StoryPremise& premise, const WritingTheory& theory,
                                Gateway& gateway, std::vector<std::string>* warnings = nullptr);

DetailedOutline plan_detailed_outline(const RoughOutline::Entry& stage_entry, int stage_index,
                                      const std::optional<std::string>& prev_last_item,
                                      const RelevantContext& context, int expansion_count,
                                      Gateway& gateway,
                                      std::vector<std::string>* warnings = nullptr);

std::string write_chapter(const std::string& outline_item, const RelevantContext& context,
                          Gateway& gateway);

}  // namespace dome
