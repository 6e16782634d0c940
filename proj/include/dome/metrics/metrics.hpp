#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dome/conflict/analyzer.hpp"
#include "dome/gateway/gateway.hpp"
#include "dome/memory/kg.hpp"

namespace dome {

/// Lowercases, maps punctuation to whitespace, splits on whitespace runs.
std::vector<std::string> tokenize(std::string_view text);

/// Count of maximal non-whitespace runs (no normalization).
long word_count(std::string_view text);

/// n-gram entropy in nats over one token sequence:
/// -sum (F(g)/T) * ln(F(g)/T) over all contiguous n-grams. T = 0 gives 0.
double ent_n(const std::vector<std::string>& tokens, int n);

/// Same, over several segments; n-grams never cross a segment boundary.
double ent_n_segmented(const std::vector<std::vector<std::string>>& segments, int n);

struct MetricReport {
    long word_num = 0;
    double ent2 = 0.0;
    std::string ent_base = "e";  // "e" or "2"
    std::optional<double> cr_percent;

    std::string to_json() const;
};

struct EvalOptions {
    std::string ent_base = "e";
    /// Split the story on "# Chapter N" headers so bigrams do not cross
    /// chapter boundaries; headers are stripped either way.
    bool split_chapters = true;
    AnalyzerOptions analyzer;
};

/// Splits a story document into chapter bodies ("# Chapter N" headers
/// stripped). A document without headers is a single segment.
std::vector<std::string> story_segments(const std::string& story, bool split_chapters);

/// word_num and ent2 always; cr_percent only when a KG is supplied (then the
/// analyzer runs through `gateway`, or the stub judge from options).
MetricReport evaluate_story(const std::string& story, const EvalOptions& options,
                            TemporalKG* kg = nullptr, Gateway* gateway = nullptr);

}  // namespace dome
