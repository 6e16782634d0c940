#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dome {

/// A writing theory: the ordered narrative stages injected into the
/// rough-outline prompt. The default is the classic five-stage arc.
struct WritingTheory {
    std::string name;
    std::vector<std::pair<std::string, std::string>> stages;  // (label, description)

    std::size_t stage_count() const { return stages.size(); }

    /// Rendering bound to the {theory} placeholder: name plus numbered
    /// "label: description" lines.
    std::string to_text() const;

    /// Throws InputError unless there are at least two stages.
    void validate() const;
};

WritingTheory five_stage_theory();

}  // namespace dome
