#pragma once

#include <string>
#include <vector>

#include "dome/gateway/gateway.hpp"
#include "dome/memory/triple.hpp"

namespace dome {

struct ExtractionResult {
    std::vector<Triple> triples;
    std::vector<std::string> warnings;
};

/// Parses a numbered triple list out of a completion: lines of the form
/// `1.(subject, action, object)`. Lines that do not yield exactly three
/// non-empty fields are skipped with a warning, never repaired. Fields that
/// are bare pronouns are likewise skipped; "someone" placeholders are kept
/// but flagged.
ExtractionResult parse_triple_lines(const std::string& completion);

/// Runs the extraction prompt on `text` and parses the completion.
/// Throws ExtractionEmptyError when a non-empty completion yields zero
/// triples. `purpose` tags the trace record ("kg_construction" for stores,
/// "query" for query-side extraction).
ExtractionResult extract_triples(const std::string& text, Gateway& gateway,
                                 const std::string& purpose = "");

}  // namespace dome
