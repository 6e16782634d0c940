#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dome {

/// A story premise: setting, characters, required storyline points.
struct StoryPremise {
    std::string setting;
    std::vector<std::pair<std::string, std::string>> characters;  // (name, description)
    std::vector<std::string> storyline;

    /// Setting text, one paragraph.
    std::string characters_text() const;  // "Name: description" lines
    std::string storyline_text() const;   // numbered lines

    /// Full premise rendered back to the input format (used when storing the
    /// premise into the KG at chapter 0).
    std::string to_text() const;
};

/// Parses the plain-text premise format with the exact section headers
/// `Setting`, `Character Introduction`, `Necessary Storyline`. Characters are
/// `Name: description` lines; storyline points are numbered lines, with
/// unnumbered continuation lines appended to the previous point.
/// Throws PremiseParseError with a line number on any violation.
StoryPremise parse_premise(const std::string& text);

StoryPremise load_premise_file(const std::string& path);

}  // namespace dome
