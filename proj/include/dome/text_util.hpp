#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dome {

std::string trim(std::string_view s);

/// Lowercase (ASCII) copy.
std::string to_lower(std::string_view s);

/// Collapse interior whitespace runs to single spaces and trim the ends.
std::string normalize_whitespace(std::string_view s);

/// Canonical form used for entity/action matching: whitespace-normalized and
/// case-folded. Display forms are kept separately.
std::string normalize_key(std::string_view s);

std::vector<std::string> split_lines(std::string_view text);

bool starts_with(std::string_view s, std::string_view prefix);

/// True if `needle` occurs in `haystack`.
bool contains(std::string_view haystack, std::string_view needle);

}  // namespace dome
