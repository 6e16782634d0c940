#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace dome {

/// FNV-1a, 64 bit. Stable across platforms and runs, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull);

std::string to_hex(std::uint64_t value);

/// Digest of a binding map: hash of the (name, value) pairs in name order,
/// so fixtures are insensitive to binding insertion order.
std::string binding_digest(const std::map<std::string, std::string>& bindings);

/// Digest of a single text (used for embed-call trace records).
std::string text_digest(std::string_view text);

}  // namespace dome
