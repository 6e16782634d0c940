#include "dome/memory/triple.hpp"

#include <array>

#include "dome/text_util.hpp"

namespace dome {

std::string Triple::verbalize() const {
    return subject + " " + action + " " + object;
}

std::string Triple::key() const {
    return normalize_key(subject) + '\x1f' + normalize_key(action) + '\x1f' + normalize_key(object);
}

bool is_banned_pronoun(const std::string& field) {
    static const std::array<const char*, 7> banned = {"he",   "she",  "it",   "they",
                                                      "that", "there", "those"};
    const std::string k = normalize_key(field);
    for (const char* p : banned)
        if (k == p) return true;
    return false;
}

bool is_placeholder_entity(const std::string& field) {
    return normalize_key(field) == "someone";
}

}  // namespace dome
