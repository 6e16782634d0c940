#pragma once

#include <string>

namespace dome {

/// One extracted fact: (subject, action, object). Fields are trimmed and
/// non-empty; bare pronouns are rejected at parse time.
struct Triple {
    std::string subject;
    std::string action;
    std::string object;

    bool operator==(const Triple& other) const = default;

    /// "subject action object", display forms joined by single spaces.
    std::string verbalize() const;

    /// Case-folded, whitespace-normalized "s\x1fa\x1fo" key for dedup and
    /// grouping comparisons.
    std::string key() const;
};

/// A triple stamped with the chapter it came from (0 = premise).
struct Quadruple {
    Triple triple;
    int chapter = 0;

    bool operator==(const Quadruple& other) const = default;
};

/// A quadruple as held by the KG, with its stable insertion id.
struct StoredQuadruple {
    int id = 0;
    Triple triple;
    int chapter = 0;
};

/// True for the pronouns the extraction prompt forbids as triple fields
/// (he, she, it, they, that, there, those), case-insensitive.
bool is_banned_pronoun(const std::string& field);

/// True for the "someone" placeholder the extraction prompt substitutes for
/// unresolvable pronouns; such fields are stored but flagged.
bool is_placeholder_entity(const std::string& field);

}  // namespace dome
