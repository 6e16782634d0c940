#pragma once

#include <string>
#include <vector>

#include "dome/memory/triple.hpp"

namespace dome {

/// A set of potentially conflicting quadruples found by one structural rule:
///   rule 1: same (subject, action), objects vary
///   rule 2: same (subject, action, object), chapters vary
///   rule 3: same (action, object), subjects vary
///   rule 4: same (subject, object), actions vary
///   rule 5: same subject entity, attributive statements varying over chapters
/// Members are sorted by (chapter, id).
struct QuadrupleGroup {
    int rule_id = 0;
    std::vector<int> member_ids;
    std::vector<std::string> key;  // normalized key values for the rule
};

struct GroupingOptions {
    /// With consumption (the default), rules are applied most-specific first
    /// (2, 1, 3, 4, 5) and a quadruple that joined a group is excluded from
    /// later rules, so no id appears twice. Without consumption every rule
    /// sees every quadruple and groups may overlap.
    bool consume = true;

    /// Actions that make a quadruple an attribute statement for rule 5.
    std::vector<std::string> attributive_actions = {"is",    "are",           "was",
                                                    "characterized by", "has attribute",
                                                    "seems", "becomes"};
};

/// Groups the given quadruples by the five rules. Emission order is
/// deterministic: rule application order, then ascending first-member id.
/// Singleton keys and key sets that never satisfy the rule's
/// "must vary" element produce nothing.
std::vector<QuadrupleGroup> group_quadruples(const std::vector<StoredQuadruple>& quadruples,
                                             const GroupingOptions& options = {});

/// Serialized member list bound into the describe prompt:
/// rules 1-4:  [("s", "a", "o", chapter), ...]
/// rule 5:     [['attribute subject',chapter],...]
std::string serialize_group_members(const QuadrupleGroup& group,
                                    const std::vector<StoredQuadruple>& quadruples);

}  // namespace dome
