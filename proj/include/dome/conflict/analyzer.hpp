#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dome/conflict/grouping.hpp"
#include "dome/gateway/gateway.hpp"
#include "dome/memory/kg.hpp"

namespace dome {

struct ConflictVerdict {
    char result = 'N';  // 'Y' = conflict, 'N' = no conflict
    std::string explanation;
};

/// Parses the judge completion's result object ({"result": "Y"/"N", ...}).
/// Throws VerdictParseError when no Y/N verdict can be extracted.
ConflictVerdict parse_verdict(const std::string& completion);

struct GroupRecord {
    QuadrupleGroup group;
    std::string description;
    std::string verdict;  // "Y", "N" or "UNJUDGED"
    std::string explanation;
};

struct ConflictReport {
    int n_total = 0;                 // quadruples in scope
    std::vector<int> conflict_ids;   // distinct ids in Y-judged groups
    int m = 0;                       // |conflict_ids|
    double cr_percent = 0.0;         // 100 * m / n_total
    std::vector<GroupRecord> records;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

struct AnalyzerOptions {
    GroupingOptions grouping;
    bool include_premise = true;  // chapter-0 quadruples participate
    int chunk_size = 25;          // long groups are described/judged in chunks

    /// When set, routes judgment to this deterministic predicate (true =
    /// conflict) and skips the describe calls; the serialized member list
    /// stands in for the description.
    std::function<bool(const QuadrupleGroup&)> stub_judge;
};

/// The `--stub-judge` predicate: flags rule-2 groups (the identical fact
/// repeated across chapters).
bool default_stub_judge(const QuadrupleGroup& group);

/// Describes one group through its rule-specific prompt.
std::string describe_group(const QuadrupleGroup& group,
                           const std::vector<StoredQuadruple>& quadruples, Gateway& gateway);

/// Judges one description; one re-ask on an unparseable verdict, then
/// nullopt (the group becomes UNJUDGED).
std::optional<ConflictVerdict> judge_group(const std::string& description, int rule_id,
                                           Gateway& gateway);

/// Full analysis: group -> describe -> judge per group, then the conflict
/// rate over distinct member ids of Y groups.
ConflictReport analyze(const TemporalKG& kg, Gateway& gateway, const AnalyzerOptions& options = {});

}  // namespace dome
