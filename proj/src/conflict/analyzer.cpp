#include "dome/conflict/analyzer.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <set>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/text_util.hpp"

namespace dome {

using nlohmann::json;

namespace {

/// First balanced {...} span in the text, if any.
std::optional<std::string> first_json_object(const std::string& text) {
    const std::size_t open = text.find('{');
    if (open == std::string::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
        } else if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return text.substr(open, i - open + 1);
        }
    }
    return std::nullopt;
}

}  // namespace

ConflictVerdict parse_verdict(const std::string& completion) {
    if (auto object_text = first_json_object(completion)) {
        try {
            json object = json::parse(*object_text);
            if (object.contains("result") && object["result"].is_string()) {
                const std::string value = trim(object["result"].get<std::string>());
                if (!value.empty()) {
                    const char c = static_cast<char>(std::toupper(
                        static_cast<unsigned char>(value[0])));
                    if (c == 'Y' || c == 'N')
                        return {c, object.value("explanation", std::string())};
                }
            }
        } catch (const json::exception&) {
            // fall through to the regex path
        }
    }
    static const std::regex result_re(R"("result"\s*[::]\s*"?\s*([YyNn]))");
    std::smatch m;
    if (std::regex_search(completion, m, result_re)) {
        const char c =
            static_cast<char>(std::toupper(static_cast<unsigned char>(m[1].str()[0])));
        return {c, ""};
    }
    throw VerdictParseError("no Y/N result in: " + trim(completion).substr(0, 120));
}

bool default_stub_judge(const QuadrupleGroup& group) { return group.rule_id == 2; }

std::string describe_group(const QuadrupleGroup& group,
                           const std::vector<StoredQuadruple>& quadruples, Gateway& gateway) {
    ChatExchange exchange = gateway.complete(
        template_ids::describe_rule(group.rule_id),
        {{"inlist", serialize_group_members(group, quadruples)}}, "describe");
    return trim(exchange.completion);
}

std::optional<ConflictVerdict> judge_group(const std::string& description, int rule_id,
                                           Gateway& gateway) {
    if (trim(description).empty()) throw InputError("cannot judge an empty description");
    for (int attempt = 0; attempt < 2; ++attempt) {
        ChatExchange exchange = gateway.complete(template_ids::judge_rule(rule_id),
                                                 {{"description", description}}, "judge");
        try {
            return parse_verdict(exchange.completion);
        } catch (const VerdictParseError&) {
            // one re-ask, then the caller records the group as unjudged
        }
    }
    return std::nullopt;
}

std::string ConflictReport::to_json() const {
    char display[16];
    std::snprintf(display, sizeof(display), "%.2f", cr_percent);
    json groups = json::array();
    for (const GroupRecord& record : records) {
        groups.push_back(json{{"rule_id", record.group.rule_id},
                              {"member_ids", record.group.member_ids},
                              {"key", record.group.key},
                              {"description", record.description},
                              {"verdict", record.verdict},
                              {"explanation", record.explanation}});
    }
    json doc{{"n_total", n_total},
             {"m", m},
             {"cr_percent", std::round(cr_percent * 100.0) / 100.0},
             {"cr_display", display},
             {"conflict_ids", conflict_ids},
             {"groups", groups},
             {"warnings", warnings}};
    return doc.dump(2) + "\n";
}

ConflictReport analyze(const TemporalKG& kg, Gateway& gateway, const AnalyzerOptions& options) {
    if (kg.empty()) throw InputError("analyzer requires a non-empty KG");
    std::vector<StoredQuadruple> scope;
    for (const StoredQuadruple& q : kg.quadruples())
        if (options.include_premise || q.chapter > 0) scope.push_back(q);
    if (scope.empty()) throw InputError("no quadruples in scope for analysis");

    ConflictReport report;
    report.n_total = static_cast<int>(scope.size());

    std::set<int> conflict_ids;
    for (const QuadrupleGroup& group : group_quadruples(scope, options.grouping)) {
        GroupRecord record;
        record.group = group;

        if (options.stub_judge) {
            record.description = serialize_group_members(group, scope);
            const bool flagged = options.stub_judge(group);
            record.verdict = flagged ? "Y" : "N";
            record.explanation = "stub judgment";
        } else {
            // Long groups go through description/judgment in chunks; any
            // flagged chunk flags the whole group.
            std::vector<QuadrupleGroup> chunks;
            const int chunk_size = std::max(options.chunk_size, 2);
            for (std::size_t from = 0; from < group.member_ids.size();
                 from += static_cast<std::size_t>(chunk_size)) {
                QuadrupleGroup chunk = group;
                chunk.member_ids.assign(
                    group.member_ids.begin() + static_cast<long>(from),
                    group.member_ids.begin() +
                        static_cast<long>(std::min(from + static_cast<std::size_t>(chunk_size),
                                                   group.member_ids.size())));
                chunks.push_back(std::move(chunk));
            }

            bool any_conflict = false, any_unjudged = false;
            for (std::size_t c = 0; c < chunks.size(); ++c) {
                const std::string description = describe_group(chunks[c], scope, gateway);
                if (!record.description.empty()) record.description += " / ";
                record.description += description;
                std::optional<ConflictVerdict> verdict =
                    judge_group(description, group.rule_id, gateway);
                if (!verdict) {
                    any_unjudged = true;
                    report.warnings.push_back("group (rule " + std::to_string(group.rule_id) +
                                              ", first id " +
                                              std::to_string(group.member_ids.front()) +
                                              ") left unjudged after retry");
                    continue;
                }
                if (verdict->result == 'Y') any_conflict = true;
                if (!verdict->explanation.empty()) {
                    if (!record.explanation.empty()) record.explanation += "; ";
                    record.explanation += verdict->explanation;
                }
            }
            if (any_conflict)
                record.verdict = "Y";
            else if (any_unjudged)
                record.verdict = "UNJUDGED";
            else
                record.verdict = "N";
        }

        if (record.verdict == "Y")
            conflict_ids.insert(group.member_ids.begin(), group.member_ids.end());
        report.records.push_back(std::move(record));
    }

    report.conflict_ids.assign(conflict_ids.begin(), conflict_ids.end());
    report.m = static_cast<int>(report.conflict_ids.size());
    report.cr_percent = 100.0 * report.m / report.n_total;
    return report;
}

}  // namespace dome
