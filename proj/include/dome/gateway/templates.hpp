#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace dome {

using Bindings = std::map<std::string, std::string>;

/// A prompt template: text with `{name}` placeholders. Placeholder names may
/// contain letters, digits, underscores and spaces; literal JSON braces in a
/// body never match because they contain quotes, colons or newlines.
struct PromptTemplate {
    std::string template_id;
    std::string body;
    std::set<std::string> required_bindings;

    /// Placeholder names found in the body, in order of first appearance.
    std::vector<std::string> placeholders() const;
};

/// Substitutes each placeholder with its binding, verbatim, in a single pass
/// (binding values are never re-scanned). Throws UnknownPlaceholderError for
/// a body placeholder missing from required_bindings, MissingBindingError for
/// a required binding absent from `bindings`.
std::string render_template(const PromptTemplate& tmpl, const Bindings& bindings);

class TemplateCatalog {
public:
    /// Throws InputError on duplicate ids or bodies with undeclared placeholders.
    void add(PromptTemplate tmpl);

    const PromptTemplate& get(const std::string& template_id) const;
    bool has(const std::string& template_id) const;
    std::vector<std::string> ids() const;

private:
    std::map<std::string, PromptTemplate> templates_;
};

/// Builds the full prompt catalog. The detailed-outline body is generated for
/// the configured expansion count and the rough-outline body for the theory's
/// stage count, since both prompts spell those numbers out.
TemplateCatalog build_default_catalog(int stage_count, int expansion_count);

namespace template_ids {
inline constexpr const char* kRoughOutline = "rough_outline";
inline constexpr const char* kDetailedOutline = "detailed_outline";
inline constexpr const char* kGenStory = "gen_story";
inline constexpr const char* kExtractTriples = "extract_triples";
inline constexpr const char* kRelevanceScore = "relevance_score";
std::string describe_rule(int rule_id);  // "describe_rule1".."describe_rule5"
std::string judge_rule(int rule_id);     // "judge_rule1".."judge_rule5"
}  // namespace template_ids

}  // namespace dome
