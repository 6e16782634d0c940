#include "dome/outline/outline.hpp"

#include <regex>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/text_util.hpp"

namespace dome {

using nlohmann::json;

namespace {

/// Content of the first fenced ``` block, or nullopt.
std::optional<std::string> first_fenced_block(const std::string& text) {
    const std::size_t open = text.find("```");
    if (open == std::string::npos) return std::nullopt;
    std::size_t content_start = text.find('\n', open);
    if (content_start == std::string::npos) return std::nullopt;
    ++content_start;
    const std::size_t close = text.find("```", content_start);
    if (close == std::string::npos) return std::nullopt;
    return text.substr(content_start, close - content_start);
}

std::optional<std::string> first_string_value(const json& object,
                                              std::initializer_list<const char*> keys) {
    for (const char* key : keys)
        if (object.contains(key) && object[key].is_string()) return object[key].get<std::string>();
    return std::nullopt;
}

}  // namespace

RoughOutlineParse parse_rough_outline(const std::string& completion,
                                      const std::vector<std::string>& stage_labels) {
    const auto block = first_fenced_block(completion);
    if (!block) throw OutlineParseError("no fenced code block in rough-outline completion");

    json parsed;
    try {
        parsed = json::parse(*block);
    } catch (const json::exception& e) {
        throw OutlineParseError(std::string("fenced block is not valid JSON: ") + e.what());
    }
    if (!parsed.is_array()) throw OutlineParseError("fenced block is not a JSON list");
    if (parsed.size() != stage_labels.size())
        throw OutlineParseError("expected " + std::to_string(stage_labels.size()) +
                                " stage entries, got " + std::to_string(parsed.size()));

    RoughOutlineParse result;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        const json& element = parsed[i];
        std::string model_label;
        std::string text;
        if (element.is_object()) {
            if (auto label = first_string_value(element, {"stage", "Stage", "label", "Label"}))
                model_label = *label;
            if (auto body = first_string_value(
                    element, {"storyline", "Storyline", "outline", "content", "text",
                              "description"}))
                text = *body;
            // single-key form: {"Exposition": "..."}
            if (text.empty() && element.size() == 1 && element.begin().value().is_string()) {
                model_label = element.begin().key();
                text = element.begin().value().get<std::string>();
            }
        } else if (element.is_string()) {
            text = element.get<std::string>();
        }
        if (trim(text).empty())
            throw OutlineParseError("stage entry " + std::to_string(i + 1) +
                                    " has no storyline text");
        // Entries are matched to theory stages by order; a divergent label is
        // only worth a warning (models paraphrase them freely).
        if (!model_label.empty() &&
            normalize_key(model_label) != normalize_key(stage_labels[i]))
            result.warnings.push_back("stage " + std::to_string(i + 1) + " labeled \"" +
                                      model_label + "\", expected \"" + stage_labels[i] + "\"");
        result.entries.push_back({stage_labels[i], trim(text)});
    }
    return result;
}

DetailedOutlineParse parse_detailed_outline(const std::string& completion, int expected_count) {
    static const std::regex item_re(R"(^\s*[-*]?\s*Chapter\s+Outline\s*(\d+)\s*[::]\s*(.*)$)",
                                    std::regex::icase);
    DetailedOutlineParse result;
    std::vector<int> printed_numbers;
    bool in_item = false;
    for (const std::string& line : split_lines(completion)) {
        std::smatch m;
        if (std::regex_match(line, m, item_re)) {
            printed_numbers.push_back(std::stoi(m[1].str()));
            result.items.push_back(trim(m[2].str()));
            in_item = true;
        } else if (in_item) {
            const std::string cont = trim(line);
            if (cont.empty()) {
                in_item = false;
            } else {
                if (!result.items.back().empty()) result.items.back() += " ";
                result.items.back() += cont;
            }
        }
    }
    for (std::size_t i = 0; i < printed_numbers.size(); ++i)
        if (printed_numbers[i] != static_cast<int>(i) + 1) {
            result.warnings.push_back("chapter outline numbering is off (item " +
                                      std::to_string(i + 1) + " printed as " +
                                      std::to_string(printed_numbers[i]) + ")");
            break;
        }
    for (const auto& item : result.items)
        if (item.empty()) throw OutlineParseError("empty chapter outline item");

    const auto expected = static_cast<std::size_t>(expected_count);
    if (result.items.size() < expected)
        throw OutlineParseError("expected " + std::to_string(expected_count) +
                                " chapter outlines, got " + std::to_string(result.items.size()));
    if (result.items.size() > expected) {
        result.warnings.push_back("completion had " + std::to_string(result.items.size()) +
                                  " chapter outlines; truncated to " +
                                  std::to_string(expected_count));
        result.items.resize(expected);
    }
    return result;
}

std::string parse_story_completion(const std::string& completion) {
    static const std::regex marker_re(R"(^\s*-?\s*Story\s*[::]\s*)", std::regex::icase);
    std::string body = trim(completion);
    std::smatch m;
    if (std::regex_search(body, m, marker_re) && m.position() == 0)
        body = trim(body.substr(static_cast<std::size_t>(m.length())));
    if (body.empty()) throw EmptyCompletionError();
    return body;
}

RoughOutline plan_rough_outline(const StoryPremise& premise, const WritingTheory& theory,
                                Gateway& gateway, std::vector<std::string>* warnings) {
    theory.validate();
    const Bindings bindings{{"theory", theory.to_text()},
                            {"setting", premise.setting},
                            {"character", premise.characters_text()},
                            {"outline", premise.storyline_text()}};
    std::vector<std::string> labels;
    for (const auto& [label, _] : theory.stages) labels.push_back(label);

    for (int attempt = 0;; ++attempt) {
        ChatExchange exchange = gateway.complete(template_ids::kRoughOutline, bindings, "plan");
        try {
            RoughOutlineParse parsed = parse_rough_outline(exchange.completion, labels);
            if (warnings)
                warnings->insert(warnings->end(), parsed.warnings.begin(), parsed.warnings.end());
            return RoughOutline{std::move(parsed.entries)};
        } catch (const OutlineParseError&) {
            if (attempt >= 1) throw;  // one re-ask, then fail
        }
    }
}

DetailedOutline plan_detailed_outline(const RoughOutline::Entry& stage_entry, int stage_index,
                                      const std::optional<std::string>& prev_last_item,
                                      const RelevantContext& context, int expansion_count,
                                      Gateway& gateway, std::vector<std::string>* warnings) {
    const Bindings bindings{{"volume outline", stage_entry.text},
                            {"stage", stage_entry.stage_label},
                            {"last chapter", prev_last_item.value_or(kNoPreviousChapterMarker)},
                            {"history", context.joined()}};
    for (int attempt = 0;; ++attempt) {
        ChatExchange exchange = gateway.complete(template_ids::kDetailedOutline, bindings, "plan");
        try {
            DetailedOutlineParse parsed =
                parse_detailed_outline(exchange.completion, expansion_count);
            if (warnings)
                warnings->insert(warnings->end(), parsed.warnings.begin(), parsed.warnings.end());
            return DetailedOutline{stage_index, std::move(parsed.items)};
        } catch (const OutlineParseError&) {
            if (attempt >= 1) throw;
        }
    }
}

std::string write_chapter(const std::string& outline_item, const RelevantContext& context,
                          Gateway& gateway) {
    if (trim(outline_item).empty()) throw InputError("chapter outline item is empty");
    ChatExchange exchange = gateway.complete(
        template_ids::kGenStory, {{"outline", outline_item}, {"history", context.joined()}},
        "write");
    return parse_story_completion(exchange.completion);
}

}  // namespace dome
