#include "dome/memory/extraction.hpp"

#include <regex>

#include "dome/errors.hpp"
#include "dome/text_util.hpp"

namespace dome {

namespace {

const std::regex kNumberedItem(R"(^\s*\d+\s*[.)])");

std::vector<std::string> split_fields(const std::string& content) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = content.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(trim(content.substr(pos)));
            break;
        }
        fields.push_back(trim(content.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

}  // namespace

ExtractionResult parse_triple_lines(const std::string& completion) {
    ExtractionResult result;
    int lineno = 0;
    for (const std::string& raw : split_lines(completion)) {
        ++lineno;
        if (!std::regex_search(raw, kNumberedItem)) continue;  // not a list item

        auto warn = [&](const std::string& why) {
            result.warnings.push_back("line " + std::to_string(lineno) + ": " + why + ": " +
                                      trim(raw));
        };

        const std::size_t open = raw.find('(');
        const std::size_t close = raw.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close <= open) {
            warn("unbalanced parentheses");
            continue;
        }
        std::vector<std::string> fields = split_fields(raw.substr(open + 1, close - open - 1));
        if (fields.size() != 3) {
            warn("expected 3 elements, got " + std::to_string(fields.size()));
            continue;
        }
        if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            warn("empty element");
            continue;
        }
        bool banned = false;
        for (const auto& f : fields) {
            if (is_banned_pronoun(f)) {
                warn("unresolved pronoun \"" + f + "\"");
                banned = true;
                break;
            }
        }
        if (banned) continue;
        for (const auto& f : fields)
            if (is_placeholder_entity(f))
                result.warnings.push_back("line " + std::to_string(lineno) +
                                          ": placeholder entity \"someone\" kept");
        result.triples.push_back({fields[0], fields[1], fields[2]});
    }
    return result;
}

ExtractionResult extract_triples(const std::string& text, Gateway& gateway,
                                 const std::string& purpose) {
    if (trim(text).empty()) throw InputError("cannot extract triples from empty text");
    ChatExchange exchange =
        gateway.complete(template_ids::kExtractTriples, {{"text", text}}, purpose);
    ExtractionResult result = parse_triple_lines(exchange.completion);
    if (result.triples.empty())
        throw ExtractionEmptyError("completion had " + std::to_string(result.warnings.size()) +
                                   " unparseable lines");
    return result;
}

}  // namespace dome
