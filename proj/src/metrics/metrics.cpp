#include "dome/metrics/metrics.hpp"

#include <cctype>
#include <cmath>
#include <regex>
#include <unordered_map>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/text_util.hpp"

namespace dome {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

long word_count(std::string_view text) {
    long count = 0;
    bool in_word = false;
    for (char c : text) {
        const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++count;
        in_word = !space;
    }
    return count;
}

double ent_n_segmented(const std::vector<std::vector<std::string>>& segments, int n) {
    if (n < 1) throw InputError("n must be >= 1 for n-gram entropy");
    std::unordered_map<std::string, long> counts;
    long total = 0;
    for (const auto& tokens : segments) {
        if (tokens.size() < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
            std::string gram = tokens[i];
            for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
                gram += '\x1f';
                gram += tokens[i + j];
            }
            ++counts[gram];
            ++total;
        }
    }
    if (total == 0) return 0.0;
    double entropy = 0.0;
    for (const auto& [gram, count] : counts) {
        const double p = static_cast<double>(count) / static_cast<double>(total);
        entropy -= p * std::log(p);
    }
    return entropy;
}

double ent_n(const std::vector<std::string>& tokens, int n) {
    return ent_n_segmented({tokens}, n);
}

std::vector<std::string> story_segments(const std::string& story, bool split_chapters) {
    static const std::regex header_re(R"(^#\s*Chapter\s+\d+\s*$)");
    std::vector<std::string> segments;
    std::string current;
    bool saw_header = false;
    for (const std::string& line : split_lines(story)) {
        if (std::regex_match(line, header_re)) {
            saw_header = true;
            if (split_chapters) {
                if (!trim(current).empty()) segments.push_back(current);
                current.clear();
            }
            continue;  // headers are structure, not prose
        }
        current += line;
        current += '\n';
    }
    if (!trim(current).empty()) segments.push_back(current);
    if (segments.empty() && !saw_header) segments.push_back(story);
    return segments;
}

std::string MetricReport::to_json() const {
    nlohmann::json doc{{"word_num", word_num}, {"ent2", ent2}, {"ent_base", ent_base}};
    doc["cr_percent"] = cr_percent ? nlohmann::json(*cr_percent) : nlohmann::json(nullptr);
    return doc.dump(2) + "\n";
}

MetricReport evaluate_story(const std::string& story, const EvalOptions& options, TemporalKG* kg,
                            Gateway* gateway) {
    if (trim(story).empty()) throw InputError("story is empty");
    if (options.ent_base != "e" && options.ent_base != "2")
        throw InputError("entropy base must be \"e\" or \"2\"");

    MetricReport report;
    report.ent_base = options.ent_base;

    std::vector<std::vector<std::string>> token_segments;
    for (const std::string& segment : story_segments(story, options.split_chapters)) {
        report.word_num += word_count(segment);
        token_segments.push_back(tokenize(segment));
    }
    report.ent2 = ent_n_segmented(token_segments, 2);
    if (options.ent_base == "2") report.ent2 /= std::log(2.0);

    if (kg) {
        // With a stub judge the analyzer makes no provider calls, but the
        // reference is still required.
        if (!gateway) throw InputError("conflict rate needs a gateway");
        ConflictReport conflict = analyze(*kg, *gateway, options.analyzer);
        report.cr_percent = conflict.cr_percent;
    }
    return report;
}

}  // namespace dome
