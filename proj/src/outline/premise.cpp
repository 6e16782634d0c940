#include "dome/outline/premise.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "dome/errors.hpp"
#include "dome/text_util.hpp"

namespace dome {

namespace {
constexpr const char* kSettingHeader = "Setting";
constexpr const char* kCharacterHeader = "Character Introduction";
constexpr const char* kStorylineHeader = "Necessary Storyline";
}  // namespace

std::string StoryPremise::characters_text() const {
    std::string out;
    for (const auto& [name, description] : characters) out += name + ": " + description + "\n";
    return out;
}

std::string StoryPremise::storyline_text() const {
    std::string out;
    for (std::size_t i = 0; i < storyline.size(); ++i)
        out += std::to_string(i + 1) + ". " + storyline[i] + "\n";
    return out;
}

std::string StoryPremise::to_text() const {
    return std::string(kSettingHeader) + "\n" + setting + "\n\n" + kCharacterHeader + "\n" +
           characters_text() + "\n" + kStorylineHeader + "\n" + storyline_text();
}

StoryPremise parse_premise(const std::string& text) {
    enum class Section { None, Setting, Characters, Storyline };
    Section section = Section::None;
    bool saw_setting = false, saw_characters = false, saw_storyline = false;

    StoryPremise premise;
    static const std::regex numbered(R"(^\s*(\d+)\s*[.)]\s*(.*)$)");

    const std::vector<std::string> lines = split_lines(text);
    int lineno = 0;
    for (const std::string& raw : lines) {
        ++lineno;
        const std::string line = trim(raw);
        if (line == kSettingHeader) { section = Section::Setting; saw_setting = true; continue; }
        if (line == kCharacterHeader) { section = Section::Characters; saw_characters = true; continue; }
        if (line == kStorylineHeader) { section = Section::Storyline; saw_storyline = true; continue; }
        if (line.empty()) continue;

        switch (section) {
            case Section::None:
                throw PremiseParseError(lineno, "text before the 'Setting' header");
            case Section::Setting:
                if (!premise.setting.empty()) premise.setting += " ";
                premise.setting += line;
                break;
            case Section::Characters: {
                const std::size_t colon = line.find(':');
                if (colon == std::string::npos || colon == 0)
                    throw PremiseParseError(lineno,
                                            "character line is not 'Name: description'");
                premise.characters.emplace_back(trim(line.substr(0, colon)),
                                                trim(line.substr(colon + 1)));
                break;
            }
            case Section::Storyline: {
                std::smatch m;
                if (std::regex_match(line, m, numbered)) {
                    premise.storyline.push_back(trim(m[2].str()));
                } else if (!premise.storyline.empty()) {
                    premise.storyline.back() += " " + line;  // continuation
                } else {
                    throw PremiseParseError(lineno, "storyline must start with a numbered point");
                }
                break;
            }
        }
    }

    if (!saw_setting) throw PremiseParseError(lineno, "missing section header 'Setting'");
    if (!saw_characters)
        throw PremiseParseError(lineno, "missing section header 'Character Introduction'");
    if (!saw_storyline)
        throw PremiseParseError(lineno, "missing section header 'Necessary Storyline'");
    if (premise.setting.empty()) throw PremiseParseError(lineno, "empty setting");
    if (premise.characters.empty()) throw PremiseParseError(lineno, "no characters");
    if (premise.storyline.empty()) throw PremiseParseError(lineno, "no storyline points");
    return premise;
}

StoryPremise load_premise_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open premise file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_premise(buf.str());
}

}  // namespace dome
