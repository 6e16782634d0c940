#include "dome/outline/theory.hpp"

#include "dome/errors.hpp"

namespace dome {

std::string WritingTheory::to_text() const {
    std::string out = name + "\n";
    for (std::size_t i = 0; i < stages.size(); ++i)
        out += std::to_string(i + 1) + ". " + stages[i].first + ": " + stages[i].second + "\n";
    return out;
}

void WritingTheory::validate() const {
    if (stages.size() < 2) throw InputError("a writing theory needs at least two stages");
}

WritingTheory five_stage_theory() {
    return WritingTheory{
        "Five-stage novel writing theory",
        {
            {"Exposition",
             "Introduce the setting, the principal characters, and the situation the story "
             "opens on."},
            {"Rising Action",
             "Complications appear and escalate; conflicts between characters build toward the "
             "peak of tension."},
            {"Climax",
             "The decisive turning point where the central conflict reaches its highest "
             "tension."},
            {"Falling Action",
             "The consequences of the climax unfold and the tension begins to unwind."},
            {"Denouement or Resolution",
             "Conflicts are resolved and the characters settle into their new equilibrium."},
        }};
}

}  // namespace dome
