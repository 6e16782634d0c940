#include "dome/gateway/templates.hpp"

#include <regex>

#include "dome/errors.hpp"

namespace dome {

namespace {

// A placeholder is {name} on a single line; names are made of letters, digits,
// underscores and interior spaces. Literal JSON braces in prompt bodies never
// match (they contain quotes, colons or newlines).
const std::regex& placeholder_re() {
    static const std::regex re(R"(\{([A-Za-z0-9_](?:[A-Za-z0-9_ ]*[A-Za-z0-9_])?)\})");
    return re;
}

}  // namespace

std::vector<std::string> PromptTemplate::placeholders() const {
    std::vector<std::string> names;
    auto begin = std::sregex_iterator(body.begin(), body.end(), placeholder_re());
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        std::string name = (*it)[1].str();
        bool seen = false;
        for (const auto& n : names)
            if (n == name) { seen = true; break; }
        if (!seen) names.push_back(std::move(name));
    }
    return names;
}

std::string render_template(const PromptTemplate& tmpl, const Bindings& bindings) {
    for (const auto& name : tmpl.placeholders())
        if (!tmpl.required_bindings.count(name)) throw UnknownPlaceholderError(name);
    for (const auto& name : tmpl.required_bindings)
        if (!bindings.count(name)) throw MissingBindingError(name);

    // Single left-to-right pass; binding values are inserted verbatim and
    // never re-scanned.
    std::string out;
    out.reserve(tmpl.body.size());
    auto begin = std::sregex_iterator(tmpl.body.begin(), tmpl.body.end(), placeholder_re());
    std::size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        out.append(tmpl.body, last, static_cast<std::size_t>(m.position()) - last);
        out.append(bindings.at(m[1].str()));
        last = static_cast<std::size_t>(m.position() + m.length());
    }
    out.append(tmpl.body, last, tmpl.body.size() - last);
    return out;
}

void TemplateCatalog::add(PromptTemplate tmpl) {
    if (templates_.count(tmpl.template_id))
        throw InputError("duplicate template id: " + tmpl.template_id);
    for (const auto& name : tmpl.placeholders())
        if (!tmpl.required_bindings.count(name))
            throw InputError("template " + tmpl.template_id + " has undeclared placeholder {" +
                             name + "}");
    templates_.emplace(tmpl.template_id, std::move(tmpl));
}

const PromptTemplate& TemplateCatalog::get(const std::string& template_id) const {
    auto it = templates_.find(template_id);
    if (it == templates_.end()) throw InputError("unknown template id: " + template_id);
    return it->second;
}

bool TemplateCatalog::has(const std::string& template_id) const {
    return templates_.count(template_id) > 0;
}

std::vector<std::string> TemplateCatalog::ids() const {
    std::vector<std::string> out;
    out.reserve(templates_.size());
    for (const auto& [id, _] : templates_) out.push_back(id);
    return out;
}

namespace template_ids {
std::string describe_rule(int rule_id) { return "describe_rule" + std::to_string(rule_id); }
std::string judge_rule(int rule_id) { return "judge_rule" + std::to_string(rule_id); }
}  // namespace template_ids

namespace {

std::string rough_outline_body(int stage_count) {
    std::string n = std::to_string(stage_count);
    return
        "Based on the given novel story writing theory, the given novel setting, the given "
        "character introduction, and the given novel outline, plan the storyline of an episodic "
        "long story.\n"
        "The storyline contains the same number of parts as the theory.\n"
        "The storyline you plan needs to be labeled concerning the description of each stage "
        "according to the storyline planning theory.\n"
        "\n"
        "story writing theory:{theory}\n"
        "Novel setting:{setting}\n"
        "Character introduction:{character}\n"
        "The general story:{outline}\n"
        "\n"
        "The output should be a markdown code snippet formatted in the following schema, "
        "including the leading and trailing \"```json\" and \"```\":\n"
        "\n"
        "```json\n"
        "[\n"
        "    {\"stage\": \"<label of the stage, taken from the theory>\", \"storyline\": "
        "\"<the storyline you plan for this stage>\"},\n"
        "    ...\n"
        "]\n"
        "```\n"
        "\n"
        "Separate the " + n + " json objects with commas.\n"
        "Contain all the json objects into a list object.\n"
        "Nothing but your storyline should be contained in the answer.\n"
        "Your storyline:\n";
}

std::string detailed_outline_body(int expansion_count) {
    std::string m = std::to_string(expansion_count);
    std::string format_lines;
    for (int t = 1; t <= expansion_count; ++t)
        format_lines += "- Chapter Outline " + std::to_string(t) + ":\n";
    return
        "Your task is to generate chapter outlines based on the given volume of the novel.\n"
        "Below are some steps to help you complete the task:\n"
        "\n"
        "1. The given volume expands into exactly " + m + " chapters. Based on the content of "
        "the volume, determine the content for an outline of each chapter. The outline between "
        "chapters is not repeated.\n"
        "2. The generated chapter outline should refer to the relevant historical information "
        "and the previous chapter outline to make the outline consistent with the previous text "
        "in description and plot development.\n"
        "\n"
        "## Input\n"
        "the current volume outline:{volume outline}\n"
        "the stage of the volume:{stage}\n"
        "the outline of the previous chapter:{last chapter}\n"
        "the related background:{history}\n"
        "\n"
        "## Output Format\n"
        "Please follow the output format strictly to ensure the consistency of the generated "
        "detailed chapter outline.\n"
        "Nothing but only the " + m + " chapter outlines should be included in the output.\n"
        "Following the format below:\n" +
        format_lines +
        "\n"
        "Your result:\n";
}

constexpr const char* kGenStoryBody = R"__(Your task is to write a partial story based on the given chapter outline and the related historical information.
The story should be consistent with the chapter outline and coherent with the related historical information.
The content of the story should be detailed and vivid, including detailed plot development, psychological description, environmental description, etc.

## Input
the chapter outline:{outline}
the related background:{history}

## Output Format
Nothing but only the generated content, which is composed by a series of sentences, should be included in the output.
Strictly follow the format below:
- Story:
Your generated content:
)__";

constexpr const char* kExtractTriplesBody = R"__(Your task is summarizing in the form of triples according to the given text.

There is an example:
given text:
Lily lived in a quaint rural town, surrounded by lush greenery and rolling hills. Despite the tranquility of her surroundings, she often felt restless and yearned for adventure. One day, while exploring the dense jungle that lay beyond her town, Lily stumbled upon an ancient diary in her grandmother's attic. The pages were yellowed with age, and the ink had faded over time, but Lily could still make out the words written within.
output triples:
1.(Lily, lives in, quaint rural town)
2.(quaint rural town, characterized by, lush greenery)
3.(quaint rural town, characterized by, rolling hills)
4.(Lily, feels, restlessness)
5.(Lily, yearns for, adventure)
6.(dense jungle, located beyond, quaint rural town)
7.(Lily, discovers, ancient diary)
8.(ancient diary, found in, grandmother's attic)
9.(ancient diary, characterized by, yellowed pages)
10.(ancient diary, characterized by, faded ink)

For each sentence delimited by '.' in the given text, you should follow these steps to extract the triples:
step1:Find all the verbs without any modifiers in the sentence.
step2:Find the subject and object without any modifiers for each verb from the step 1.
If the subject or object of the verb is a pronoun like he, she, it, there, that, they, or those, replacing them with what they refer to by context.
If you still can not determine what the pronoun refers to, use someone to replace it.
Make sure every element in triple is clear when understood alone, that means there is no pronoun in triples.
For a subject or object modified by a clause, treat the clause as a new sentence and follow the previous steps to extract a new triple for it.
step3:Normalize the above results in triples which are in the form of (subject, verb, object) for each verb and number them by 1.,2.,3. and so on.
Make sure there are only 3 elements in each triple. More or less elements are not acceptable.
Make sure the triples are in the correct form which is the same as the given output example and the elements are clear and understandable.

The given text:{text}
Your result:
)__";

constexpr const char* kRelevanceScoreBody = R"__(Scoring the Degree of correlation between the given outline and the given knowledge using the scoring criteria described below.
Points are accumulated based on the satisfaction of each criterion:

- Add 1 point if the knowledge involves the semantically same or similar subject indicated in the partial outline or add 0 point if the given knowledge and outline do not satisfy this criterion. Attention : Helen Keller and Helen refer to the same subject
- Add 1 point if the knowledge involves the semantically same or similar object indicated in the partial outline or add 0 point if the given knowledge and outline do not satisfy this criterion.
- Add 1 point if the knowledge involves the semantically same or similar action indicated in the partial outline or add 0 point if the given knowledge and outline do not satisfy this criterion. Attention : eliminate and erase refers to the same action
- Add 1 point if the knowledge and outline refer to the semantically same or similar event or add 0 point if the given knowledge and outline do not satisfy this criterion.
- Add 1 point if the knowledge can be potentially used when writing cause it can add relevant details or important information for the given outline or add 0 point if the given knowledge and outline do not satisfy this criterion.
- The score is an integer that sums up all the points you give. So the range of scores is 1,2,3,4,5.

The given outline:{outline}
the given knowledge:{triplesentence}

Output Format
There are 3 parts in your generated output.
Please strictly follow the format to ensure the correct evaluation of the relevance.
Nothing but the following parts you make should be included in the output.
Part1 Score Results and their Reasons:
for criterion 1. My result is: add (0 or 1).Because:....
for criterion 2. My result is: add (0 or 1).Because:....
for criterion 3. My result is: add (0 or 1).Because:....
for criterion 4. My result is: add (0 or 1).Because:....
for criterion 5. My result is: add (0 or 1).Because:....
Part2 Sum Up:
Summing up all the score results for each criterion:
eg.1+1+1+0+0=3
Part3 total score
Score:

Follow all the information above to generate the formatted output.
Do not contain any additional information except the output parts.
Your Output:
)__";

constexpr const char* kQuadrupleListPreamble = R"__(Generate a logical summary from the given input list.
The input list contains a series of quadruples, each containing the following elements:
The first element is the entity making the action.
The second element is the action.
The third element is the giving object of the action.
The fourth element is a number that represents the chapter in which the action took place.
)__";

std::string describe_rule_body(int rule_id) {
    switch (rule_id) {
        case 1:
            return std::string(kQuadrupleListPreamble) + R"__(
The first two elements of the given series quadruple are the same, indicating that the sender of the action and the action are always the same. You should summarize the information from this perspective.

Here is a reference example:
Sample input: [("Bob", "hit", "Jane", 1), ("Bob", "hit", "Lily", 1), ("Bob", "hit", "Mary", 2)]
Example output: Bob hit Jane and Lily in Chapter 1 and then hit Mary in chapter 2.

The output should express the information smoothly and match the accuracy of the input.
The output should be expressed in just one sentence.

The list given:{inlist}
Your results:
)__";
        case 2:
            return std::string(kQuadrupleListPreamble) + R"__(
The first three elements of the given series quadruple are the same, indicating that the occurrence of actions remains the same in each chapter. You should summarize the information from this perspective.

Here are some reference examples:
Sample input: [("Bob", "hit", "Jane", 1), ("Bob", "hit", "Jane", 2), ("Bob", "hit", "Jane", 3)]
Example output: Bob hit Jane from chapter 1 to chapter 3.

Sample input: [("Bob", "hit", "Jane", 1), ("Bob", "hit", "Jane", 3)]
Example output: Bob hit Jane from chapter 1 and chapter 3.

The output should express the information smoothly and match the accuracy of the input.
The output should be expressed in just one sentence.

The list given:{inlist}
Your results:
)__";
        case 3:
            return std::string(kQuadrupleListPreamble) + R"__(
The second and third elements of the given quadruples are the same, indicating that the receiver of the action and the action are always the same. You should summarize the information from this perspective.
Here is an example:
input: [("Lily", "hit", "Jane", 1), ("Bob", "hit", "Jane", 1), ("Emma", "hit", "Jane", 3)]
Example output: Jane was hit by Lily and Bob in chapter 1 and she was hit by Emma in chapter 3.

The list given:{inlist}
The output should express the information smoothly and match the accuracy of the input.
The output should be expressed in just one sentence.
Your results:
)__";
        case 4:
            return std::string(kQuadrupleListPreamble) + R"__(
The first and third elements of the given quadruples are the same, indicating that the sender of some action and the receiver of some action are always the same. You should summarize the information from this perspective.
There are some examples:
input: [("Lily", "hate", "Jane", 2), ("Lily", "Love", "Jane", 1)]
Example output: Lily loves Jane at chapter 1 but grows to hate Jane at chapter 2.
input: [("Lily", "kill", "Jane", 2), ("Lily", "hate", "Jane", 1)]
Example output: Lily hates Jane at chapter 1 and kills Jane at chapter 2.

The list given:{inlist}
The output should express the information smoothly and match the accuracy of the input.
The output should be expressed in just one sentence.
Your results:
)__";
        case 5:
            return R"__(Generate a logical summary from the given input list.
The input list contains a series of entities including their attributes and the chapter numbers in which they appear.
Here is a summary from a list of grouped quadruples:
input:[['small garden',1],['unfinished garden',3],['beautiful garden',2]]
Example output: the garden is small in chapter 1 and beautiful in chapter 2 but in chapter 3 ,it is unfinished.

The list given:{inlist}
The output should express the information smoothly and match the accuracy of the input.
The output should be expressed in just one sentence.
Your results:
)__";
        default:
            throw InputError("no describe template for rule " + std::to_string(rule_id));
    }
}

constexpr const char* kJudgeOutputFormat = R"__(The output should be a markdown code snippet formatted and the format is :
{
        "result": string  Was a char chosen from 'Y' or 'N' that describes the judgment result. If the judgment result is 'Y', it means that the two schemas have conflicts. If the judgment result is 'N', it means that the two schemas do not have conflicts.
        "explanation": string Was a string that describes how you judge the conflict or conflict-free between the two schemas.
}
Please be strict in your judgment and consider the chronological order of the attributes.
Strictly judge based on the given information, do not add any information to make some unreasonable science into reasonable.
Your results:
)__";

std::string judge_rule_body(int rule_id) {
    std::string perspective;
    switch (rule_id) {
        case 1:
            perspective =
                "The sender of the action and the main part of the action are always the same.\n"
                "You need to determine whether the receivers of the action are reasonable as the "
                "knowledge described over Chapter identification.\n"
                "You need to judge based on context of knowledge and combined with the modified "
                "part of receivers to make the judgment.\n";
            break;
        case 2:
            perspective =
                "The sender, the receiver of the action and the main part of the action itself "
                "are always the same but it happened at different chapters.\n"
                "You need to determine whether the information in the knowledge can be maintained "
                "over Chapter identification in the knowledge.\n"
                "You need to judge based on context of knowledge and your basic semantic "
                "knowledge.\n";
            break;
        case 3:
            perspective =
                "The receiver of the action and the main part of the action itself are always the "
                "same but the sender of the action is different.\n"
                "You need to determine whether the senders of action are reasonable as the "
                "knowledge described over Chapter identification.\n"
                "You need to judge based on context of knowledge and combined with the modified "
                "part of senders to make the judgment.\n";
            break;
        case 4:
            perspective =
                "The sender and the receiver of the action are always the same but the action may "
                "be different.\n"
                "You need to determine whether the actions can co-exist as what the knowledge "
                "described over Chapter identification.\n"
                "You need to judge based on the context of knowledge and combine with the modified "
                "part of the action to make the judgment.\n";
            break;
        case 5:
            perspective =
                "The description given is the change in the state of the same entity over time.\n";
            break;
        default:
            throw InputError("no judge template for rule " + std::to_string(rule_id));
    }
    return "Determine if the description given is reasonable.\n\n" + perspective +
           "The input:{description}\n" + kJudgeOutputFormat;
}

}  // namespace

TemplateCatalog build_default_catalog(int stage_count, int expansion_count) {
    TemplateCatalog catalog;
    catalog.add({template_ids::kRoughOutline, rough_outline_body(stage_count),
                 {"theory", "setting", "character", "outline"}});
    catalog.add({template_ids::kDetailedOutline, detailed_outline_body(expansion_count),
                 {"volume outline", "stage", "last chapter", "history"}});
    catalog.add({template_ids::kGenStory, kGenStoryBody, {"outline", "history"}});
    catalog.add({template_ids::kExtractTriples, kExtractTriplesBody, {"text"}});
    catalog.add({template_ids::kRelevanceScore, kRelevanceScoreBody, {"outline", "triplesentence"}});
    for (int rule = 1; rule <= 5; ++rule) {
        catalog.add({template_ids::describe_rule(rule), describe_rule_body(rule), {"inlist"}});
        catalog.add({template_ids::judge_rule(rule), judge_rule_body(rule), {"description"}});
    }
    return catalog;
}

}  // namespace dome
