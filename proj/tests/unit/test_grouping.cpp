#include <doctest.h>

#include <random>

#include "dome/conflict/grouping.hpp"
#include "support/oracles.hpp"

using namespace dome;
using namespace dome::testing;

namespace {

std::vector<StoredQuadruple> make_quads(
    const std::vector<std::tuple<std::string, std::string, std::string, int>>& rows) {
    std::vector<StoredQuadruple> out;
    int id = 0;
    for (const auto& [s, a, o, c] : rows) out.push_back({id++, {s, a, o}, c});
    return out;
}

}  // namespace

TEST_CASE("rule 2: the identical fact at two chapters forms one group") {
    const auto quads = make_quads({{"Bob", "hit", "Jane", 1}, {"Bob", "hit", "Jane", 3}});
    const auto groups = group_quadruples(quads);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 2);
    CHECK(groups[0].member_ids == std::vector<int>{0, 1});
}

TEST_CASE("rule 1: same actor and action over varying objects") {
    const auto quads = make_quads(
        {{"Bob", "hit", "Jane", 1}, {"Bob", "hit", "Lily", 1}, {"Bob", "hit", "Mary", 2}});
    const auto groups = group_quadruples(quads);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 1);
    CHECK(groups[0].member_ids == std::vector<int>{0, 1, 2});
}

TEST_CASE("rule 4: same pair under different actions") {
    const auto quads = make_quads({{"Lily", "hate", "Jane", 2}, {"Lily", "love", "Jane", 1}});
    const auto groups = group_quadruples(quads);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 4);
    // members sorted by (chapter, id): the chapter-1 love precedes chapter-2 hate
    CHECK(groups[0].member_ids == std::vector<int>{1, 0});
}

TEST_CASE("rule 3: shared action and object over varying subjects") {
    const auto quads = make_quads(
        {{"Lily", "hit", "Jane", 1}, {"Bob", "hit", "Jane", 1}, {"Emma", "hit", "Jane", 3}});
    const auto groups = group_quadruples(quads);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 3);
}

TEST_CASE("rule 5: attributive statements changing over chapters") {
    const auto quads = make_quads({{"garden", "is", "small", 1},
                                   {"garden", "was", "unfinished", 3},
                                   {"garden", "becomes", "beautiful", 2}});
    const auto groups = group_quadruples(quads);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 5);
    CHECK(groups[0].member_ids == std::vector<int>{0, 2, 1});  // chapter order
}

TEST_CASE("rule 5 needs real variation") {
    // same attribute under is/was is a varying-action pair: rule 4 takes it
    // before rule 5 is consulted
    const auto same_attribute =
        make_quads({{"garden", "is", "small", 1}, {"garden", "was", "small", 2}});
    const auto groups = group_quadruples(same_attribute);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 4);

    // attributes varying inside one chapter do not change over time: nothing fires
    const auto one_chapter = make_quads({{"garden", "is", "small", 1},
                                         {"garden", "becomes", "large", 1}});
    CHECK(group_quadruples(one_chapter).empty());
}

TEST_CASE("consumption: rule 2 eats the repeated pair before rule 1 runs") {
    const auto quads = make_quads(
        {{"Bob", "hit", "Jane", 1}, {"Bob", "hit", "Jane", 3}, {"Bob", "hit", "Lily", 1}});
    const auto groups = group_quadruples(quads);
    // (Bob,hit,Jane,1)+(Bob,hit,Jane,3) go to rule 2; the leftover
    // (Bob,hit,Lily) is a singleton for rule 1 and produces nothing.
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 2);
    CHECK(groups[0].member_ids == std::vector<int>{0, 1});
}

TEST_CASE("partition property: with consumption no id appears twice") {
    std::mt19937 rng(99);
    const std::vector<std::string> subjects = {"A", "B", "C"};
    const std::vector<std::string> actions = {"hit", "love", "is"};
    const std::vector<std::string> objects = {"X", "Y", "tall"};
    for (int round = 0; round < 50; ++round) {
        TemporalKG kg;
        for (int i = 0; i < 25; ++i)
            kg.insert({subjects[rng() % 3], actions[rng() % 3], objects[rng() % 3]},
                      static_cast<int>(rng() % 4));
        std::set<int> seen;
        for (const QuadrupleGroup& group : group_quadruples(kg.quadruples()))
            for (int id : group.member_ids) CHECK(seen.insert(id).second);
    }
}

TEST_CASE("group validity: every emitted group satisfies its rule without any LLM") {
    std::mt19937 rng(123);
    const std::vector<std::string> subjects = {"A", "B", "C", "D"};
    const std::vector<std::string> actions = {"hit", "love", "is", "was"};
    const std::vector<std::string> objects = {"X", "Y", "tall", "small"};
    for (int round = 0; round < 30; ++round) {
        TemporalKG kg;
        for (int i = 0; i < 20; ++i)
            kg.insert({subjects[rng() % 4], actions[rng() % 4], objects[rng() % 4]},
                      static_cast<int>(rng() % 4));
        const auto quads = kg.quadruples();
        for (const QuadrupleGroup& group : group_quadruples(quads)) {
            REQUIRE(group.member_ids.size() >= 2);
            std::set<std::string> subjects_seen, actions_seen, objects_seen;
            std::set<int> chapters;
            for (int id : group.member_ids) {
                subjects_seen.insert(quads[static_cast<std::size_t>(id)].triple.subject);
                actions_seen.insert(quads[static_cast<std::size_t>(id)].triple.action);
                objects_seen.insert(quads[static_cast<std::size_t>(id)].triple.object);
                chapters.insert(quads[static_cast<std::size_t>(id)].chapter);
            }
            switch (group.rule_id) {
                case 1:
                    CHECK(subjects_seen.size() == 1);
                    CHECK(actions_seen.size() == 1);
                    CHECK(objects_seen.size() >= 2);
                    break;
                case 2:
                    CHECK(subjects_seen.size() == 1);
                    CHECK(actions_seen.size() == 1);
                    CHECK(objects_seen.size() == 1);
                    CHECK(chapters.size() >= 2);
                    break;
                case 3:
                    CHECK(actions_seen.size() == 1);
                    CHECK(objects_seen.size() == 1);
                    CHECK(subjects_seen.size() >= 2);
                    break;
                case 4:
                    CHECK(subjects_seen.size() == 1);
                    CHECK(objects_seen.size() == 1);
                    CHECK(actions_seen.size() >= 2);
                    break;
                case 5:
                    CHECK(subjects_seen.size() == 1);
                    CHECK(chapters.size() >= 2);
                    CHECK(objects_seen.size() >= 2);
                    break;
                default:
                    FAIL("unexpected rule id");
            }
        }
    }
}

TEST_CASE("grouping equals the brute-force enumerator on random KGs") {
    std::mt19937 rng(2025);
    const std::vector<std::string> subjects = {"Ann", "Ben", "Cat", "garden", "house"};
    const std::vector<std::string> actions = {"hit", "love", "is", "was", "visits"};
    const std::vector<std::string> objects = {"Ann", "Ben", "small", "pretty", "letter"};
    for (const bool consume : {true, false}) {
        GroupingOptions options;
        options.consume = consume;
        for (int round = 0; round < 60; ++round) {
            TemporalKG kg;
            const int n = 2 + static_cast<int>(rng() % 29);
            for (int i = 0; i < n; ++i)
                kg.insert({subjects[rng() % subjects.size()], actions[rng() % actions.size()],
                           objects[rng() % objects.size()]},
                          static_cast<int>(rng() % 5));
            CHECK(canonical_groups(group_quadruples(kg.quadruples(), options)) ==
                  brute_force_groups(kg.quadruples(), options));
        }
    }
}

TEST_CASE("without consumption, groups may overlap and m comes from a set union") {
    // (A,love,B,1) and (A,love,B,2) repeat across chapters (rule 2) while the
    // pair also carries varying actions (rule 4 with id 2).
    const auto quads = make_quads(
        {{"A", "love", "B", 1}, {"A", "love", "B", 2}, {"A", "hate", "B", 3}});
    GroupingOptions no_consume;
    no_consume.consume = false;
    const auto groups = group_quadruples(quads, no_consume);
    std::set<int> rules;
    std::set<int> union_ids;
    for (const auto& group : groups) {
        rules.insert(group.rule_id);
        union_ids.insert(group.member_ids.begin(), group.member_ids.end());
    }
    CHECK(rules == std::set<int>{2, 4});
    CHECK(union_ids == std::set<int>{0, 1, 2});

    // with consumption the same KG yields the rule-2 group only
    const auto consumed = group_quadruples(quads);
    REQUIRE(consumed.size() == 1);
    CHECK(consumed[0].rule_id == 2);
}

TEST_CASE("member serialization matches the prompt shapes byte for byte") {
    SUBCASE("quadruple tuples for rules 1-4") {
        const auto quads = make_quads({{"Bob", "hit", "Jane", 1}, {"Bob", "hit", "Jane", 3}});
        const auto groups = group_quadruples(quads);
        REQUIRE(groups.size() == 1);
        CHECK(serialize_group_members(groups[0], quads) ==
              "[(\"Bob\", \"hit\", \"Jane\", 1), (\"Bob\", \"hit\", \"Jane\", 3)]");
    }
    SUBCASE("attribute pairs for rule 5") {
        const auto quads = make_quads({{"garden", "is", "small", 1},
                                       {"garden", "was", "unfinished", 3},
                                       {"garden", "becomes", "beautiful", 2}});
        const auto groups = group_quadruples(quads);
        REQUIRE(groups.size() == 1);
        CHECK(serialize_group_members(groups[0], quads) ==
              "[['small garden',1],['beautiful garden',2],['unfinished garden',3]]");
    }
}

TEST_CASE("rule-5 membership honors the configured attributive set") {
    const auto quads = make_quads(
        {{"tower", "rises above", "city", 1}, {"tower", "looms over", "city", 2}});
    GroupingOptions options;
    // default set: neither action is attributive; rule 4 catches the pair instead
    auto groups = group_quadruples(quads, options);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 4);

    options.attributive_actions = {"rises above", "looms over"};
    // rule 4 still fires first in rule order; restrict to rule-5 material
    const auto attributive_only = make_quads(
        {{"tower", "rises above", "fog", 1}, {"tower", "looms over", "city", 2}});
    groups = group_quadruples(attributive_only, options);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].rule_id == 5);
}
