#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "dome/errors.hpp"
#include "dome/hash.hpp"
#include "dome/memory/retrieval.hpp"
#include "dome/text_util.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace dome;
using namespace dome::testing;

namespace {

std::unique_ptr<Gateway> gateway_with_embedder(std::unique_ptr<EmbeddingBackend> embedder,
                                               FixtureTable table = {}) {
    auto gateway = std::make_unique<Gateway>(
        test_provider(), build_default_catalog(5, 3),
        std::make_unique<ScriptedChatBackend>(std::move(table)), std::move(embedder));
    gateway->set_sleeper([](int) {});
    return gateway;
}

}  // namespace

TEST_CASE("retrieval boundary: the 0.75 threshold is inclusive") {
    // Unit vectors with exact cosines 0.7499 / 0.7501 against the probe.
    std::map<std::string, std::vector<double>> vectors{
        {"probe", {1.0, 0.0}},
        {"near_in", {0.7501, std::sqrt(1.0 - 0.7501 * 0.7501)}},
        {"near_out", {0.7499, std::sqrt(1.0 - 0.7499 * 0.7499)}},
        {"filler_x", {0.0, 1.0}},
        {"filler_y", {0.0, 1.0}},
    };
    auto gateway = gateway_with_embedder(std::make_unique<LambdaEmbedder>(
        [vectors](const std::string& text) { return vectors.at(text); }));

    TemporalKG kg;
    kg.insert({"near_in", "acts", "filler_x"}, 1);   // id 0
    kg.insert({"near_out", "acts", "filler_y"}, 1);  // id 1

    const std::vector<QueryEntity> entities{{"probe", "probe"}};
    CHECK(entity_retrieve(kg, entities, *gateway, 0.75) == std::set<int>{0});

    SUBCASE("exact cosine at the threshold is included") {
        std::map<std::string, std::vector<double>> exact = vectors;
        exact["near_out"] = {0.75, std::sqrt(1.0 - 0.75 * 0.75)};
        auto gw = gateway_with_embedder(std::make_unique<LambdaEmbedder>(
            [exact](const std::string& text) { return exact.at(text); }));
        TemporalKG kg2;
        kg2.insert({"near_out", "acts", "filler_y"}, 1);
        CHECK(entity_retrieve(kg2, entities, *gw, 0.75) == std::set<int>{0});
    }
}

TEST_CASE("exact string matches qualify without an embedding call") {
    auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>());
    TemporalKG kg;
    kg.insert({"Gary", "helps", "Shannon"}, 1);
    const std::vector<QueryEntity> entities{{"Gary", "gary"}, {"Shannon", "shannon"}};
    CHECK(entity_retrieve(kg, entities, *gateway, 0.75) == std::set<int>{0});
    for (const CallRecord& record : gateway->trace().snapshot())
        CHECK(record.kind != "embed");
}

TEST_CASE("entity_retrieve equals the brute-force all-pairs scan") {
    const std::vector<std::string> pool = {"alpha", "beta",  "gamma", "delta", "epsilon",
                                           "zeta",  "theta", "iota",  "kappa", "lambda"};
    const std::vector<std::string> actions = {"meets", "sees", "is"};
    std::mt19937 rng(4242);
    for (int round = 0; round < 15; ++round) {
        TemporalKG kg;
        const int size = 1 + static_cast<int>(rng() % 50);
        for (int i = 0; i < size; ++i)
            kg.insert({pool[rng() % pool.size()] + "_" + std::to_string(rng() % 7),
                       actions[rng() % actions.size()],
                       pool[rng() % pool.size()] + "_" + std::to_string(rng() % 7)},
                      static_cast<int>(rng() % 4));

        std::vector<QueryEntity> entities;
        for (int q = 0; q < 3; ++q) {
            const std::string name = pool[rng() % pool.size()] + "_" + std::to_string(rng() % 7);
            entities.push_back({name, normalize_key(name)});
        }
        // 0.75 is the production threshold; the low ones make the cosine path
        // actually admit pairs under the hash-mock embedder.
        for (const double threshold : {0.75, 0.2, 0.05}) {
            auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>());
            HashMockEmbedder oracle_embedder(32);
            const std::set<int> got = entity_retrieve(kg, entities, *gateway, threshold);
            const std::set<int> want =
                allpairs_retrieve_oracle(kg.quadruples(), entities, oracle_embedder, threshold);
            CHECK(got == want);
        }
    }
}

TEST_CASE("retrieval monotonicity: lowering the threshold never shrinks the candidate set") {
    std::mt19937 rng(777);
    const std::vector<std::string> pool = {"ada", "grace", "alan", "edsger", "barbara", "tony"};
    TemporalKG kg;
    for (int i = 0; i < 30; ++i)
        kg.insert({pool[rng() % pool.size()] + std::to_string(rng() % 9), "meets",
                   pool[rng() % pool.size()] + std::to_string(rng() % 9)},
                  static_cast<int>(rng() % 3));
    std::vector<QueryEntity> entities{{"ada1", "ada1"}, {"tony5", "tony5"}};

    std::set<int> previous;
    bool first = true;
    for (const double threshold : {0.9, 0.5, 0.2, 0.1, 0.0}) {
        auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>());
        const std::set<int> candidates = entity_retrieve(kg, entities, *gateway, threshold);
        if (!first)
            CHECK(std::includes(candidates.begin(), candidates.end(), previous.begin(),
                                previous.end()));
        previous = candidates;
        first = false;
    }
}

TEST_CASE("every cosine-compared entity lands in the embedding cache") {
    auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>());
    TemporalKG kg;
    kg.insert({"Gary", "helps", "Shannon"}, 1);
    kg.insert({"Lena", "runs", "store"}, 1);
    const std::vector<QueryEntity> entities{{"Gary", "gary"}};
    entity_retrieve(kg, entities, *gateway, 0.75);
    // every entity that went through the cosine path is cached: the three
    // non-matching stored entities, plus the query entity itself (it was
    // embedded to compare against them)
    CHECK(kg.has_embedding("gary"));
    CHECK(kg.has_embedding("shannon"));
    CHECK(kg.has_embedding("lena"));
    CHECK(kg.has_embedding("store"));
    CHECK(kg.has_embedding("helps") == false);  // actions are not entities
}

TEST_CASE("select_topk ordering, bounds and tie-breaks") {
    auto scored_item = [](int id, int chapter, int total, const std::string& subject) {
        ScoredCandidate c;
        c.quadruple = {id, {subject, "does", "thing" + std::to_string(id)}, chapter};
        c.score.total = total;
        return c;
    };
    std::vector<ScoredCandidate> scored{
        scored_item(0, 1, 5, "A"), scored_item(1, 2, 3, "B"), scored_item(2, 4, 3, "C"),
        scored_item(3, 4, 3, "D"), scored_item(4, 1, 0, "E"),  // dropped: judged irrelevant
        scored_item(5, 5, 4, "F"),
    };

    SUBCASE("full ordering: score desc, chapter desc, id asc") {
        const RelevantContext context = select_topk(scored, 10);
        REQUIRE(context.sentences.size() == 5);
        CHECK(context.source_ids ==
              std::vector<std::vector<int>>{{0}, {5}, {2}, {3}, {1}});
    }
    SUBCASE("k = 1 keeps only the top scorer") {
        const RelevantContext context = select_topk(scored, 1);
        REQUIRE(context.sentences.size() == 1);
        CHECK(context.source_ids[0] == std::vector<int>{0});
    }
    SUBCASE("recency tie-break: chapter 4 outranks chapter 2 at equal score") {
        const RelevantContext context = select_topk(scored, 10);
        const auto& ids = context.source_ids;
        const auto pos = [&](int id) {
            for (std::size_t i = 0; i < ids.size(); ++i)
                if (ids[i][0] == id) return i;
            return std::size_t(99);
        };
        CHECK(pos(2) < pos(1));
    }
    SUBCASE("the sentence bound holds for any k") {
        for (int k = 1; k <= 8; ++k)
            CHECK(select_topk(scored, k).sentences.size() <=
                  std::min<std::size_t>(static_cast<std::size_t>(k), 5));
    }
}

TEST_CASE("select_topk merges identical triples into one range statement") {
    std::vector<ScoredCandidate> scored;
    for (int chapter = 1; chapter <= 4; ++chapter) {
        ScoredCandidate c;
        c.quadruple = {chapter - 1, {"Brad", "had an affair with", "Karen Spooner"}, chapter};
        c.score.total = 5;
        scored.push_back(c);
    }
    const RelevantContext context = select_topk(scored, 10);
    REQUIRE(context.sentences.size() == 1);
    CHECK(context.sentences[0] ==
          "Brad had an affair with Karen Spooner from chapter 1 to chapter 4");
    CHECK(context.source_ids[0] == std::vector<int>{3, 2, 1, 0});
}

TEST_CASE("query_entities returns the union of subjects and objects") {
    FixtureTable table;
    table.add_default(template_ids::kExtractTriples,
                      "1.(Brad, reveals, infidelity)\n2.(Shannon, suspects, Brad)");
    auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>(), std::move(table));
    const std::vector<QueryEntity> entities = query_entities("query text", *gateway);
    REQUIRE(entities.size() == 3);
    CHECK(entities[0].display == "Brad");
    CHECK(entities[1].display == "infidelity");
    CHECK(entities[2].display == "Shannon");
}

TEST_CASE("query_relevant on an empty KG is an empty context with zero calls") {
    auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>());
    TemporalKG kg;
    const RelevantContext context = query_relevant(kg, "anything", 10, *gateway, 0.75);
    CHECK(context.empty());
    CHECK(gateway->trace().size() == 0);
}

TEST_CASE("premise-only KG answers from chapter 0 alone") {
    FixtureTable table;
    table.add_default(template_ids::kExtractTriples, "1.(Gary, lives in, inner city)");
    table.add_default(template_ids::kRelevanceScore, "Part3 total score\nScore: 4\n");
    auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>(), std::move(table));

    TemporalKG kg;
    kg.insert({"Gary", "lives in", "inner city"}, 0);
    kg.insert({"Lena", "raises", "Gary"}, 0);
    const RelevantContext context = query_relevant(kg, "What about Gary?", 10, *gateway, 0.75);
    REQUIRE(!context.empty());
    for (const std::string& sentence : context.sentences)
        CHECK(contains(sentence, "in chapter 0"));
}

TEST_CASE("query_relevant full path on a 12-quadruple fixture") {
    TemporalKG kg;
    kg.insert({"Brad", "had an affair with", "Karen Spooner"}, 1);  // 0
    kg.insert({"Brad", "had an affair with", "Karen Spooner"}, 2);  // 1
    kg.insert({"Brad", "had an affair with", "Karen Spooner"}, 3);  // 2
    kg.insert({"Brad", "had an affair with", "Karen Spooner"}, 4);  // 3
    kg.insert({"Brad", "works at", "the office"}, 1);               // 4
    kg.insert({"Shannon", "suspects", "Brad"}, 3);                  // 5
    kg.insert({"Shannon", "reaches out to", "Jodi"}, 3);            // 6
    kg.insert({"Jodi", "supports", "Shannon"}, 4);                  // 7
    kg.insert({"Karen Spooner", "calls", "Brad"}, 2);               // 8
    kg.insert({"Lena", "runs", "corner store"}, 1);                 // 9
    kg.insert({"Gary", "helps", "Shannon"}, 2);                     // 10
    kg.insert({"the office", "hosts", "late nights"}, 2);           // 11
    REQUIRE(kg.size() == 12);

    const std::string query =
        "Brad's infidelity is gradually revealed through his secretive behavior. "
        "Shannon becomes increasingly suspicious.";

    FixtureTable table;
    table.add(template_ids::kExtractTriples, binding_digest({{"text", query}}),
              "1.(Brad, reveals, infidelity)\n2.(Shannon, suspects, Brad)");
    auto relevance = [&](const std::string& sentence, int score) {
        table.add(template_ids::kRelevanceScore,
                  binding_digest({{"outline", query}, {"triplesentence", sentence}}),
                  "Part3 total score\nScore: " + std::to_string(score) + "\n");
    };
    relevance("Brad had an affair with Karen Spooner", 5);
    relevance("Brad works at the office", 1);
    relevance("Shannon suspects Brad", 4);
    relevance("Shannon reaches out to Jodi", 3);
    relevance("Jodi supports Shannon", 0);
    relevance("Karen Spooner calls Brad", 2);
    relevance("Gary helps Shannon", 3);

    auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>(), std::move(table));

    // Hand-composed expectation: exact matches admit ids {0..8, 10}; scores
    // rank the four affair quadruples (5) then "Shannon suspects Brad" (4);
    // k = 5 cuts there and the affair run merges into one range statement.
    const RelevantContext context = query_relevant(kg, query, 5, *gateway, 0.75);
    REQUIRE(context.sentences.size() == 2);
    CHECK(context.sentences[0] ==
          "Brad had an affair with Karen Spooner from chapter 1 to chapter 4");
    CHECK(context.sentences[1] == "Shannon suspects Brad in chapter 3");
    CHECK(context.source_ids[0] == std::vector<int>{3, 2, 1, 0});
    CHECK(context.source_ids[1] == std::vector<int>{5});
}

TEST_CASE("semantic_filter keeps candidate order and degrades per candidate") {
    FixtureTable table;
    const std::string query = "the query";
    table.add(template_ids::kRelevanceScore,
              binding_digest({{"outline", query}, {"triplesentence", "A does x"}}),
              "Part3 total score\nScore: 2\n");
    table.add(template_ids::kRelevanceScore,
              binding_digest({{"outline", query}, {"triplesentence", "B does y"}}),
              "total gibberish");
    auto gateway = gateway_with_embedder(std::make_unique<HashMockEmbedder>(), std::move(table));

    std::vector<StoredQuadruple> candidates{{7, {"A", "does", "x"}, 1},
                                            {9, {"B", "does", "y"}, 2}};
    std::vector<std::string> warnings;
    const auto scored = semantic_filter(query, candidates, *gateway, &warnings);
    REQUIRE(scored.size() == 2);
    CHECK(scored[0].quadruple.id == 7);
    CHECK(scored[0].score.total == 2);
    CHECK(scored[1].quadruple.id == 9);
    CHECK(scored[1].score.total == 0);  // unparseable verdict degrades to 0
    REQUIRE(warnings.size() == 1);
    CHECK(contains(warnings[0], "candidate 9"));
}

TEST_CASE("select_topk rejects k < 1") {
    CHECK_THROWS_AS(select_topk({}, 0), InputError);
}
