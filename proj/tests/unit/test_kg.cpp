#include <doctest.h>

#include <random>

#include "dome/errors.hpp"
#include "dome/memory/kg.hpp"
#include "dome/text_util.hpp"
#include "support/test_util.hpp"

using namespace dome;
using namespace dome::testing;

TEST_CASE("insert assigns dense insertion-ordered ids and dedupes") {
    TemporalKG kg;
    CHECK(kg.insert({"Bob", "hit", "Jane"}, 1) == 0);
    CHECK(kg.insert({"Bob", "hit", "Jane"}, 1) == -1);  // exact duplicate
    CHECK(kg.insert({"Bob", "hit", "Jane"}, 3) == 1);   // same triple, new chapter: retained
    CHECK(kg.insert({"bob", "HIT", "jane"}, 1) == -1);  // dedup is case-insensitive
    CHECK(kg.size() == 2);
    CHECK(kg.max_chapter() == 3);
}

TEST_CASE("entity index covers subjects and objects") {
    TemporalKG kg;
    kg.insert({"Gary", "helps", "Shannon"}, 1);
    kg.insert({"Shannon", "interviews", "Lena"}, 2);
    const auto& index = kg.entity_index();
    CHECK(index.at("gary") == std::set<int>{0});
    CHECK(index.at("shannon") == std::set<int>{0, 1});
    CHECK(index.at("lena") == std::set<int>{1});
    CHECK(kg.display_form("shannon") == "Shannon");
}

TEST_CASE("index soundness: rebuilt index equals the live one after any interleaving") {
    std::mt19937 rng(20240817);
    const std::vector<std::string> entities = {"Gary", "Shannon", "Mike", "Lena", "the city"};
    const std::vector<std::string> actions = {"meets", "avoids", "is", "helps"};
    for (int round = 0; round < 20; ++round) {
        TemporalKG kg;
        const int inserts = 1 + static_cast<int>(rng() % 40);
        for (int i = 0; i < inserts; ++i) {
            Triple t{entities[rng() % entities.size()], actions[rng() % actions.size()],
                     entities[rng() % entities.size()]};
            kg.insert(t, static_cast<int>(rng() % 5));
        }
        CHECK(kg.rebuild_entity_index() == kg.entity_index());
    }
}

TEST_CASE("store assigns the chapter index to every extracted triple") {
    TemplateCatalog catalog = build_default_catalog(5, 3);
    FixtureTable table;
    table.add_default(template_ids::kExtractTriples,
                      "1.(Gary, lives in, inner city)\n2.(Shannon, mourns, Mike)");
    auto gateway = make_scripted_gateway(std::move(table), std::move(catalog));

    TemporalKG kg;
    CHECK(store_text(kg, "premise text", 0, *gateway) == 2);
    CHECK(store_text(kg, "chapter text", 1, *gateway) == 2);  // same triples, chapter 1
    for (const StoredQuadruple& q : kg.quadruples())
        CHECK(q.chapter == (q.id < 2 ? 0 : 1));
}

TEST_CASE("storing the same sentence twice at one chapter inserts once") {
    TemplateCatalog catalog = build_default_catalog(5, 3);
    FixtureTable table;
    table.add_default(template_ids::kExtractTriples, "1.(Bob, hit, Jane)");
    auto gateway = make_scripted_gateway(std::move(table), std::move(catalog));

    TemporalKG kg;
    CHECK(store_text(kg, "Bob hit Jane.", 1, *gateway) == 1);
    CHECK(store_text(kg, "Bob hit Jane.", 1, *gateway) == 0);
    CHECK(kg.size() == 1);
}

TEST_CASE("chapter-2 text yields chapter-2 quadruples") {
    // The drifting-thoughts example: the extraction output line becomes a
    // quadruple stamped with the chapter the text came from.
    TemplateCatalog catalog = build_default_catalog(5, 3);
    FixtureTable table;
    table.add_default(template_ids::kExtractTriples,
                      "1.(GabrielMartin, finds himself, nestled in newly acquired apartment)\n"
                      "2.(Gabriel's thoughts, drift to, Lina Sanchez)\n"
                      "3.(Gabriel, manages to keep, sanity)\n");
    auto gateway = make_scripted_gateway(std::move(table), std::move(catalog));

    TemporalKG kg;
    store_text(kg, "One evening, his thoughts drifted to Lina Sanchez...", 2, *gateway);
    bool found = false;
    for (const StoredQuadruple& q : kg.quadruples())
        if (q.triple == Triple{"Gabriel's thoughts", "drift to", "Lina Sanchez"} &&
            q.chapter == 2)
            found = true;
    CHECK(found);
}

TEST_CASE("persistence round-trip reproduces ids byte-for-byte") {
    TempDir dir("kg");
    TemporalKG kg;
    kg.insert({"Gary", "helps", "Shannon"}, 0);
    kg.insert({"Shannon", "writes", "feature"}, 1);
    kg.insert({"Gary", "is", "resourceful"}, 2);
    kg.save(dir.file("kg.jsonl"));

    const TemporalKG loaded = TemporalKG::load(dir.file("kg.jsonl"));
    REQUIRE(loaded.size() == kg.size());
    for (std::size_t i = 0; i < kg.size(); ++i) {
        CHECK(loaded.quadruples()[i].id == kg.quadruples()[i].id);
        CHECK(loaded.quadruples()[i].triple == kg.quadruples()[i].triple);
        CHECK(loaded.quadruples()[i].chapter == kg.quadruples()[i].chapter);
    }
    CHECK(loaded.entity_index() == kg.entity_index());

    const std::string first = read_file(dir.file("kg.jsonl"));
    loaded.save(dir.file("kg2.jsonl"));
    CHECK(read_file(dir.file("kg2.jsonl")) == first);
}

TEST_CASE("malformed and non-dense KG files are rejected") {
    TempDir dir("kgbad");
    write_file(dir.file("broken.jsonl"), "not json\n");
    CHECK_THROWS_AS(TemporalKG::load(dir.file("broken.jsonl")), InputError);

    write_file(dir.file("gap.jsonl"),
               R"({"id": 5, "subject": "a", "action": "b", "object": "c", "chapter": 1})"
               "\n");
    CHECK_THROWS_AS(TemporalKG::load(dir.file("gap.jsonl")), InputError);

    write_file(dir.file("missing.jsonl"), R"({"id": 0, "subject": "a"})" "\n");
    CHECK_THROWS_AS(TemporalKG::load(dir.file("missing.jsonl")), InputError);
}

TEST_CASE("embedding cache persists beside the KG") {
    TempDir dir("cache");
    TemplateCatalog catalog = build_default_catalog(5, 3);
    auto gateway = make_scripted_gateway(FixtureTable{}, std::move(catalog));

    TemporalKG kg;
    kg.insert({"Gary", "helps", "Shannon"}, 1);
    const EmbeddingVector& vec = kg.embedding_for("gary", "Gary", *gateway);
    CHECK(vec.dimension() == 32);
    CHECK(kg.embedding_cache_size() == 1);
    // second lookup is served from the cache: no new embed trace record
    const std::size_t trace_before = gateway->trace().size();
    kg.embedding_for("gary", "Gary", *gateway);
    CHECK(gateway->trace().size() == trace_before);

    kg.save_embedding_cache(dir.file("cache.jsonl"));
    TemporalKG other;
    other.load_embedding_cache(dir.file("cache.jsonl"));
    CHECK(other.has_embedding("gary"));
}

TEST_CASE("stats count distinct entities and actions") {
    TemporalKG kg;
    kg.insert({"Gary", "helps", "Shannon"}, 1);
    kg.insert({"gary", "helps", "Lena"}, 2);   // same entity, case-folded
    kg.insert({"Shannon", "is", "driven"}, 2);
    CHECK(kg.distinct_entity_count() == 4);  // gary, shannon, lena, driven
    CHECK(kg.distinct_action_count() == 2);  // helps, is
    CHECK(kg.size() == 3);
}

TEST_CASE("negative chapters are rejected") {
    TemporalKG kg;
    CHECK_THROWS_AS(kg.insert({"a", "b", "c"}, -1), InputError);
}
