#include "dome/memory/kg.hpp"

#include <fstream>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/memory/extraction.hpp"
#include "dome/text_util.hpp"

namespace dome {

using nlohmann::json;

int TemporalKG::insert(const Triple& triple, int chapter) {
    if (chapter < 0) throw InputError("chapter must be >= 0, got " + std::to_string(chapter));
    const std::string dedup_key = triple.key() + '\x1e' + std::to_string(chapter);
    if (!dedup_.insert(dedup_key).second) return -1;

    const int id = static_cast<int>(quadruples_.size());
    quadruples_.push_back({id, triple, chapter});
    index_entity(triple.subject, id);
    index_entity(triple.object, id);
    if (chapter > max_chapter_) max_chapter_ = chapter;
    return id;
}

void TemporalKG::index_entity(const std::string& display, int id) {
    const std::string key = normalize_key(display);
    entity_index_[key].insert(id);
    display_forms_.emplace(key, normalize_whitespace(display));
}

const StoredQuadruple& TemporalKG::by_id(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= quadruples_.size())
        throw InputError("no quadruple with id " + std::to_string(id));
    return quadruples_[static_cast<std::size_t>(id)];
}

const std::string& TemporalKG::display_form(const std::string& entity_key) const {
    auto it = display_forms_.find(entity_key);
    if (it == display_forms_.end()) throw InputError("unknown entity: " + entity_key);
    return it->second;
}

std::map<std::string, std::set<int>> TemporalKG::rebuild_entity_index() const {
    std::map<std::string, std::set<int>> index;
    for (const auto& q : quadruples_) {
        index[normalize_key(q.triple.subject)].insert(q.id);
        index[normalize_key(q.triple.object)].insert(q.id);
    }
    return index;
}

const EmbeddingVector& TemporalKG::embedding_for(const std::string& entity_key,
                                                 const std::string& display, Gateway& gateway) {
    auto it = embedding_cache_.find(entity_key);
    if (it != embedding_cache_.end()) return it->second;
    EmbeddingVector vec = gateway.embed(display, "embed_entity");
    return embedding_cache_.emplace(entity_key, std::move(vec)).first->second;
}

bool TemporalKG::has_embedding(const std::string& entity_key) const {
    return embedding_cache_.count(entity_key) > 0;
}

std::size_t TemporalKG::distinct_action_count() const {
    std::set<std::string> actions;
    for (const auto& q : quadruples_) actions.insert(normalize_key(q.triple.action));
    return actions.size();
}

void TemporalKG::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write KG file: " + path);
    for (const auto& q : quadruples_) {
        json record{{"id", q.id},
                    {"subject", q.triple.subject},
                    {"action", q.triple.action},
                    {"object", q.triple.object},
                    {"chapter", q.chapter}};
        out << record.dump() << "\n";
    }
}

TemporalKG TemporalKG::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open KG file: " + path);
    TemporalKG kg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw InputError("KG file " + path + " line " + std::to_string(lineno) +
                             ": malformed record: " + e.what());
        }
        Triple triple;
        int id, chapter;
        try {
            id = record.at("id").get<int>();
            triple.subject = record.at("subject").get<std::string>();
            triple.action = record.at("action").get<std::string>();
            triple.object = record.at("object").get<std::string>();
            chapter = record.at("chapter").get<int>();
        } catch (const json::exception& e) {
            throw InputError("KG file " + path + " line " + std::to_string(lineno) +
                             ": missing field: " + e.what());
        }
        const int assigned = kg.insert(triple, chapter);
        if (assigned != id)
            throw InputError("KG file " + path + " line " + std::to_string(lineno) +
                             ": ids not dense/insertion-ordered (expected " +
                             std::to_string(assigned) + ", got " + std::to_string(id) + ")");
    }
    return kg;
}

void TemporalKG::save_embedding_cache(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write embedding cache: " + path);
    for (const auto& [entity, vec] : embedding_cache_) {
        json record{{"entity", entity}, {"vector", vec.values}};
        out << record.dump() << "\n";
    }
}

void TemporalKG::load_embedding_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open embedding cache: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            json record = json::parse(line);
            embedding_cache_[record.at("entity").get<std::string>()] =
                EmbeddingVector{record.at("vector").get<std::vector<double>>()};
        } catch (const json::exception& e) {
            throw InputError("embedding cache " + path + " line " + std::to_string(lineno) + ": " +
                             e.what());
        }
    }
}

int store_text(TemporalKG& kg, const std::string& text, int chapter, Gateway& gateway,
               std::vector<std::string>* warnings) {
    ExtractionResult extracted = extract_triples(text, gateway, "kg_construction");
    if (warnings)
        warnings->insert(warnings->end(), extracted.warnings.begin(), extracted.warnings.end());
    int inserted = 0;
    for (const Triple& triple : extracted.triples)
        if (kg.insert(triple, chapter) >= 0) ++inserted;
    return inserted;
}

}  // namespace dome
