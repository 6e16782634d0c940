#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dome/gateway/gateway.hpp"
#include "dome/memory/triple.hpp"

namespace dome {

/// The temporal knowledge graph: an append-only quadruple store with an
/// inverted entity index (subjects and objects) and an embedding cache keyed
/// by normalized entity string.
///
/// Ids are dense and insertion-ordered. Exact (triple, chapter) duplicates
/// are inserted once; the same triple at a different chapter is retained.
class TemporalKG {
public:
    /// Returns the id of the inserted quadruple, or -1 if it was an exact
    /// duplicate. Chapter must be >= 0 (0 is the premise).
    int insert(const Triple& triple, int chapter);

    const std::vector<StoredQuadruple>& quadruples() const { return quadruples_; }
    const StoredQuadruple& by_id(int id) const;
    bool empty() const { return quadruples_.empty(); }
    std::size_t size() const { return quadruples_.size(); }
    int max_chapter() const { return max_chapter_; }

    /// normalized entity -> ids of quadruples where it appears as subject or
    /// object.
    const std::map<std::string, std::set<int>>& entity_index() const { return entity_index_; }

    /// First-seen display form of a normalized entity.
    const std::string& display_form(const std::string& entity_key) const;

    /// Builds the index from scratch off the quadruple sequence; used by the
    /// index-soundness property test.
    std::map<std::string, std::set<int>> rebuild_entity_index() const;

    // ---- embedding cache ----

    /// Cached embedding for an entity, computing it through the gateway on a
    /// miss. Keyed by normalized entity string.
    const EmbeddingVector& embedding_for(const std::string& entity_key,
                                         const std::string& display, Gateway& gateway);
    bool has_embedding(const std::string& entity_key) const;
    std::size_t embedding_cache_size() const { return embedding_cache_.size(); }

    // ---- stats (inspect command) ----
    std::size_t distinct_entity_count() const { return entity_index_.size(); }
    std::size_t distinct_action_count() const;

    // ---- persistence ----

    /// Line-delimited records {"id", "subject", "action", "object",
    /// "chapter"}, insertion-ordered. Loading validates dense ids and
    /// reproduces them exactly.
    void save(const std::string& path) const;
    static TemporalKG load(const std::string& path);

    void save_embedding_cache(const std::string& path) const;
    void load_embedding_cache(const std::string& path);

private:
    void index_entity(const std::string& display, int id);

    std::vector<StoredQuadruple> quadruples_;
    std::set<std::string> dedup_;  // triple key + chapter
    std::map<std::string, std::set<int>> entity_index_;
    std::map<std::string, std::string> display_forms_;
    std::map<std::string, EmbeddingVector> embedding_cache_;
    int max_chapter_ = 0;
};

/// Stores one text at the given chapter: one extraction call, then one
/// insert per parsed triple. Returns the number of quadruples actually
/// inserted (after dedup). Warnings from the parse are appended to
/// `warnings` when non-null.
int store_text(TemporalKG& kg, const std::string& text, int chapter, Gateway& gateway,
               std::vector<std::string>* warnings = nullptr);

}  // namespace dome
