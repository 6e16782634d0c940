#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dome/gateway/gateway.hpp"
#include "dome/memory/kg.hpp"
#include "dome/memory/triple.hpp"

namespace dome {

/// An entity mentioned by a query: display form plus the normalized key used
/// for matching.
struct QueryEntity {
    std::string display;
    std::string key;

    bool operator==(const QueryEntity& other) const { return key == other.key; }
};

/// Semantic-relevance verdict for one candidate, 0..5. The per-criterion
/// breakdown (subject, object, action, event, usefulness) is kept only when
/// it parses and agrees with the authoritative "Score:" line.
struct RelevanceScore {
    int total = 0;
    std::optional<std::array<bool, 5>> criteria;
    std::string rationale;
};

struct ParsedRelevance {
    RelevanceScore score;
    std::vector<std::string> warnings;
};

/// Parses the three-part relevance completion. The Part3 "Score:" integer is
/// authoritative; a contradictory Part1/Part2 drops the criteria breakdown
/// with a warning, and a completion with no parseable score degrades to 0.
ParsedRelevance parse_relevance_verdict(const std::string& completion);

struct ScoredCandidate {
    StoredQuadruple quadruple;
    RelevanceScore score;
};

/// Concise query-relevant content: one natural-language statement per
/// selected fact (or merged run of facts), each backed by quadruple ids.
struct RelevantContext {
    std::vector<std::string> sentences;
    std::vector<std::vector<int>> source_ids;

    bool empty() const { return sentences.empty(); }
    std::string joined() const;  // sentences joined by newlines
};

/// Extracts triples from the query text and returns the union of their
/// subjects and objects (unique by normalized key, first-seen display form,
/// insertion order). Propagates ExtractionEmptyError.
std::vector<QueryEntity> query_entities(const std::string& query_text, Gateway& gateway);

/// Entity-based candidate retrieval: a stored quadruple is a candidate iff
/// one of its entities (subject or object) exactly matches a query entity,
/// or has cosine similarity >= threshold with one (inclusive boundary).
/// Exact matches qualify without an embedding call; embeddings go through
/// the KG cache.
std::set<int> entity_retrieve(TemporalKG& kg, const std::vector<QueryEntity>& entities,
                              Gateway& embedder, double threshold);

/// One scoring call per candidate, its triple verbalized as
/// "subject action object". Results keep candidate order. Per-candidate
/// parse failures degrade to score 0 with a warning; nothing throws.
std::vector<ScoredCandidate> semantic_filter(const std::string& query_text,
                                             const std::vector<StoredQuadruple>& candidates,
                                             Gateway& gateway,
                                             std::vector<std::string>* warnings = nullptr);

/// Orders by (score desc, chapter desc, id asc), drops zero scores, takes the
/// first k, then merges consecutive runs of the identical triple into one
/// range statement ("s a o from chapter A to chapter B"); singletons become
/// "s a o in chapter N".
RelevantContext select_topk(const std::vector<ScoredCandidate>& scored, int k);

/// Full MEM query path: query_entities -> entity_retrieve -> semantic_filter
/// -> select_topk. An empty KG or an empty candidate set yields an empty
/// context without provider calls. The gateway serves both the chat and
/// embedding sides.
RelevantContext query_relevant(TemporalKG& kg, const std::string& query_text, int k,
                               Gateway& gateway, double threshold,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace dome
