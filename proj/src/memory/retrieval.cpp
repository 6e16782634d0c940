#include "dome/memory/retrieval.hpp"

#include <algorithm>
#include <regex>

#include "dome/errors.hpp"
#include "dome/memory/extraction.hpp"
#include "dome/text_util.hpp"

namespace dome {

std::string RelevantContext::joined() const {
    std::string out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i) out += '\n';
        out += sentences[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Relevance verdict parsing
// ---------------------------------------------------------------------------

ParsedRelevance parse_relevance_verdict(const std::string& completion) {
    ParsedRelevance parsed;
    parsed.score.rationale = trim(completion);

    // Part3 "Score: <n>" is the single mandated integer; take the last match.
    static const std::regex score_re(R"([Ss]core\s*[::]\s*(-?\d+))");
    std::optional<int> part3;
    for (auto it = std::sregex_iterator(completion.begin(), completion.end(), score_re);
         it != std::sregex_iterator(); ++it)
        part3 = std::stoi((*it)[1].str());

    // Part1 per-criterion booleans: "for criterion k. My result is: add (0 or 1)"
    static const std::regex criterion_re(
        R"([Cc]riterion\s*([1-5])\b[^\n]*?add\s*\(?\s*([01])\s*\)?)");
    std::array<std::optional<bool>, 5> part1;
    for (auto it = std::sregex_iterator(completion.begin(), completion.end(), criterion_re);
         it != std::sregex_iterator(); ++it) {
        const int idx = std::stoi((*it)[1].str()) - 1;
        if (!part1[static_cast<std::size_t>(idx)])
            part1[static_cast<std::size_t>(idx)] = ((*it)[2].str() == "1");
    }
    bool part1_complete = true;
    int part1_sum = 0;
    for (const auto& b : part1) {
        if (!b) { part1_complete = false; break; }
        part1_sum += *b ? 1 : 0;
    }

    // Part2 sum line, e.g. "1+1+1+0+0=3".
    static const std::regex sum_re(R"([01]\s*(?:\+\s*[01]){4}\s*=\s*(\d+))");
    std::smatch sum_match;
    std::optional<int> part2;
    if (std::regex_search(completion, sum_match, sum_re)) part2 = std::stoi(sum_match[1].str());

    if (!part3) {
        parsed.warnings.push_back("no \"Score:\" line in relevance verdict; scoring 0");
        parsed.score.total = 0;
        return parsed;
    }

    int total = *part3;
    if (total < 0 || total > 5) {
        parsed.warnings.push_back("score " + std::to_string(total) + " outside 0..5; clamped");
        total = std::clamp(total, 0, 5);
    }
    parsed.score.total = total;

    if (part2 && *part2 != total)
        parsed.warnings.push_back("Part2 sum " + std::to_string(*part2) +
                                  " contradicts Score: " + std::to_string(total) +
                                  "; Score wins");
    if (part1_complete) {
        if (part1_sum == total) {
            std::array<bool, 5> criteria{};
            for (std::size_t i = 0; i < 5; ++i) criteria[i] = *part1[i];
            parsed.score.criteria = criteria;
        } else {
            parsed.warnings.push_back("criteria breakdown sums to " + std::to_string(part1_sum) +
                                      ", contradicting Score: " + std::to_string(total) +
                                      "; breakdown dropped");
        }
    }
    return parsed;
}

// ---------------------------------------------------------------------------
// Query path
// ---------------------------------------------------------------------------

std::vector<QueryEntity> query_entities(const std::string& query_text, Gateway& gateway) {
    ExtractionResult extracted = extract_triples(query_text, gateway, "query");
    std::vector<QueryEntity> out;
    std::set<std::string> seen;
    for (const Triple& t : extracted.triples) {
        for (const std::string* field : {&t.subject, &t.object}) {
            const std::string key = normalize_key(*field);
            if (seen.insert(key).second) out.push_back({normalize_whitespace(*field), key});
        }
    }
    return out;
}

std::set<int> entity_retrieve(TemporalKG& kg, const std::vector<QueryEntity>& entities,
                              Gateway& embedder, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw InputError("threshold must be in [0, 1], got " + std::to_string(threshold));
    std::set<int> candidates;
    if (entities.empty()) return candidates;

    for (const auto& [stored_key, ids] : kg.entity_index()) {
        bool matched = false;
        for (const auto& q : entities) {
            if (q.key == stored_key) {  // exact match needs no embedding
                matched = true;
                break;
            }
        }
        if (!matched) {
            const EmbeddingVector& stored_vec =
                kg.embedding_for(stored_key, kg.display_form(stored_key), embedder);
            for (const auto& q : entities) {
                const EmbeddingVector& query_vec = kg.embedding_for(q.key, q.display, embedder);
                if (cosine_similarity(query_vec, stored_vec) >= threshold) {
                    matched = true;
                    break;
                }
            }
        }
        if (matched) candidates.insert(ids.begin(), ids.end());
    }
    return candidates;
}

std::vector<ScoredCandidate> semantic_filter(const std::string& query_text,
                                             const std::vector<StoredQuadruple>& candidates,
                                             Gateway& gateway,
                                             std::vector<std::string>* warnings) {
    std::vector<ScoredCandidate> scored;
    scored.reserve(candidates.size());
    for (const StoredQuadruple& quad : candidates) {
        ChatExchange exchange = gateway.complete(
            template_ids::kRelevanceScore,
            {{"outline", query_text}, {"triplesentence", quad.triple.verbalize()}}, "filter");
        ParsedRelevance parsed = parse_relevance_verdict(exchange.completion);
        if (warnings)
            for (const auto& w : parsed.warnings)
                warnings->push_back("candidate " + std::to_string(quad.id) + ": " + w);
        scored.push_back({quad, std::move(parsed.score)});
    }
    return scored;
}

RelevantContext select_topk(const std::vector<ScoredCandidate>& scored, int k) {
    if (k < 1) throw InputError("top-k requires k >= 1, got " + std::to_string(k));

    std::vector<ScoredCandidate> kept;
    for (const auto& s : scored)
        if (s.score.total > 0) kept.push_back(s);

    std::sort(kept.begin(), kept.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        if (a.score.total != b.score.total) return a.score.total > b.score.total;
        if (a.quadruple.chapter != b.quadruple.chapter)
            return a.quadruple.chapter > b.quadruple.chapter;  // recency wins ties
        return a.quadruple.id < b.quadruple.id;
    });
    if (kept.size() > static_cast<std::size_t>(k)) kept.resize(static_cast<std::size_t>(k));

    // Merge consecutive runs of the identical triple into one range statement.
    RelevantContext context;
    std::size_t i = 0;
    while (i < kept.size()) {
        std::size_t j = i + 1;
        const std::string run_key = kept[i].quadruple.triple.key();
        while (j < kept.size() && kept[j].quadruple.triple.key() == run_key) ++j;

        int lo = kept[i].quadruple.chapter, hi = kept[i].quadruple.chapter;
        std::vector<int> ids;
        for (std::size_t m = i; m < j; ++m) {
            lo = std::min(lo, kept[m].quadruple.chapter);
            hi = std::max(hi, kept[m].quadruple.chapter);
            ids.push_back(kept[m].quadruple.id);
        }
        const std::string base = kept[i].quadruple.triple.verbalize();
        if (j - i == 1)
            context.sentences.push_back(base + " in chapter " + std::to_string(lo));
        else
            context.sentences.push_back(base + " from chapter " + std::to_string(lo) +
                                        " to chapter " + std::to_string(hi));
        context.source_ids.push_back(std::move(ids));
        i = j;
    }
    return context;
}

RelevantContext query_relevant(TemporalKG& kg, const std::string& query_text, int k,
                               Gateway& gateway, double threshold,
                               std::vector<std::string>* warnings) {
    if (kg.empty()) return {};
    std::vector<QueryEntity> entities = query_entities(query_text, gateway);
    std::set<int> ids = entity_retrieve(kg, entities, gateway, threshold);
    if (ids.empty()) return {};
    std::vector<StoredQuadruple> candidates;
    candidates.reserve(ids.size());
    for (int id : ids) candidates.push_back(kg.by_id(id));  // std::set gives ascending id order
    std::vector<ScoredCandidate> scored = semantic_filter(query_text, candidates, gateway, warnings);
    return select_topk(scored, k);
}

}  // namespace dome
