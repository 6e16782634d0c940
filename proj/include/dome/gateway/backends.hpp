#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dome/gateway/provider_config.hpp"

namespace dome {

/// One prior user/assistant round. Calls are stateless by default; a bounded
/// history (at most two rounds) exists only for the memory-ablation mode.
struct ChatRound {
    std::string user;
    std::string assistant;
};

/// One rendered chat call, as handed to a backend. The template id and
/// binding digest identify the call for replay fixtures and the trace; the
/// digest covers the history, so replayed histories stay distinguishable.
struct RenderedCall {
    std::string template_id;
    std::string digest;
    std::string prompt;
    std::vector<ChatRound> history;
};

struct CompletionResult {
    std::string text;
    int prompt_tokens = 0;
    int completion_tokens = 0;
};

/// Transport for chat completions. Implementations perform exactly one
/// attempt per call; retry policy lives in the gateway.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual CompletionResult complete_once(const ProviderConfig& config,
                                           const RenderedCall& call) = 0;
};

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::vector<double> embed_once(const ProviderConfig& config,
                                           const std::string& text) = 0;
};

// ---------------------------------------------------------------------------
// Replay fixtures
// ---------------------------------------------------------------------------

/// Table of canned completions keyed by (template_id, binding digest), with
/// optional per-template defaults. File format is line-delimited JSON:
///   {"template_id": ..., "digest": ..., "response": ...}
///   {"template_id": ..., "default": true, "response": ...}
class FixtureTable {
public:
    void add(const std::string& template_id, const std::string& digest, std::string response);
    void add_default(const std::string& template_id, std::string response);
    void remove(const std::string& template_id, const std::string& digest);

    /// Exact entry first, then the template default. Throws FixtureMissError.
    const std::string& lookup(const std::string& template_id, const std::string& digest) const;

    static FixtureTable load(const std::string& path);
    void save(const std::string& path) const;

    std::size_t size() const { return entries_.size() + defaults_.size(); }

private:
    std::map<std::pair<std::string, std::string>, std::string> entries_;
    std::map<std::string, std::string> defaults_;
};

class ScriptedChatBackend : public ChatBackend {
public:
    explicit ScriptedChatBackend(FixtureTable table) : table_(std::move(table)) {}

    CompletionResult complete_once(const ProviderConfig& config,
                                   const RenderedCall& call) override;

    const FixtureTable& table() const { return table_; }

private:
    FixtureTable table_;
};

// ---------------------------------------------------------------------------
// OpenAI-compatible HTTP transport
// ---------------------------------------------------------------------------

/// The messages array for one call: history rounds (if any), then the prompt
/// as the final user message. Exposed for tests.
std::string build_chat_messages_json(const RenderedCall& call);

/// POSTs to <endpoint>/chat/completions with a single user message (plus the
/// bounded history in ablation mode). Refuses to run when NO_NETWORK=1 is
/// set.
class HttpChatBackend : public ChatBackend {
public:
    CompletionResult complete_once(const ProviderConfig& config,
                                   const RenderedCall& call) override;
};

/// POSTs to <endpoint>/embeddings.
class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    std::vector<double> embed_once(const ProviderConfig& config,
                                   const std::string& text) override;
};

// ---------------------------------------------------------------------------
// Deterministic mock embedder
// ---------------------------------------------------------------------------

/// Maps text to a unit vector seeded by the text digest. Identical text gives
/// an identical vector on every platform (no std::random distributions,
/// which are implementation-defined).
class HashMockEmbedder : public EmbeddingBackend {
public:
    explicit HashMockEmbedder(std::size_t dimension = 32) : dimension_(dimension) {}

    std::vector<double> embed_once(const ProviderConfig& config,
                                   const std::string& text) override;

    std::size_t dimension() const { return dimension_; }

private:
    std::size_t dimension_;
};

}  // namespace dome
