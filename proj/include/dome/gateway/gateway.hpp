#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dome/gateway/backends.hpp"
#include "dome/gateway/provider_config.hpp"
#include "dome/gateway/templates.hpp"

namespace dome {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const { return values.size(); }
    double magnitude() const;
};

/// Cosine similarity; 0 when either vector has zero magnitude.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// One stateless prompt -> completion round.
struct ChatExchange {
    std::string template_id;
    Bindings bindings;
    std::string rendered_prompt;
    std::string completion;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    int attempt_count = 1;
};

struct CallRecord {
    std::uint64_t seq = 0;
    std::string kind;         // "chat" or "embed"
    std::string template_id;  // empty for embed calls
    std::string digest;       // binding digest (chat) or text digest (embed)
    std::string purpose;      // caller-supplied tag, e.g. "kg_construction"
    std::string prompt;       // rendered prompt (chat only); kept in memory, not persisted
};

/// Append-only log of successful provider calls. Sequence numbers are
/// assigned atomically; appends are safe from concurrent callers.
class CallTrace {
public:
    void append(CallRecord record);
    std::vector<CallRecord> snapshot() const;
    std::size_t size() const;

    /// Every appended record is also written to this stream as one JSON line
    /// (seq, kind, template_id, digest, purpose, run tag). Prompts stay in
    /// memory only.
    void set_sink(std::ostream* sink, std::string run_tag);

private:
    mutable std::mutex mutex_;
    std::vector<CallRecord> records_;
    std::atomic<std::uint64_t> next_seq_{1};
    std::ostream* sink_ = nullptr;
    std::string run_tag_;
};

/// Uniform stateless access to one chat provider and one embedding provider.
/// Every call renders a catalog template, dispatches to the backend with
/// retry-on-transport-error, and records a trace entry on success.
class Gateway {
public:
    /// Chat and embedding providers may differ (endpoint, model); the
    /// single-config overload uses one for both.
    Gateway(ProviderConfig chat_config, ProviderConfig embed_config, TemplateCatalog catalog,
            std::unique_ptr<ChatBackend> chat_backend,
            std::unique_ptr<EmbeddingBackend> embedding_backend);
    Gateway(ProviderConfig config, TemplateCatalog catalog,
            std::unique_ptr<ChatBackend> chat_backend,
            std::unique_ptr<EmbeddingBackend> embedding_backend);

    ChatExchange complete(const std::string& template_id, const Bindings& bindings,
                          const std::string& purpose = "");

    /// Memory-ablation variant: carries at most two prior rounds. The binding
    /// digest folds the history in, so fixtures distinguish the calls.
    ChatExchange complete_with_history(const std::string& template_id, const Bindings& bindings,
                                       const std::vector<ChatRound>& history,
                                       const std::string& purpose = "");

    EmbeddingVector embed(const std::string& text, const std::string& purpose = "");

    const TemplateCatalog& catalog() const { return catalog_; }
    const ProviderConfig& config() const { return config_; }
    const ProviderConfig& embed_config() const { return embed_config_; }
    CallTrace& trace() { return trace_; }
    const CallTrace& trace() const { return trace_; }

    /// Replaces the backoff sleep (tests inject a no-op).
    void set_sleeper(std::function<void(int /*milliseconds*/)> sleeper);

private:
    ProviderConfig config_;
    ProviderConfig embed_config_;
    TemplateCatalog catalog_;
    std::unique_ptr<ChatBackend> chat_backend_;
    std::unique_ptr<EmbeddingBackend> embedding_backend_;
    CallTrace trace_;
    std::function<void(int)> sleeper_;
    std::optional<std::size_t> embed_dimension_;
    std::mutex embed_mutex_;
};

}  // namespace dome
