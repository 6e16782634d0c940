#include "dome/gateway/gateway.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/hash.hpp"
#include "dome/text_util.hpp"

namespace dome {

double EmbeddingVector::magnitude() const {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension() || a.values.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

void CallTrace::append(CallRecord record) {
    record.seq = next_seq_.fetch_add(1);
    std::lock_guard<std::mutex> lock(mutex_);
    if (sink_) {
        nlohmann::json line{{"seq", record.seq},
                            {"kind", record.kind},
                            {"template_id", record.template_id},
                            {"digest", record.digest},
                            {"purpose", record.purpose},
                            {"run", run_tag_}};
        (*sink_) << line.dump() << "\n";
        sink_->flush();
    }
    records_.push_back(std::move(record));
}

std::vector<CallRecord> CallTrace::snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return records_;
}

std::size_t CallTrace::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return records_.size();
}

void CallTrace::set_sink(std::ostream* sink, std::string run_tag) {
    std::lock_guard<std::mutex> lock(mutex_);
    sink_ = sink;
    run_tag_ = std::move(run_tag);
}

Gateway::Gateway(ProviderConfig chat_config, ProviderConfig embed_config, TemplateCatalog catalog,
                 std::unique_ptr<ChatBackend> chat_backend,
                 std::unique_ptr<EmbeddingBackend> embedding_backend)
    : config_(std::move(chat_config)),
      embed_config_(std::move(embed_config)),
      catalog_(std::move(catalog)),
      chat_backend_(std::move(chat_backend)),
      embedding_backend_(std::move(embedding_backend)) {
    config_.validate();
    embed_config_.validate();
    sleeper_ = [](int ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); };
}

Gateway::Gateway(ProviderConfig config, TemplateCatalog catalog,
                 std::unique_ptr<ChatBackend> chat_backend,
                 std::unique_ptr<EmbeddingBackend> embedding_backend)
    : Gateway(config, config, std::move(catalog), std::move(chat_backend),
              std::move(embedding_backend)) {}

void Gateway::set_sleeper(std::function<void(int)> sleeper) { sleeper_ = std::move(sleeper); }

ChatExchange Gateway::complete(const std::string& template_id, const Bindings& bindings,
                               const std::string& purpose) {
    return complete_with_history(template_id, bindings, {}, purpose);
}

ChatExchange Gateway::complete_with_history(const std::string& template_id,
                                            const Bindings& bindings,
                                            const std::vector<ChatRound>& history,
                                            const std::string& purpose) {
    if (history.size() > 2)
        throw InputError("history is bounded to 2 rounds, got " +
                         std::to_string(history.size()));
    const PromptTemplate& tmpl = catalog_.get(template_id);

    // Reserved \x01 names cannot collide with placeholder names, which are
    // restricted to [A-Za-z0-9_ ].
    Bindings digest_view = bindings;
    for (std::size_t i = 0; i < history.size(); ++i) {
        digest_view["\x01history_" + std::to_string(i) + "_user"] = history[i].user;
        digest_view["\x01history_" + std::to_string(i) + "_assistant"] = history[i].assistant;
    }
    RenderedCall call{template_id, binding_digest(digest_view), render_template(tmpl, bindings),
                      history};

    CompletionResult result;
    int attempt = 0;
    int backoff_ms = 1000;
    for (;;) {
        ++attempt;
        try {
            result = chat_backend_->complete_once(config_, call);
            break;
        } catch (const TransportError&) {
            if (attempt > config_.retry_limit) throw;
            sleeper_(backoff_ms);
            backoff_ms = std::min(backoff_ms * 2, 30000);
        }
    }
    if (trim(result.text).empty()) throw EmptyCompletionError();

    trace_.append({0, "chat", template_id, call.digest, purpose, call.prompt});
    return ChatExchange{template_id,  bindings,
                        call.prompt,  result.text,
                        result.prompt_tokens, result.completion_tokens,
                        attempt};
}

EmbeddingVector Gateway::embed(const std::string& text, const std::string& purpose) {
    if (text.empty()) throw InputError("cannot embed empty text");
    std::vector<double> values = embedding_backend_->embed_once(embed_config_, text);
    {
        std::lock_guard<std::mutex> lock(embed_mutex_);
        if (!embed_dimension_)
            embed_dimension_ = values.size();
        else if (*embed_dimension_ != values.size())
            throw DimensionMismatchError(*embed_dimension_, values.size());
    }
    trace_.append({0, "embed", "", text_digest(text), purpose, ""});
    return EmbeddingVector{std::move(values)};
}

}  // namespace dome
