#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "dome/conflict/analyzer.hpp"
#include "dome/gateway/gateway.hpp"
#include "dome/gateway/provider_config.hpp"

namespace dome {

/// Flat run configuration. Precedence: command-line flags > config file >
/// defaults. NO_NETWORK=1 in the environment forces replay mode.
struct RunConfig {
    // chat provider
    std::string endpoint = "http://localhost:8000/v1";
    std::string model = "qwen1.5-72b-chat";
    std::string api_key_ref = "DOME_API_KEY";
    double temperature = 0.5;
    int max_tokens = 1000;
    int retry_limit = 3;
    int timeout_seconds = 120;

    // embedding provider
    std::string embedder = "hash";  // "hash" (deterministic mock) or "http"
    std::string embed_endpoint;     // defaults to `endpoint`
    std::string embed_model = "bge-large-en-v1.5";
    int embed_dimension = 32;       // hash mock only

    // pipeline
    int expansion_count = 3;
    double threshold = 0.75;
    int top_k = 10;

    // metrics
    std::string entropy_base = "e";
    bool split_chapters = true;  // bigrams do not cross chapter boundaries

    // mode
    std::string mode = "live";  // "live" or "replay"
    std::string fixture_path;

    // analyzer
    bool grouping_consume = true;
    std::string rule5_actions;  // comma-separated override of the attributive set
    bool include_premise = true;
    int chunk_size = 25;

    void validate() const;

    ProviderConfig provider() const;
    ProviderConfig embed_provider() const;
    AnalyzerOptions analyzer_options(bool stub_judge) const;
    std::map<std::string, std::string> snapshot() const;
};

/// Optional command-line overrides, one per config key.
struct ConfigOverrides {
    std::optional<std::string> endpoint, model, api_key_ref, embedder, embed_endpoint,
        embed_model, entropy_base, mode, fixture_path, rule5_actions;
    std::optional<double> temperature, threshold;
    std::optional<int> max_tokens, retry_limit, timeout_seconds, embed_dimension,
        expansion_count, top_k, chunk_size;
    std::optional<bool> grouping_consume, include_premise, split_chapters;
};

/// Parses a `key = value` config file ('#' comments, blank lines allowed).
/// Unknown keys are errors.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// defaults -> file (optional) -> overrides -> NO_NETWORK -> validate.
RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const ConfigOverrides& overrides);

/// Builds the gateway for the configured mode: scripted backend + fixture in
/// replay, OpenAI-compatible HTTP in live; hash-mock or HTTP embedder.
std::unique_ptr<Gateway> make_gateway(const RunConfig& config, TemplateCatalog catalog);

}  // namespace dome
