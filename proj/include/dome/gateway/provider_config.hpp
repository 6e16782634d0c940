#pragma once

#include <string>

namespace dome {

/// Connection settings for one chat/embedding provider.
struct ProviderConfig {
    std::string endpoint;          // e.g. "http://localhost:8000/v1"
    std::string model_name;
    std::string api_key_ref;       // name of the environment variable holding the key
    double temperature = 0.5;
    int max_tokens = 1000;
    int retry_limit = 3;
    int timeout_seconds = 120;

    /// Throws InputError if any invariant is violated
    /// (temperature in [0,2], max_tokens >= 1, retry_limit in [0,10]).
    void validate() const;

    /// Resolves the API key from the environment; empty when unset.
    std::string resolve_api_key() const;
};

}  // namespace dome
