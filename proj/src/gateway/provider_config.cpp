#include "dome/gateway/provider_config.hpp"

#include <cstdlib>

#include "dome/errors.hpp"

namespace dome {

void ProviderConfig::validate() const {
    if (temperature < 0.0 || temperature > 2.0)
        throw InputError("temperature must be in [0, 2], got " + std::to_string(temperature));
    if (max_tokens < 1)
        throw InputError("max_tokens must be >= 1, got " + std::to_string(max_tokens));
    if (retry_limit < 0 || retry_limit > 10)
        throw InputError("retry_limit must be in [0, 10], got " + std::to_string(retry_limit));
    if (timeout_seconds <= 0)
        throw InputError("timeout must be positive, got " + std::to_string(timeout_seconds));
}

std::string ProviderConfig::resolve_api_key() const {
    if (api_key_ref.empty()) return {};
    const char* v = std::getenv(api_key_ref.c_str());
    return v ? std::string(v) : std::string();
}

}  // namespace dome
