#include "dome/gateway/backends.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/hash.hpp"

// httplib is compiled in exactly one translation unit to keep builds fast.
#include <httplib.h>

namespace dome {

using nlohmann::json;

// ---------------------------------------------------------------------------
// FixtureTable
// ---------------------------------------------------------------------------

void FixtureTable::add(const std::string& template_id, const std::string& digest,
                       std::string response) {
    entries_[{template_id, digest}] = std::move(response);
}

void FixtureTable::add_default(const std::string& template_id, std::string response) {
    defaults_[template_id] = std::move(response);
}

void FixtureTable::remove(const std::string& template_id, const std::string& digest) {
    entries_.erase({template_id, digest});
}

const std::string& FixtureTable::lookup(const std::string& template_id,
                                        const std::string& digest) const {
    auto it = entries_.find({template_id, digest});
    if (it != entries_.end()) return it->second;
    auto dit = defaults_.find(template_id);
    if (dit != defaults_.end()) return dit->second;
    throw FixtureMissError(template_id, digest);
}

FixtureTable FixtureTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open fixture file: " + path);
    FixtureTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw InputError("fixture " + path + " line " + std::to_string(lineno) + ": " +
                             e.what());
        }
        const std::string template_id = record.at("template_id").get<std::string>();
        const std::string response = record.at("response").get<std::string>();
        if (record.value("default", false))
            table.add_default(template_id, response);
        else
            table.add(template_id, record.at("digest").get<std::string>(), response);
    }
    return table;
}

void FixtureTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write fixture file: " + path);
    for (const auto& [key, response] : entries_) {
        json record{{"template_id", key.first}, {"digest", key.second}, {"response", response}};
        out << record.dump() << "\n";
    }
    for (const auto& [template_id, response] : defaults_) {
        json record{{"template_id", template_id}, {"default", true}, {"response", response}};
        out << record.dump() << "\n";
    }
}

CompletionResult ScriptedChatBackend::complete_once(const ProviderConfig&,
                                                    const RenderedCall& call) {
    return {table_.lookup(call.template_id, call.digest), 0, 0};
}

// ---------------------------------------------------------------------------
// HTTP backends
// ---------------------------------------------------------------------------

namespace {

bool network_disabled() {
    const char* v = std::getenv("NO_NETWORK");
    return v != nullptr && std::string(v) == "1";
}

struct EndpointParts {
    std::string host;  // scheme://host[:port]
    std::string base;  // path prefix, may be empty
};

EndpointParts split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw InputError("endpoint must include a scheme: " + endpoint);
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string base = endpoint.substr(path_start);
    while (!base.empty() && base.back() == '/') base.pop_back();
    return {endpoint.substr(0, path_start), base};
}

std::string http_post(const ProviderConfig& config, const std::string& path,
                      const std::string& payload) {
    if (network_disabled())
        throw TransportError("NO_NETWORK=1 is set; live provider calls are disabled");
    auto [host, base] = split_endpoint(config.endpoint);
    httplib::Client client(host);
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_write_timeout(config.timeout_seconds, 0);

    httplib::Headers headers;
    const std::string key = config.resolve_api_key();
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    auto res = client.Post(base + path, headers, payload, "application/json");
    if (!res) throw TransportError(httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) throw ProviderError(res->status, res->body);
    return res->body;
}

}  // namespace

std::string build_chat_messages_json(const RenderedCall& call) {
    json messages = json::array();
    for (const ChatRound& round : call.history) {
        messages.push_back(json{{"role", "user"}, {"content", round.user}});
        messages.push_back(json{{"role", "assistant"}, {"content", round.assistant}});
    }
    messages.push_back(json{{"role", "user"}, {"content", call.prompt}});
    return messages.dump();
}

CompletionResult HttpChatBackend::complete_once(const ProviderConfig& config,
                                                const RenderedCall& call) {
    json payload{{"model", config.model_name},
                 {"messages", json::parse(build_chat_messages_json(call))},
                 {"temperature", config.temperature},
                 {"max_tokens", config.max_tokens}};
    const std::string body = http_post(config, "/chat/completions", payload.dump());
    try {
        json response = json::parse(body);
        CompletionResult result;
        result.text = response.at("choices").at(0).at("message").at("content").get<std::string>();
        if (response.contains("usage")) {
            result.prompt_tokens = response["usage"].value("prompt_tokens", 0);
            result.completion_tokens = response["usage"].value("completion_tokens", 0);
        }
        return result;
    } catch (const json::exception& e) {
        throw ProviderError(200, std::string("malformed completion response: ") + e.what());
    }
}

std::vector<double> HttpEmbeddingBackend::embed_once(const ProviderConfig& config,
                                                     const std::string& text) {
    json payload{{"model", config.model_name}, {"input", text}};
    const std::string body = http_post(config, "/embeddings", payload.dump());
    try {
        json response = json::parse(body);
        return response.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ProviderError(200, std::string("malformed embedding response: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// HashMockEmbedder
// ---------------------------------------------------------------------------

namespace {

// splitmix64: tiny, portable, well-distributed.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<double> HashMockEmbedder::embed_once(const ProviderConfig&, const std::string& text) {
    std::uint64_t state = fnv1a64(text);
    std::vector<double> v(dimension_);
    for (auto& x : v) {
        // uniform in [-1, 1) from the top 53 bits
        double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
        x = 2.0 * u - 1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (auto& x : v) x /= norm;
    else
        v[0] = 1.0;  // vanishingly unlikely, but keep the unit-vector contract
    return v;
}

}  // namespace dome
