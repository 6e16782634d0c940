#include "dome/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dome/errors.hpp"
#include "dome/text_util.hpp"

namespace dome {

void RunConfig::validate() const {
    provider().validate();
    if (embedder != "hash" && embedder != "http")
        throw InputError("embedder must be \"hash\" or \"http\", got " + embedder);
    if (embed_dimension < 1) throw InputError("embed_dimension must be >= 1");
    if (expansion_count < 1) throw InputError("expansion_count must be >= 1");
    if (threshold < 0.0 || threshold > 1.0) throw InputError("threshold must be in [0, 1]");
    if (top_k < 1) throw InputError("top_k must be >= 1");
    if (entropy_base != "e" && entropy_base != "2")
        throw InputError("entropy_base must be \"e\" or \"2\"");
    if (mode != "live" && mode != "replay")
        throw InputError("mode must be \"live\" or \"replay\", got " + mode);
    if (mode == "replay" && fixture_path.empty())
        throw InputError("replay mode requires a fixture path");
    if (chunk_size < 2) throw InputError("chunk_size must be >= 2");
}

ProviderConfig RunConfig::provider() const {
    return {endpoint, model, api_key_ref, temperature, max_tokens, retry_limit, timeout_seconds};
}

ProviderConfig RunConfig::embed_provider() const {
    ProviderConfig cfg = provider();
    if (!embed_endpoint.empty()) cfg.endpoint = embed_endpoint;
    cfg.model_name = embed_model;
    return cfg;
}

AnalyzerOptions RunConfig::analyzer_options(bool stub_judge) const {
    AnalyzerOptions options;
    options.grouping.consume = grouping_consume;
    if (!rule5_actions.empty()) {
        options.grouping.attributive_actions.clear();
        std::istringstream stream(rule5_actions);
        std::string action;
        while (std::getline(stream, action, ','))
            if (!trim(action).empty()) options.grouping.attributive_actions.push_back(trim(action));
    }
    options.include_premise = include_premise;
    options.chunk_size = chunk_size;
    if (stub_judge) options.stub_judge = default_stub_judge;
    return options;
}

std::map<std::string, std::string> RunConfig::snapshot() const {
    return {{"endpoint", endpoint},
            {"model", model},
            {"api_key_ref", api_key_ref},
            {"temperature", std::to_string(temperature)},
            {"max_tokens", std::to_string(max_tokens)},
            {"retry_limit", std::to_string(retry_limit)},
            {"timeout_seconds", std::to_string(timeout_seconds)},
            {"embedder", embedder},
            {"embed_endpoint", embed_endpoint},
            {"embed_model", embed_model},
            {"embed_dimension", std::to_string(embed_dimension)},
            {"expansion_count", std::to_string(expansion_count)},
            {"threshold", std::to_string(threshold)},
            {"top_k", std::to_string(top_k)},
            {"entropy_base", entropy_base},
            {"split_chapters", split_chapters ? "true" : "false"},
            {"mode", mode},
            {"fixture", fixture_path},
            {"grouping_consume", grouping_consume ? "true" : "false"},
            {"rule5_actions", rule5_actions},
            {"include_premise", include_premise ? "true" : "false"},
            {"chunk_size", std::to_string(chunk_size)}};
}

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = to_lower(trim(value));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError("config key " + key + ": expected a boolean, got \"" + value + "\"");
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        return std::stoi(value);
    } catch (const std::exception&) {
        throw InputError("config key " + key + ": expected an integer, got \"" + value + "\"");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        return std::stod(value);
    } catch (const std::exception&) {
        throw InputError("config key " + key + ": expected a number, got \"" + value + "\"");
    }
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "endpoint") config.endpoint = value;
    else if (key == "model") config.model = value;
    else if (key == "api_key_ref") config.api_key_ref = value;
    else if (key == "temperature") config.temperature = parse_real(key, value);
    else if (key == "max_tokens") config.max_tokens = parse_int(key, value);
    else if (key == "retry_limit") config.retry_limit = parse_int(key, value);
    else if (key == "timeout_seconds") config.timeout_seconds = parse_int(key, value);
    else if (key == "embedder") config.embedder = value;
    else if (key == "embed_endpoint") config.embed_endpoint = value;
    else if (key == "embed_model") config.embed_model = value;
    else if (key == "embed_dimension") config.embed_dimension = parse_int(key, value);
    else if (key == "expansion_count") config.expansion_count = parse_int(key, value);
    else if (key == "threshold") config.threshold = parse_real(key, value);
    else if (key == "top_k") config.top_k = parse_int(key, value);
    else if (key == "entropy_base") config.entropy_base = value;
    else if (key == "split_chapters") config.split_chapters = parse_bool(key, value);
    else if (key == "mode") config.mode = value;
    else if (key == "fixture") config.fixture_path = value;
    else if (key == "grouping_consume") config.grouping_consume = parse_bool(key, value);
    else if (key == "rule5_actions") config.rule5_actions = value;
    else if (key == "include_premise") config.include_premise = parse_bool(key, value);
    else if (key == "chunk_size") config.chunk_size = parse_int(key, value);
    else throw InputError("unknown config key: " + key);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    int lineno = 0;
    for (const std::string& raw : split_lines(text)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(lineno) +
                             ": expected key = value, got \"" + line + "\"");
        apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const ConfigOverrides& o) {
    RunConfig config = config_path ? load_config_file(*config_path) : RunConfig{};

    if (o.endpoint) config.endpoint = *o.endpoint;
    if (o.model) config.model = *o.model;
    if (o.api_key_ref) config.api_key_ref = *o.api_key_ref;
    if (o.temperature) config.temperature = *o.temperature;
    if (o.max_tokens) config.max_tokens = *o.max_tokens;
    if (o.retry_limit) config.retry_limit = *o.retry_limit;
    if (o.timeout_seconds) config.timeout_seconds = *o.timeout_seconds;
    if (o.embedder) config.embedder = *o.embedder;
    if (o.embed_endpoint) config.embed_endpoint = *o.embed_endpoint;
    if (o.embed_model) config.embed_model = *o.embed_model;
    if (o.embed_dimension) config.embed_dimension = *o.embed_dimension;
    if (o.expansion_count) config.expansion_count = *o.expansion_count;
    if (o.threshold) config.threshold = *o.threshold;
    if (o.top_k) config.top_k = *o.top_k;
    if (o.entropy_base) config.entropy_base = *o.entropy_base;
    if (o.mode) config.mode = *o.mode;
    if (o.fixture_path) config.fixture_path = *o.fixture_path;
    if (o.rule5_actions) config.rule5_actions = *o.rule5_actions;
    if (o.grouping_consume) config.grouping_consume = *o.grouping_consume;
    if (o.split_chapters) config.split_chapters = *o.split_chapters;
    if (o.include_premise) config.include_premise = *o.include_premise;
    if (o.chunk_size) config.chunk_size = *o.chunk_size;

    config.validate();

    // NO_NETWORK forces replay after validation: a missing fixture then means
    // an empty table, so any live call attempt dies with a fixture miss
    // instead of touching the network.
    const char* no_network = std::getenv("NO_NETWORK");
    if (no_network && std::string(no_network) == "1") config.mode = "replay";
    return config;
}

std::unique_ptr<Gateway> make_gateway(const RunConfig& config, TemplateCatalog catalog) {
    std::unique_ptr<ChatBackend> chat;
    if (config.mode == "replay") {
        FixtureTable table;
        if (!config.fixture_path.empty()) table = FixtureTable::load(config.fixture_path);
        chat = std::make_unique<ScriptedChatBackend>(std::move(table));
    } else {
        chat = std::make_unique<HttpChatBackend>();
    }

    std::unique_ptr<EmbeddingBackend> embed;
    if (config.embedder == "hash")
        embed = std::make_unique<HashMockEmbedder>(static_cast<std::size_t>(config.embed_dimension));
    else
        embed = std::make_unique<HttpEmbeddingBackend>();

    return std::make_unique<Gateway>(config.provider(), config.embed_provider(),
                                     std::move(catalog), std::move(chat), std::move(embed));
}

}  // namespace dome
