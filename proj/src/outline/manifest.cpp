#include "dome/outline/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "dome/errors.hpp"
#include "dome/hash.hpp"

namespace dome {

using nlohmann::json;

bool RunManifest::has_step(const std::string& step) const {
    return std::find(completed_steps.begin(), completed_steps.end(), step) !=
           completed_steps.end();
}

void RunManifest::mark_step(const std::string& step) {
    if (!has_step(step)) completed_steps.push_back(step);
}

void RunManifest::save(const std::string& path) const {
    json doc{{"run_id", run_id},
             {"created_at", created_at},
             {"config", config_snapshot},
             {"completed_steps", completed_steps},
             {"artifacts", artifacts},
             {"api_tallies", api_tallies},
             {"embed_calls", embed_calls}};
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw InputError("cannot write manifest: " + path);
        out << doc.dump(2) << "\n";
    }
    std::rename(tmp.c_str(), path.c_str());
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest: " + path);
    json doc;
    try {
        in >> doc;
        RunManifest m;
        m.run_id = doc.at("run_id").get<std::string>();
        m.created_at = doc.value("created_at", "");
        m.config_snapshot = doc.value("config", std::map<std::string, std::string>{});
        m.completed_steps = doc.value("completed_steps", std::vector<std::string>{});
        m.artifacts = doc.value("artifacts", std::map<std::string, std::string>{});
        m.api_tallies = doc.value("api_tallies", std::map<std::string, int>{});
        m.embed_calls = doc.value("embed_calls", 0);
        return m;
    } catch (const json::exception& e) {
        throw InputError("malformed manifest " + path + ": " + e.what());
    }
}

std::string make_run_id() {
    const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
    return to_hex(fnv1a64(std::to_string(now)));
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace dome
