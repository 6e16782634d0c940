#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dome {

/// Resumable-run state: which steps completed, where the artifacts live, and
/// cumulative API-call tallies. The manifest is the only artifact that
/// carries timestamps.
struct RunManifest {
    std::string run_id;
    std::string created_at;
    std::map<std::string, std::string> config_snapshot;
    std::vector<std::string> completed_steps;
    std::map<std::string, std::string> artifacts;   // logical name -> path
    std::map<std::string, int> api_tallies;         // template_id -> calls
    int embed_calls = 0;

    bool has_step(const std::string& step) const;
    void mark_step(const std::string& step);

    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

std::string make_run_id();
std::string iso_timestamp();

}  // namespace dome
