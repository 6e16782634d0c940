#pragma once

#include <optional>
#include <string>

#include "dome/cli/config.hpp"

namespace dome::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;          // unreadable/malformed inputs
inline constexpr int kExitProvider = 3;       // transport, provider, fixture miss
inline constexpr int kExitParseContract = 4;  // outline/extraction/verdict contract failures

/// Full CLI entry point (subcommands generate/analyze/eval/kg).
int run(int argc, const char* const* argv);

// Individual commands; they print results to stdout, warnings and errors to
// stderr, and return an exit code.

int cmd_generate(const std::string& premise_path, const RunConfig& config,
                 const std::string& out_dir);

int cmd_analyze(const std::string& kg_path, const RunConfig& config, const std::string& out_path,
                bool stub_judge);

int cmd_eval(const std::string& story_path, const std::optional<std::string>& kg_path,
             const RunConfig& config, const std::optional<std::string>& out_path,
             bool stub_judge);

int cmd_kg_inspect(const std::string& kg_path);

int cmd_kg_query(const std::string& kg_path, const std::string& query_text,
                 const RunConfig& config);

}  // namespace dome::cli
