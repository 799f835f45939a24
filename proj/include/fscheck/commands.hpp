#ifndef FSCHECK_COMMANDS_HPP
#define FSCHECK_COMMANDS_HPP

#include "fscheck/dsl.hpp"

#include <json.hpp>

namespace fscheck {

struct RunOptions {
    int depth = 8;   // power / probe searches
    int levels = 3;  // truncation levels
    int tdeg = 3;    // T-block degree bound for bi-truncations
    std::uint64_t seed = 0;
    int perturb = 0; // randomized perturbation reruns for class invariance
    bool timing = false;
};

struct RunResult {
    nlohmann::json report;
    int exit_code = 0; // 0 definite, 1 usage, 2 diagnostics, 3 indeterminate
};

// Execute one command against a parsed workspace.
RunResult run_command(const dsl::Workspace &ws, const std::string &command, const RunOptions &opts);

// Parse + run, mapping parse failures to diagnostics reports.
RunResult run_source(const std::string &source, const std::string &command, const RunOptions &opts);

nlohmann::json workspace_summary(const dsl::Workspace &ws);

} // namespace fscheck

#endif
