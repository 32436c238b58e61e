#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "gcp/cli/config.hpp"

namespace gcp::cli {

struct RunResult {
    std::vector<std::filesystem::path> outputs;  // CSVs, then the manifest
    nlohmann::json manifest;
};

/// Executes the experiment, writes `<prefix>_*.csv` and `<prefix>_manifest.json`.
/// Throws DomainError/ConfigError for invalid setups and NumericalError for
/// failures during the computation.
RunResult run(const RunConfig& config, int threads, std::ostream& log);

/// Exit status for an exception escaping run or load: 2 for configuration
/// and domain errors, 3 for numerical failures, 1 otherwise.
int exit_code_for(const std::exception& error) noexcept;

}  // namespace gcp::cli
