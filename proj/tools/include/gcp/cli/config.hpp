#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gcp/grid.hpp"
#include "gcp/initial_condition.hpp"
#include "gcp/kernel.hpp"
#include "gcp/model.hpp"

namespace gcp::cli {

enum class Experiment { uniform, basin, spectrum, spatial, front, stationary, nucleus };

std::string_view to_string(Experiment experiment) noexcept;

struct Numerics {
    double dt = 0.0;  // 0: experiment default
    double t_end = 0.0;
    int snapshot_stride = 1;
    double tol = 0.0;
    int resolution = 200;
    int n_modes = 50;
    int max_iter = 10000;
    double sample_interval = 1.0;
    double transient_fraction = 0.25;
    double w_lo = 0.0;
    double w_hi = 0.0;
    int rounds = 4;
    double extinct_threshold = 1e-6;
};

struct RunConfig {
    Experiment experiment = Experiment::uniform;
    ModelParams model{1, 1.0};
    std::optional<Kernel> kernel;
    std::optional<Grid1D> grid;
    std::optional<spatial::InitialCondition> ic;
    Numerics numerics;
    std::string prefix;
    nlohmann::json resolved;  // input document with defaults filled in
};

/// Applies `key=value` overrides; the key is a dotted path and the value is
/// parsed as JSON, falling back to a string. Throws ConfigError.
void apply_overrides(nlohmann::json& document, const std::vector<std::string>& overrides);

/// Validates the document and builds every object the experiment needs.
/// Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& document);

/// Reads, overrides and parses a config file.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace gcp::cli
