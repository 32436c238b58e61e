#pragma once

#include <ostream>
#include <string_view>
#include <vector>

#include "gcp/grid.hpp"
#include "gcp/kernel.hpp"
#include "gcp/model.hpp"
#include "gcp/spatial.hpp"

namespace gcp::spatial {

// Plug of sustaining state in inert surroundings: does it die out or spread?

enum class NucleusOutcome { extinct, spreading, undecided };

std::string_view to_string(NucleusOutcome outcome) noexcept;

struct NucleusOptions {
    double t_end = 200.0;
    double dt = kDefaultSpatialDt;
    double sample_interval = 1.0;
    double extinct_threshold = 1e-6;  // max v_k below this counts as extinct
    double margin = 0.0;  // <= 0: max(5 kernel half-widths, 10 grid spacings) on each side
    double center = 0.0;
};

struct PlugRun {
    double width = 0.0;
    NucleusOutcome outcome = NucleusOutcome::undecided;
    double t_decided = 0.0;  // t_end when undecided
    double max_active = 0.0;  // at t_decided
    double active_extent = 0.0;  // measure of {v_k > v_bar_k / 2} at t_decided
};

/// Runs one plug until the active stage falls below the extinction threshold
/// everywhere, or the super-level set {v_k > v_bar_k / 2} exceeds the plug
/// width by the margin on both sides, or t_end is reached. Needs lambda > 1.
PlugRun run_plug(const ModelParams& params, const Kernel& kernel, const Grid1D& grid, double width,
                 const NucleusOptions& options = {});

struct NucleusBracket {
    double extinct_width = 0.0;
    double spreading_width = 0.0;
    std::vector<PlugRun> runs;  // in evaluation order
};

/// Narrows [w_lo, w_hi] with three parallel probes per round. Requires
/// w_lo to go extinct and w_hi to spread; throws MeasurementError otherwise.
/// Probe positions do not depend on the thread count, so results are
/// identical for any number of workers.
NucleusBracket bracket_nucleus(const ModelParams& params, const Kernel& kernel, const Grid1D& grid, double w_lo,
                               double w_hi, int rounds, const NucleusOptions& options = {}, int threads = 1);

/// Columns width, outcome, t_decided, max_active, active_extent.
void write_nucleus_csv(std::ostream& out, const NucleusBracket& bracket);

}  // namespace gcp::spatial
