#include "gcp/nucleus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gcp/csv.hpp"
#include "gcp/error.hpp"
#include "gcp/initial_condition.hpp"
#include "gcp/parallel.hpp"

namespace gcp::spatial {

namespace {

constexpr int kProbesPerRound = 3;

// Thrown from the snapshot observer to end a run once the outcome is known.
struct Decided {};

}  // namespace

std::string_view to_string(NucleusOutcome outcome) noexcept {
    switch (outcome) {
        case NucleusOutcome::extinct:
            return "extinct";
        case NucleusOutcome::spreading:
            return "spreading";
        case NucleusOutcome::undecided:
            break;
    }
    return "undecided";
}

PlugRun run_plug(const ModelParams& params, const Kernel& kernel, const Grid1D& grid, double width,
                 const NucleusOptions& options) {
    if (!params.has_sustaining_state()) {
        throw DomainError("nucleus experiment needs lambda > 1");
    }
    if (!(options.sample_interval > 0.0) || !(options.extinct_threshold > 0.0)) {
        throw DomainError("nucleus experiment needs sample_interval > 0 and extinct_threshold > 0");
    }
    const double h = grid.spacing();
    const double margin = options.margin > 0.0 ? options.margin : std::max(5.0 * kernel.support(), 10.0 * h);
    const double level = 0.5 * params.sustaining_active();
    const Field initial = make_field(PlugIc{width, options.center}, params, grid);

    SimulationOptions sim;
    sim.t_end = options.t_end;
    sim.dt = options.dt;
    sim.snapshot_stride = std::max(1, static_cast<int>(std::lround(options.sample_interval / options.dt)));

    PlugRun result;
    result.width = width;
    const auto inspect = [&](double t, const Field& field) {
        const auto row = field.row(field.stages());
        double peak = 0.0;
        std::size_t above = 0;
        for (const double v : row) {
            peak = std::max(peak, v);
            above += v > level ? 1 : 0;
        }
        result.t_decided = t;
        result.max_active = peak;
        result.active_extent = static_cast<double>(above) * h;
        if (peak < options.extinct_threshold) {
            result.outcome = NucleusOutcome::extinct;
            throw Decided{};
        }
        if (result.active_extent > width + 2.0 * margin) {
            result.outcome = NucleusOutcome::spreading;
            throw Decided{};
        }
    };
    try {
        run_spatial(initial, params, kernel, sim, inspect);
    } catch (const Decided&) {
    }
    return result;
}

NucleusBracket bracket_nucleus(const ModelParams& params, const Kernel& kernel, const Grid1D& grid, double w_lo,
                               double w_hi, int rounds, const NucleusOptions& options, int threads) {
    if (!(w_lo >= 0.0 && w_hi > w_lo)) {
        throw DomainError("nucleus bracket needs 0 <= w_lo < w_hi");
    }
    if (rounds < 0) {
        throw DomainError("rounds must be >= 0");
    }
    WorkerPool pool(std::clamp(threads, 1, kProbesPerRound));
    NucleusBracket out;

    const auto probe = [&](std::span<const double> widths) {
        std::vector<PlugRun> runs(widths.size());
        pool.parallel_for(widths.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                runs[i] = run_plug(params, kernel, grid, widths[i], options);
            }
        });
        out.runs.insert(out.runs.end(), runs.begin(), runs.end());
        return runs;
    };

    const std::array<double, 2> ends{w_lo, w_hi};
    const auto edge = probe(ends);
    if (edge[0].outcome != NucleusOutcome::extinct || edge[1].outcome != NucleusOutcome::spreading) {
        std::ostringstream msg;
        msg << "nucleus bracket endpoints do not straddle the threshold: w = " << w_lo << " is "
            << to_string(edge[0].outcome) << ", w = " << w_hi << " is " << to_string(edge[1].outcome);
        throw MeasurementError(msg.str());
    }
    double lo = w_lo;
    double hi = w_hi;
    for (int round = 0; round < rounds; ++round) {
        std::array<double, kProbesPerRound> widths{};
        for (int p = 0; p < kProbesPerRound; ++p) {
            widths[static_cast<std::size_t>(p)] = lo + (hi - lo) * (p + 1) / (kProbesPerRound + 1);
        }
        const auto runs = probe(widths);
        double new_lo = lo;
        double new_hi = hi;
        for (const PlugRun& run : runs) {
            if (run.outcome == NucleusOutcome::extinct) {
                new_lo = std::max(new_lo, run.width);
            }
        }
        for (const PlugRun& run : runs) {
            if (run.outcome == NucleusOutcome::spreading && run.width > new_lo) {
                new_hi = std::min(new_hi, run.width);
            }
        }
        lo = new_lo;
        hi = new_hi;
    }
    out.extinct_width = lo;
    out.spreading_width = hi;
    return out;
}

void write_nucleus_csv(std::ostream& out, const NucleusBracket& bracket) {
    out << "width,outcome,t_decided,max_active,active_extent\n";
    for (const PlugRun& run : bracket.runs) {
        out << csv::format(run.width) << ',' << to_string(run.outcome) << ',' << csv::format(run.t_decided) << ','
            << csv::format(run.max_active) << ',' << csv::format(run.active_extent) << '\n';
    }
}

}  // namespace gcp::spatial
