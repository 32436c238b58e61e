#include "gcp/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "gcp/basin.hpp"
#include "gcp/csv.hpp"
#include "gcp/error.hpp"
#include "gcp/front.hpp"
#include "gcp/nucleus.hpp"
#include "gcp/parallel.hpp"
#include "gcp/spatial.hpp"
#include "gcp/stability.hpp"
#include "gcp/stationary.hpp"
#include "gcp/uniform.hpp"

namespace gcp::cli {

using nlohmann::json;

namespace {

// Non-finite values have no JSON representation; they become null.
json number(double value) {
    return std::isfinite(value) ? json(value) : json(nullptr);
}

json invariants_json(const InvariantSummary& s) {
    return json{{"max_sum_deviation", number(s.max_sum_deviation)}, {"min_component", number(s.min_component)}};
}

class Outputs {
public:
    Outputs(const std::string& prefix, RunResult& result) : prefix_(prefix), result_(result) {}

    std::ofstream open(const std::string& suffix) {
        const std::filesystem::path path = prefix_ + "_" + suffix;
        if (path.has_parent_path()) {
            std::filesystem::create_directories(path.parent_path());
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw ConfigError("cannot write output file " + path.string());
        }
        result_.outputs.push_back(path);
        return out;
    }

private:
    std::string prefix_;
    RunResult& result_;
};

struct Outcome {
    json headline = json::object();
    std::optional<InvariantSummary> invariants;
};

Outcome run_uniform(const RunConfig& cfg, Outputs& out) {
    const auto& ic = std::get<spatial::UniformIc>(*cfg.ic);
    const PopulationState v_init(ic.v);
    const ModelParams& params = cfg.model;
    const int k = params.k();
    const auto traj = uniform::simulate_uniform(params, v_init, cfg.numerics.t_end, cfg.numerics.dt,
                                                cfg.numerics.snapshot_stride);

    auto file = out.open("trajectory.csv");
    std::vector<std::string> columns{"t", "r"};
    for (int j = 0; j <= k; ++j) {
        columns.push_back("v_" + std::to_string(j));
    }
    csv::write_header(file, columns);
    std::vector<double> row(static_cast<std::size_t>(k) + 3);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        row[0] = traj.times[s];
        row[1] = traj.r[s];
        std::copy(traj.states[s].begin(), traj.states[s].end(), row.begin() + 2);
        csv::write_row(file, row);
    }

    Outcome ex;
    ex.invariants = traj.invariants;
    const auto& final_state = traj.states.back();
    ex.headline["v_final"] = final_state;
    ex.headline["v1_final"] = final_state[1];
    ex.headline["vk_final"] = final_state.back();
    ex.headline["r_final"] = traj.r.back();
    if (v_init.active() > 0.0) {
        const auto cls = uniform::classify(params, v_init);
        ex.headline["outcome"] = cls.outcome == uniform::Outcome::sustaining ? "sustaining"
                                 : cls.outcome == uniform::Outcome::extinct ? "extinct"
                                                                            : "extinct_asymptotic";
        ex.headline["r0"] = number(cls.r0);
    } else {
        ex.headline["outcome"] = "frozen";
    }
    if (k == 1 && params.lambda() != 1.0 && v_init.active() > 0.0) {
        ex.headline["v1_analytic_final"] = uniform::k1_analytic(params.lambda(), v_init[1], cfg.numerics.t_end);
    }
    return ex;
}

Outcome run_basin(const RunConfig& cfg, Outputs& out, int threads) {
    const double lambda = cfg.model.lambda();
    const auto map = uniform::basin_map(lambda, cfg.numerics.resolution, threads);
    auto file = out.open("basin.csv");
    uniform::write_csv(map, file);

    Outcome ex;
    ex.headline["cells"] = map.cells().size();
    ex.headline["sustaining"] = map.count(uniform::BasinOutcome::sustaining);
    ex.headline["extinct"] = map.count(uniform::BasinOutcome::extinct);
    ex.headline["boundary"] = map.count(uniform::BasinOutcome::boundary);
    const double q = 1.0 / (2.0 * lambda);
    const auto& cell = map.cell_containing(q, q);
    ex.headline["sustaining_point_outcome"] = cell.outcome == uniform::BasinOutcome::sustaining ? "sustaining"
                                              : cell.outcome == uniform::BasinOutcome::extinct  ? "extinct"
                                                                                                : "boundary";
    return ex;
}

Outcome run_spectrum(const RunConfig& cfg, Outputs& out, int threads) {
    const auto report =
        stability::sustaining_report(cfg.model, *cfg.kernel, *cfg.grid, cfg.numerics.n_modes, threads);
    {
        auto file = out.open("spectrum.csv");
        stability::write_csv(report, file);
    }
    Outcome ex;
    ex.headline["max_rate"] = report.max_rate;
    ex.headline["modes"] = report.modes.size();
    if (cfg.model.k() == 1) {
        auto file = out.open("inert.csv");
        csv::write_header(file, {"xi", "growth_rate"});
        double fastest = -std::numeric_limits<double>::infinity();
        for (const auto& mode : report.modes) {
            const double rate = stability::inert_rate_k1(cfg.model.lambda(), *cfg.kernel, mode.xi);
            fastest = std::max(fastest, rate);
            const double row[] = {mode.xi, rate};
            csv::write_row(file, row);
        }
        ex.headline["inert_max_growth_rate"] = fastest;
    }
    return ex;
}

Outcome run_spatial_experiment(const RunConfig& cfg, Outputs& out, int threads) {
    const ModelParams& params = cfg.model;
    const spatial::Field initial = spatial::make_field(*cfg.ic, params, *cfg.grid);
    spatial::SimulationOptions options;
    options.t_end = cfg.numerics.t_end;
    options.dt = cfg.numerics.dt;
    options.snapshot_stride = cfg.numerics.snapshot_stride;
    options.threads = threads;

    auto field_file = out.open("field.csv");
    spatial::write_field_header(field_file, params.k());
    std::optional<std::ofstream> lyap_file;
    if (params.k() == 1) {
        lyap_file = out.open("lyapunov.csv");
        csv::write_header(*lyap_file, {"t", "lyapunov"});
    }
    const auto summary = spatial::run_spatial(initial, params, *cfg.kernel, options,
                                              [&](double t, const spatial::Field& field) {
                                                  spatial::write_field_rows(field_file, t, field);
                                                  if (lyap_file) {
                                                      const double row[] = {t, spatial::lyapunov_k1(field, params.lambda())};
                                                      csv::write_row(*lyap_file, row);
                                                  }
                                              });

    Outcome ex;
    ex.invariants = summary.invariants;
    ex.headline["steps"] = summary.steps;
    const auto active = summary.final_field.row(params.k());
    double peak = 0.0;
    double deviation = 0.0;
    for (const double v : active) {
        peak = std::max(peak, v);
        deviation = std::max(deviation, std::abs(v - params.sustaining_active()));
    }
    ex.headline["max_active_final"] = peak;
    if (params.has_sustaining_state()) {
        ex.headline["sup_deviation_from_sustaining"] = deviation;
    }
    if (params.k() == 1) {
        ex.headline["lyapunov_final"] = spatial::lyapunov_k1(summary.final_field, params.lambda());
    }
    return ex;
}

Outcome run_front(const RunConfig& cfg, Outputs& out, int threads) {
    spatial::FrontOptions options;
    options.t_end = cfg.numerics.t_end;
    options.dt = cfg.numerics.dt;
    options.sample_interval = cfg.numerics.sample_interval;
    options.transient_fraction = cfg.numerics.transient_fraction;
    options.threads = threads;
    const auto obs = spatial::measure_front(*cfg.ic, cfg.model, *cfg.kernel, *cfg.grid, options);
    {
        auto file = out.open("front.csv");
        spatial::write_front_csv(file, obs);
    }
    {
        auto file = out.open("positions.csv");
        spatial::write_positions_csv(file, obs);
    }
    Outcome ex;
    ex.invariants = obs.invariants;
    ex.headline["velocity"] = obs.velocity;
    ex.headline["early_velocity"] = obs.early_velocity;
    ex.headline["late_velocity"] = obs.late_velocity;
    ex.headline["alpha_fit"] = obs.alpha_fit;
    ex.headline["amplitude_fit"] = obs.amplitude_fit;
    ex.headline["center_fit"] = obs.center_fit;
    ex.headline["fit_residual"] = obs.fit_residual;
    ex.headline["level"] = obs.level;
    return ex;
}

Outcome run_stationary(const RunConfig& cfg, Outputs& out) {
    const double lambda = cfg.model.lambda();
    const auto R_init = spatial::make_profile(*cfg.ic, *cfg.grid);
    const auto result = spatial::stationary_iterate(R_init, *cfg.kernel, *cfg.grid, lambda, cfg.numerics.tol,
                                                    cfg.numerics.max_iter);
    auto file = out.open("stationary.csv");
    csv::write_header(file, {"x", "R", "v_k"});
    const double target = cfg.model.sustaining_active();
    double deviation = 0.0;
    for (std::size_t i = 0; i < result.R.size(); ++i) {
        const double R = result.R[i];
        const double row[] = {cfg.grid->x(i), R, lambda * R / (lambda * R + 1.0)};
        csv::write_row(file, row);
        deviation = std::max(deviation, std::abs(R - target));
    }
    Outcome ex;
    ex.headline["iterations"] = result.iterations;
    ex.headline["residual"] = result.residual;
    ex.headline["sup_deviation_from_uniform"] = deviation;
    return ex;
}

Outcome run_nucleus(const RunConfig& cfg, Outputs& out, int threads) {
    spatial::NucleusOptions options;
    options.t_end = cfg.numerics.t_end;
    options.dt = cfg.numerics.dt;
    options.sample_interval = cfg.numerics.sample_interval;
    options.extinct_threshold = cfg.numerics.extinct_threshold;
    const auto bracket = spatial::bracket_nucleus(cfg.model, *cfg.kernel, *cfg.grid, cfg.numerics.w_lo,
                                                  cfg.numerics.w_hi, cfg.numerics.rounds, options, threads);
    auto file = out.open("nucleus.csv");
    spatial::write_nucleus_csv(file, bracket);
    Outcome ex;
    ex.headline["extinct_width"] = bracket.extinct_width;
    ex.headline["spreading_width"] = bracket.spreading_width;
    ex.headline["runs"] = bracket.runs.size();
    return ex;
}

}  // namespace

RunResult run(const RunConfig& config, int threads, std::ostream& log) {
    const int workers = resolve_threads(threads);
    RunResult result;
    Outputs out(config.prefix, result);
    const auto start = std::chrono::steady_clock::now();

    Outcome ex;
    switch (config.experiment) {
        case cli::Experiment::uniform:
            ex = run_uniform(config, out);
            break;
        case cli::Experiment::basin:
            ex = run_basin(config, out, workers);
            break;
        case cli::Experiment::spectrum:
            ex = run_spectrum(config, out, workers);
            break;
        case cli::Experiment::spatial:
            ex = run_spatial_experiment(config, out, workers);
            break;
        case cli::Experiment::front:
            ex = run_front(config, out, workers);
            break;
        case cli::Experiment::stationary:
            ex = run_stationary(config, out);
            break;
        case cli::Experiment::nucleus:
            ex = run_nucleus(config, out, workers);
            break;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json& manifest = result.manifest;
    manifest["experiment"] = to_string(config.experiment);
    manifest["config"] = config.resolved;
    manifest["threads"] = workers;
    manifest["wall_time_s"] = wall;
    manifest["invariants"] = ex.invariants ? invariants_json(*ex.invariants) : json(nullptr);
    manifest["headline"] = ex.headline;
    json outputs = json::array();
    for (const auto& path : result.outputs) {
        outputs.push_back(path.string());
    }
    manifest["outputs"] = outputs;

    auto file = out.open("manifest.json");
    file << manifest.dump(2) << '\n';
    log << to_string(config.experiment) << ": " << ex.headline.dump() << " (" << wall << " s)\n";
    return result;
}

int exit_code_for(const std::exception& error) noexcept {
    if (dynamic_cast<const DomainError*>(&error) != nullptr) {
        return 2;
    }
    if (dynamic_cast<const NumericalError*>(&error) != nullptr) {
        return 3;
    }
    return 1;
}

}  // namespace gcp::cli
