#include "gcp/front.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "gcp/csv.hpp"
#include "gcp/error.hpp"
#include "gcp/spatial.hpp"

namespace gcp::spatial {

namespace {

constexpr double kComplexStep = 1e-20;

// Index i such that row[i] >= level > row[i+1], scanning right to left over [lo, hi).
std::ptrdiff_t last_downward(std::span<const double> row, double level, std::size_t lo, std::size_t hi) {
    for (std::size_t i = hi - 1; i > lo; --i) {
        if (row[i - 1] >= level && row[i] < level) {
            return static_cast<std::ptrdiff_t>(i - 1);
        }
    }
    return -1;
}

double interpolate(const Grid1D& grid, std::span<const double> row, std::size_t i, double level) {
    const double a = row[i];
    const double b = row[i + 1];
    return grid.x(i) + grid.spacing() * (a - level) / (a - b);
}

struct TanhResidual : Eigen::DenseFunctor<double> {
    TanhResidual(std::vector<double> x, std::vector<double> y)
        : Eigen::DenseFunctor<double>(3, static_cast<int>(x.size())), xs(std::move(x)), ys(std::move(y)) {}

    // p = (amplitude, alpha, center)
    int operator()(const InputType& p, ValueType& f) const {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            f[static_cast<Eigen::Index>(i)] = 0.5 * p[0] * (1.0 - std::tanh(p[1] * (xs[i] - p[2]))) - ys[i];
        }
        return 0;
    }

    int df(const InputType& p, JacobianType& jac) const {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const double d = xs[i] - p[2];
            const double th = std::tanh(p[1] * d);
            const double sech2 = 1.0 - th * th;
            jac(r, 0) = 0.5 * (1.0 - th);
            jac(r, 1) = -0.5 * p[0] * sech2 * d;
            jac(r, 2) = 0.5 * p[0] * sech2 * p[1];
        }
        return 0;
    }

    std::vector<double> xs;
    std::vector<double> ys;
};

void require_wave_args(double lambda, double alpha) {
    if (!(lambda > 1.0)) {
        throw DomainError("delta wave requires lambda > 1");
    }
    if (!(alpha > 0.0)) {
        throw DomainError("delta wave requires alpha > 0");
    }
}

template <class T>
T wave_profile(double lambda, double alpha, double x, T t) {
    const double V = (lambda - 1.0) / (2.0 * alpha);
    return (lambda - 1.0) / lambda * 0.5 * (1.0 - std::tanh(alpha * (x - V * t)));
}

}  // namespace

double front_position(const Grid1D& grid, std::span<const double> row, double level) {
    if (row.size() != grid.points()) {
        throw DomainError("row length does not match the grid");
    }
    const std::ptrdiff_t i = last_downward(row, level, 0, row.size());
    if (i < 0) {
        std::ostringstream msg;
        msg << "no downward crossing of level " << level << "; the front left the measurement window";
        throw MeasurementError(msg.str());
    }
    return interpolate(grid, row, static_cast<std::size_t>(i), level);
}

double front_position(const Field& field, double level, int component) {
    const int j = component < 0 ? field.stages() : component;
    if (j > field.stages()) {
        throw DomainError("front component out of range");
    }
    return front_position(field.grid(), field.row(j), level);
}

LineFit fit_line(std::span<const double> t, std::span<const double> x) {
    if (t.size() != x.size() || t.size() < 2) {
        throw DomainError("line fit needs at least two (t, x) pairs");
    }
    const auto n = static_cast<double>(t.size());
    double t_mean = 0.0;
    double x_mean = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t_mean += t[i];
        x_mean += x[i];
    }
    t_mean /= n;
    x_mean /= n;
    double stt = 0.0;
    double stx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - t_mean) * (t[i] - t_mean);
        stx += (t[i] - t_mean) * (x[i] - x_mean);
    }
    if (!(stt > 0.0)) {
        throw DomainError("line fit needs distinct sample times");
    }
    const double slope = stx / stt;
    return {slope, x_mean - slope * t_mean};
}

TanhFit fit_tanh_profile(const Grid1D& grid, std::span<const double> row, double amplitude_guess,
                         double center_guess, double half_window) {
    if (row.size() != grid.points()) {
        throw DomainError("row length does not match the grid");
    }
    if (!(amplitude_guess > 0.0) || !(half_window > 0.0)) {
        throw DomainError("tanh fit needs a positive amplitude guess and window");
    }
    const double h = grid.spacing();
    const auto index_of = [&](double x) {
        return std::clamp<double>(std::round((x - grid.x_min()) / h), 0.0, static_cast<double>(row.size() - 1));
    };
    const auto lo = static_cast<std::size_t>(index_of(center_guess - half_window));
    const auto hi = static_cast<std::size_t>(index_of(center_guess + half_window)) + 1;
    if (hi - lo < 8) {
        throw MeasurementError("tanh fit window holds fewer than 8 grid points");
    }

    const std::ptrdiff_t i90 = last_downward(row, 0.9 * amplitude_guess, lo, hi);
    const std::ptrdiff_t i10 = last_downward(row, 0.1 * amplitude_guess, lo, hi);
    if (i90 < 0 || i10 < 0) {
        throw MeasurementError("10-90% points of the front are outside the fit window");
    }
    const double width = interpolate(grid, row, static_cast<std::size_t>(i10), 0.1 * amplitude_guess) -
                         interpolate(grid, row, static_cast<std::size_t>(i90), 0.9 * amplitude_guess);
    // tanh falls from 0.8 to -0.8 over 2 atanh(0.8) / alpha.
    const double alpha_guess = 2.0 * std::atanh(0.8) / std::max(width, h);

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = lo; i < hi; ++i) {
        xs.push_back(grid.x(i));
        ys.push_back(row[i]);
    }
    TanhResidual functor(xs, ys);
    Eigen::VectorXd p(3);
    p << amplitude_guess, alpha_guess, center_guess;
    Eigen::LevenbergMarquardt<TanhResidual> lm(functor);
    lm.setXtol(1e-12);
    lm.setFtol(1e-14);
    lm.setMaxfev(2000);
    lm.minimize(p);

    Eigen::VectorXd f(static_cast<Eigen::Index>(xs.size()));
    functor(p, f);
    double norm_y = 0.0;
    for (const double y : ys) {
        norm_y += y * y;
    }
    TanhFit fit;
    fit.amplitude = p[0];
    fit.alpha = p[1];
    fit.center = p[2];
    fit.residual = norm_y > 0.0 ? f.norm() / std::sqrt(norm_y) : f.norm();
    fit.points = xs.size();
    return fit;
}

FrontObservation measure_front(const Field& initial, const ModelParams& params, const Kernel& kernel,
                               const FrontOptions& options) {
    if (!params.has_sustaining_state()) {
        throw DomainError("front measurement needs lambda > 1");
    }
    if (!(options.sample_interval > 0.0) || !(options.t_end > 0.0)) {
        throw DomainError("front measurement needs t_end > 0 and sample_interval > 0");
    }
    if (!(options.transient_fraction >= 0.0 && options.transient_fraction < 1.0)) {
        throw DomainError("transient_fraction must be in [0, 1)");
    }
    const Grid1D& grid = initial.grid();
    const double h = grid.spacing();
    const double v_bar = params.sustaining_active();
    const double level = options.level > 0.0 ? options.level : 0.5 * v_bar;
    const double guard = options.guard > 0.0 ? options.guard : std::max(10.0 * kernel.support(), 10.0 * h);

    SimulationOptions sim;
    sim.t_end = options.t_end;
    sim.dt = options.dt;
    sim.threads = options.threads;
    sim.snapshot_stride = std::max(1, static_cast<int>(std::lround(options.sample_interval / options.dt)));

    FrontObservation obs;
    obs.level = level;
    const RunSummary run = run_spatial(initial, params, kernel, sim, [&](double t, const Field& field) {
        const double x = front_position(field, level);
        if (x < grid.x_min() + guard || x > grid.x_max() - guard) {
            std::ostringstream msg;
            msg << "front at x = " << x << " entered the guard zone of width " << guard << " at t = " << t;
            throw MeasurementError(msg.str());
        }
        obs.times.push_back(t);
        obs.positions.push_back(x);
    });
    obs.invariants = run.invariants;

    const auto first = static_cast<std::size_t>(
        std::floor(options.transient_fraction * static_cast<double>(obs.times.size())));
    const std::size_t used = obs.times.size() - first;
    if (used < 4) {
        throw MeasurementError("fewer than 4 front samples after the transient; reduce sample_interval");
    }
    const std::span<const double> t(obs.times.data() + first, used);
    const std::span<const double> x(obs.positions.data() + first, used);
    obs.t_start = t.front();
    obs.t_end = t.back();
    obs.velocity = fit_line(t, x).slope;
    const std::size_t half = used / 2;
    obs.early_velocity = fit_line(t.first(half), x.first(half)).slope;
    obs.late_velocity = fit_line(t.subspan(half), x.subspan(half)).slope;

    const Field& last = run.final_field;
    const std::span<const double> row = last.row(last.stages());
    const double center = obs.positions.back();
    // Plateau behind the front sets the amplitude guess.
    double amplitude = 0.0;
    for (std::size_t i = 0; i < row.size() && grid.x(i) <= center; ++i) {
        if (grid.x(i) >= center - 0.25 * grid.length()) {
            amplitude = std::max(amplitude, row[i]);
        }
    }
    double half_window = options.fit_half_window;
    if (!(half_window > 0.0)) {
        const TanhFit rough = fit_tanh_profile(grid, row, amplitude, center, 0.25 * grid.length());
        const double width = 2.0 * std::atanh(0.8) / rough.alpha;
        half_window = std::max(8.0 * width, 20.0 * h);
    }
    const double reach = std::min(center - grid.x_min(), grid.x_max() - center);
    const TanhFit fit = fit_tanh_profile(grid, row, amplitude, center, std::min(half_window, reach));
    obs.alpha_fit = fit.alpha;
    obs.amplitude_fit = fit.amplitude;
    obs.center_fit = fit.center;
    obs.fit_residual = fit.residual;
    obs.final_field = run.final_field;
    return obs;
}

FrontObservation measure_front(const InitialCondition& ic, const ModelParams& params, const Kernel& kernel,
                               const Grid1D& grid, const FrontOptions& options) {
    return measure_front(make_field(ic, params, grid), params, kernel, options);
}

void write_front_csv(std::ostream& out, const FrontObservation& obs) {
    csv::write_header(out, {"t_start", "t_end", "velocity", "alpha_fit", "fit_residual"});
    const double row[] = {obs.t_start, obs.t_end, obs.velocity, obs.alpha_fit, obs.fit_residual};
    csv::write_row(out, row);
}

void write_positions_csv(std::ostream& out, const FrontObservation& obs) {
    csv::write_header(out, {"t", "x_front"});
    for (std::size_t i = 0; i < obs.times.size(); ++i) {
        const double row[] = {obs.times[i], obs.positions[i]};
        csv::write_row(out, row);
    }
}

double delta_wave(double lambda, double alpha, double x, double t) {
    require_wave_args(lambda, alpha);
    return wave_profile(lambda, alpha, x, t);
}

double delta_wave_velocity(double lambda, double alpha) {
    require_wave_args(lambda, alpha);
    return (lambda - 1.0) / (2.0 * alpha);
}

double delta_wave_time_derivative(double lambda, double alpha, double x, double t) {
    require_wave_args(lambda, alpha);
    const std::complex<double> u = wave_profile(lambda, alpha, x, std::complex<double>(t, kComplexStep));
    return u.imag() / kComplexStep;
}

double delta_wave_residual(double lambda, double alpha, double x, double t) {
    const double u = delta_wave(lambda, alpha, x, t);
    return delta_wave_time_derivative(lambda, alpha, x, t) - (-u + lambda * (1.0 - u) * u);
}

}  // namespace gcp::spatial
