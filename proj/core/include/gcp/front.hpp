#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "gcp/field.hpp"
#include "gcp/initial_condition.hpp"
#include "gcp/kernel.hpp"
#include "gcp/model.hpp"
#include "gcp/spatial.hpp"

namespace gcp::spatial {

/// Rightmost downward crossing (high on the left, low on the right) of `level`
/// by row `component` (default: the active stage k), linearly interpolated
/// between grid points. Upward crossings, such as the periodic image of a
/// front, are skipped. Throws MeasurementError when there is none.
double front_position(const Field& field, double level, int component = -1);
double front_position(const Grid1D& grid, std::span<const double> row, double level);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares x = slope t + intercept; needs two distinct t.
LineFit fit_line(std::span<const double> t, std::span<const double> x);

struct TanhFit {
    double amplitude = 0.0;
    double alpha = 0.0;
    double center = 0.0;
    double residual = 0.0;  // ||model - data||_2 / ||data||_2 over the fit window
    std::size_t points = 0;
};

/// Least-squares fit of a [1 - tanh(alpha (x - x0))] / 2 to the row on the
/// grid points with |x - center_guess| <= half_window (no wrapping). Starts
/// from the given amplitude, the 10-90% width and center_guess, then runs
/// Levenberg-Marquardt. Throws MeasurementError if the window is too small or
/// the 10-90% points cannot be located.
TanhFit fit_tanh_profile(const Grid1D& grid, std::span<const double> row, double amplitude_guess,
                         double center_guess, double half_window);

struct FrontOptions {
    double t_end = 0.0;
    double dt = kDefaultSpatialDt;
    double sample_interval = 1.0;
    double transient_fraction = 0.25;
    double level = 0.0;  // <= 0: half of the sustaining active fraction
    double guard = 0.0;  // <= 0: 10 kernel half-widths, at least 10 grid spacings
    double fit_half_window = 0.0;  // <= 0: 8 times the 10-90% width of the final profile
    int threads = 1;
};

struct FrontObservation {
    std::vector<double> times;
    std::vector<double> positions;
    double t_start = 0.0;  // first sample used in the velocity fit
    double t_end = 0.0;
    double velocity = 0.0;
    /// Slopes on the first and second halves of the measurement window.
    double early_velocity = 0.0;
    double late_velocity = 0.0;
    double level = 0.0;
    double alpha_fit = 0.0;
    double amplitude_fit = 0.0;
    double center_fit = 0.0;
    double fit_residual = 0.0;
    InvariantSummary invariants;
    std::optional<Field> final_field;
};

/// Simulates from the initial field, records the front position every
/// sample_interval, fits the velocity after discarding the transient share of
/// samples and fits a tanh profile to the final field. Needs lambda > 1.
/// Throws MeasurementError when the front is lost or enters the guard zone
/// at either end of the domain.
FrontObservation measure_front(const Field& initial, const ModelParams& params, const Kernel& kernel,
                               const FrontOptions& options);
FrontObservation measure_front(const InitialCondition& ic, const ModelParams& params, const Kernel& kernel,
                               const Grid1D& grid, const FrontOptions& options);

/// Single row: t_start, t_end, velocity, alpha_fit, fit_residual.
void write_front_csv(std::ostream& out, const FrontObservation& obs);
/// Rows t, x_front for every sample.
void write_positions_csv(std::ostream& out, const FrontObservation& obs);

/// Exact traveling wave for J = delta and k = 1:
/// u = (lambda-1)/lambda [1 - tanh(alpha (x - V t))] / 2 with V = (lambda-1) / (2 alpha).
double delta_wave(double lambda, double alpha, double x, double t);
double delta_wave_velocity(double lambda, double alpha);
/// du/dt by complex-step differentiation.
double delta_wave_time_derivative(double lambda, double alpha, double x, double t);
/// du/dt - [-u + lambda (1 - u) u]; zero up to rounding.
double delta_wave_residual(double lambda, double alpha, double x, double t);

}  // namespace gcp::spatial
