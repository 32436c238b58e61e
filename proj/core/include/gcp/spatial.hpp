#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gcp/field.hpp"
#include "gcp/grid.hpp"
#include "gcp/kernel.hpp"
#include "gcp/model.hpp"

namespace gcp {
class WorkerPool;
}

namespace gcp::spatial {

/// Kernel sampled on the grid as a symmetric stencil of 2*radius+1 weights
/// summing to 1, so convolving a constant row returns it unchanged. Box
/// kernels get half weight at |x| = b. The delta kernel is the identity.
class DiscreteKernel {
public:
    DiscreteKernel(const Kernel& kernel, const Grid1D& grid);

    bool identity() const noexcept { return radius_ == 0; }
    int radius() const noexcept { return radius_; }
    /// weights()[m + radius] multiplies the value at offset m.
    std::span<const double> weights() const noexcept { return weights_; }

    /// out[i] = sum_m w_m in[(i - m) mod n] for i in [begin, end), summed in
    /// fixed m order so any partition of [0, n) gives identical bits.
    void apply(std::span<const double> in, std::span<double> out, std::size_t begin, std::size_t end) const;
    void apply(std::span<const double> in, std::span<double> out) const;

private:
    int radius_ = 0;
    std::vector<double> weights_;
};

/// Periodic trapezoid convolution R(x) = int J(x - y) v(y) dy.
/// Throws ConfigError if the kernel support is not below L/2.
std::vector<double> convolve(std::span<const double> row, const Kernel& kernel, const Grid1D& grid);

/// Right-hand side of the mean-field equations with R = J * v_k:
///   dv_0 = v_k - v_0 k lambda R,  dv_j = (v_{j-1} - v_j) k lambda R,  dv_k = -v_k + v_{k-1} k lambda R.
Field rhs(const Field& field, const ModelParams& params, const Kernel& kernel);

inline constexpr double kDefaultSpatialDt = 1e-2;
inline constexpr double kFieldSumTolerance = 1e-10;

struct SimulationOptions {
    double t_end = 0.0;
    double dt = kDefaultSpatialDt;
    int snapshot_stride = 1;
    int threads = 1;
};

using SnapshotObserver = std::function<void(double t, const Field& field)>;

struct RunSummary {
    Field final_field;
    InvariantSummary invariants;
    long steps = 0;
};

/// Fixed-step RK4 in time with the convolution re-evaluated at every stage.
/// The observer sees the initial field, every snapshot_stride-th step and the
/// final step. Throws InvariantViolation (with step and grid point) when a
/// column sum drifts by more than 1e-10 or a component drops below -1e-9.
RunSummary run_spatial(const Field& initial, const ModelParams& params, const Kernel& kernel,
                       const SimulationOptions& options, const SnapshotObserver& observer);

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    InvariantSummary invariants;
};

Trajectory simulate_spatial(const Field& initial, const ModelParams& params, const Kernel& kernel,
                            const SimulationOptions& options);

/// int (v_1 - (lambda-1)/lambda)^2 dx by the periodic trapezoid rule; k = 1 only.
double lyapunov_k1(const Field& field, double lambda);

}  // namespace gcp::spatial
