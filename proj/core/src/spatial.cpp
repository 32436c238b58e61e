#include "gcp/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcp/error.hpp"
#include "gcp/parallel.hpp"

namespace gcp::spatial {

namespace {

// Below this many points per worker the fork-join overhead dominates.
constexpr std::size_t kMinPointsPerWorker = 1024;

class RhsEvaluator {
public:
    RhsEvaluator(const ModelParams& params, const Kernel& kernel, const Grid1D& grid)
        : k_(params.k()), rate_(params.rate()), n_(grid.points()), stencil_(kernel, grid), drive_(grid.points()) {}

    // y and dy are (k+1) x n row-major.
    void operator()(std::span<const double> y, std::span<double> dy, std::size_t begin, std::size_t end) {
        const auto k = static_cast<std::size_t>(k_);
        const std::span<const double> active = y.subspan(k * n_, n_);
        stencil_.apply(active, drive_, begin, end);
        for (std::size_t i = begin; i < end; ++i) {
            const double drive = rate_ * drive_[i];
            const double vk = y[k * n_ + i];
            dy[i] = vk - y[i] * drive;
            for (std::size_t j = 1; j < k; ++j) {
                dy[j * n_ + i] = (y[(j - 1) * n_ + i] - y[j * n_ + i]) * drive;
            }
            dy[k * n_ + i] = -vk + y[(k - 1) * n_ + i] * drive;
        }
    }

    void operator()(std::span<const double> y, std::span<double> dy, WorkerPool& pool) {
        pool.parallel_for(n_, [&](std::size_t begin, std::size_t end) { (*this)(y, dy, begin, end); });
    }

private:
    int k_;
    double rate_;
    std::size_t n_;
    DiscreteKernel stencil_;
    std::vector<double> drive_;
};

void require_compatible(const Field& field, const ModelParams& params) {
    if (field.stages() != params.k()) {
        std::ostringstream msg;
        msg << "field has k = " << field.stages() << " but model has k = " << params.k();
        throw DomainError(msg.str());
    }
}

}  // namespace

Field rhs(const Field& field, const ModelParams& params, const Kernel& kernel) {
    require_compatible(field, params);
    RhsEvaluator eval(params, kernel, field.grid());
    Field out(field.grid(), field.stages());
    eval(field.data(), out.data(), 0, field.points());
    return out;
}

RunSummary run_spatial(const Field& initial, const ModelParams& params, const Kernel& kernel,
                       const SimulationOptions& options, const SnapshotObserver& observer) {
    require_compatible(initial, params);
    if (!(options.t_end > 0.0) || !std::isfinite(options.t_end)) {
        throw DomainError("t_end must be > 0");
    }
    if (!(options.dt > 0.0)) {
        throw DomainError("dt must be > 0");
    }
    // Rates of the linearized system are bounded by 1 + 2 k lambda; keep RK4 inside its real stability interval.
    if (options.dt * (1.0 + 2.0 * params.rate()) > 2.5) {
        std::ostringstream msg;
        msg << "dt = " << options.dt << " exceeds the explicit RK4 stability bound 2.5 / (1 + 2 k lambda)";
        throw DomainError(msg.str());
    }
    if (options.snapshot_stride < 1) {
        throw DomainError("snapshot_stride must be >= 1");
    }

    const std::size_t n = initial.points();
    const int k = initial.stages();
    const int workers = static_cast<int>(
        std::clamp<std::size_t>(n / kMinPointsPerWorker, 1, static_cast<std::size_t>(std::max(options.threads, 1))));
    WorkerPool pool(workers);
    RhsEvaluator eval(params, kernel, initial.grid());

    Field y = initial;
    const std::size_t size = y.data().size();
    std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);

    const auto steps = static_cast<long>(std::ceil(options.t_end / options.dt - 1e-9));
    const double h = options.t_end / static_cast<double>(steps);

    RunSummary summary{initial, {}, steps};
    const auto check = [&](long step) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            double lowest = y.at(0, i);
            for (int j = 0; j <= k; ++j) {
                const double v = y.at(j, i);
                sum += v;
                lowest = std::min(lowest, v);
            }
            summary.invariants.observe(sum, lowest);
            if (!(std::abs(sum - 1.0) <= kFieldSumTolerance) || !(lowest >= -kNegativeTolerance)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "simplex invariant violated at step " << step << " (t = " << step * h << "), point " << i
                    << " (x = " << y.grid().x(i) << "): sum = " << sum << ", min component = " << lowest;
                throw InvariantViolation(msg.str());
            }
        }
    };

    check(0);
    if (observer) {
        observer(0.0, y);
    }
    std::span<double> state = y.data();
    for (long step = 1; step <= steps; ++step) {
        eval(state, k1, pool);
        for (std::size_t i = 0; i < size; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
        eval(tmp, k2, pool);
        for (std::size_t i = 0; i < size; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
        eval(tmp, k3, pool);
        for (std::size_t i = 0; i < size; ++i) tmp[i] = state[i] + h * k3[i];
        eval(tmp, k4, pool);
        for (std::size_t i = 0; i < size; ++i) {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check(step);
        if (observer && (step % options.snapshot_stride == 0 || step == steps)) {
            observer(step == steps ? options.t_end : static_cast<double>(step) * h, y);
        }
    }
    summary.final_field = std::move(y);
    return summary;
}

Trajectory simulate_spatial(const Field& initial, const ModelParams& params, const Kernel& kernel,
                            const SimulationOptions& options) {
    Trajectory traj;
    const RunSummary summary = run_spatial(initial, params, kernel, options, [&](double t, const Field& field) {
        traj.times.push_back(t);
        traj.snapshots.push_back(field);
    });
    traj.invariants = summary.invariants;
    return traj;
}

double lyapunov_k1(const Field& field, double lambda) {
    if (field.stages() != 1) {
        throw DomainError("lyapunov_k1 is defined for k = 1 only");
    }
    if (!(lambda > 0.0)) {
        throw DomainError("lambda must be > 0");
    }
    const double target = (lambda - 1.0) / lambda;
    double sum = 0.0;
    for (const double v : field.row(1)) {
        const double f = v - target;
        sum += f * f;
    }
    return field.grid().spacing() * sum;
}

}  // namespace gcp::spatial
