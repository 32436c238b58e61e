#pragma once

#include <span>
#include <vector>

#include "gcp/grid.hpp"
#include "gcp/kernel.hpp"

namespace gcp::spatial {

struct StationaryResult {
    std::vector<double> R;
    int iterations = 0;
    double residual = 0.0;  // sup-norm of the last update
};

inline constexpr double kDefaultStationaryTol = 1e-12;
inline constexpr int kDefaultStationaryMaxIter = 10000;

/// Picard iteration R <- lambda J * (R / (lambda R + 1)) until the sup-norm
/// update falls below tol. The fixed point does not depend on k; the
/// matching active fraction is v_k = lambda R / (lambda R + 1).
/// Throws DomainError for lambda <= 1 or negative input and
/// ConvergenceError after max_iter sweeps.
StationaryResult stationary_iterate(std::span<const double> R_init, const Kernel& kernel, const Grid1D& grid,
                                    double lambda, double tol = kDefaultStationaryTol,
                                    int max_iter = kDefaultStationaryMaxIter);

}  // namespace gcp::spatial
