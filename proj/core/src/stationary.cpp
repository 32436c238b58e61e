#include "gcp/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcp/error.hpp"
#include "gcp/spatial.hpp"

namespace gcp::spatial {

StationaryResult stationary_iterate(std::span<const double> R_init, const Kernel& kernel, const Grid1D& grid,
                                    double lambda, double tol, int max_iter) {
    if (!(lambda > 1.0)) {
        throw DomainError("stationary iteration requires lambda > 1");
    }
    if (!(tol > 0.0) || max_iter < 1) {
        throw DomainError("stationary iteration needs tol > 0 and max_iter >= 1");
    }
    if (R_init.size() != grid.points()) {
        throw DomainError("R_init length does not match the grid");
    }
    for (const double r : R_init) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw DomainError("R_init must be finite and >= 0");
        }
    }

    const DiscreteKernel stencil(kernel, grid);
    StationaryResult result;
    result.R.assign(R_init.begin(), R_init.end());
    std::vector<double> active(grid.points());
    std::vector<double> next(grid.points());

    for (int it = 1; it <= max_iter; ++it) {
        for (std::size_t i = 0; i < active.size(); ++i) {
            active[i] = result.R[i] / (lambda * result.R[i] + 1.0);
        }
        stencil.apply(active, next);
        double update = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] *= lambda;
            update = std::max(update, std::abs(next[i] - result.R[i]));
        }
        result.R.swap(next);
        result.iterations = it;
        result.residual = update;
        if (update < tol) {
            return result;
        }
    }
    std::ostringstream msg;
    msg << "stationary iteration did not converge in " << max_iter << " sweeps (last update " << result.residual
        << ")";
    throw ConvergenceError(msg.str(), max_iter, result.residual);
}

}  // namespace gcp::spatial
