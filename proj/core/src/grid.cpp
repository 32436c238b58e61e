#include "gcp/grid.hpp"

#include <cmath>
#include <sstream>

#include "gcp/error.hpp"
#include "gcp/kernel.hpp"

namespace gcp {

Grid1D::Grid1D(double length, std::size_t points, bool periodic)
    : length_(length), points_(points), periodic_(periodic) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw DomainError("grid.L must be > 0");
    }
    if (points == 0) {
        throw DomainError("grid.n must be a positive integer");
    }
}

void Grid1D::require_fits(const Kernel& kernel) const {
    const double support = kernel.support();
    if (periodic_ && !(support < 0.5 * length_)) {
        std::ostringstream msg;
        msg << "kernel " << kernel.describe() << " has support " << support
            << " which must be < L/2 = " << 0.5 * length_;
        throw ConfigError(msg.str());
    }
}

}  // namespace gcp
