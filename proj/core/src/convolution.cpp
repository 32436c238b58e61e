#include <cmath>
#include <numeric>
#include <sstream>

#include "gcp/error.hpp"
#include "gcp/spatial.hpp"

namespace gcp::spatial {

DiscreteKernel::DiscreteKernel(const Kernel& kernel, const Grid1D& grid) {
    grid.require_fits(kernel);
    if (kernel.is_delta()) {
        radius_ = 0;
        weights_ = {1.0};
        return;
    }
    const double h = grid.spacing();
    const double support = kernel.support();
    radius_ = static_cast<int>(std::floor(support / h + 1e-9));
    if (2 * static_cast<std::size_t>(radius_) + 1 > grid.points()) {
        throw ConfigError("kernel stencil wraps around the periodic grid; increase L");
    }
    weights_.assign(2 * static_cast<std::size_t>(radius_) + 1, 0.0);

    const auto* box = std::get_if<BoxKernel>(&kernel.variant());
    for (int m = -radius_; m <= radius_; ++m) {
        const double x = m * h;
        double w = 0.0;
        if (box != nullptr) {
            const double gap = std::abs(x) - box->half_width;
            if (std::abs(gap) <= 1e-9 * h) {
                w = 0.5;
            } else if (gap < 0.0) {
                w = 1.0;
            }
        } else {
            w = kernel(x);
        }
        weights_[static_cast<std::size_t>(m + radius_)] = w;
    }
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (!(total > 0.0)) {
        std::ostringstream msg;
        msg << "kernel " << kernel.describe() << " is narrower than the grid spacing h = " << h;
        throw ConfigError(msg.str());
    }
    for (double& w : weights_) {
        w /= total;
    }
    if (radius_ == 0) {
        // A single surviving tap is the identity; keep the representation canonical.
        weights_ = {1.0};
    }
}

void DiscreteKernel::apply(std::span<const double> in, std::span<double> out, std::size_t begin,
                           std::size_t end) const {
    const std::size_t n = in.size();
    if (radius_ == 0) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = in[i];
        }
        return;
    }
    const auto r = static_cast<std::size_t>(radius_);
    const double* w = weights_.data();
    for (std::size_t i = begin; i < end; ++i) {
        double acc = 0.0;
        if (i >= r && i + r < n) {
            // in[i - m] for m = -r..r, i.e. in[i + r] down to in[i - r]
            const double* p = in.data() + i + r;
            for (std::size_t t = 0; t <= 2 * r; ++t) {
                acc += w[t] * p[-static_cast<std::ptrdiff_t>(t)];
            }
        } else {
            for (std::size_t t = 0; t <= 2 * r; ++t) {
                const std::size_t idx = (i + n + r - t) % n;
                acc += w[t] * in[idx];
            }
        }
        out[i] = acc;
    }
}

void DiscreteKernel::apply(std::span<const double> in, std::span<double> out) const {
    apply(in, out, 0, in.size());
}

std::vector<double> convolve(std::span<const double> row, const Kernel& kernel, const Grid1D& grid) {
    if (row.size() != grid.points()) {
        throw DomainError("row length does not match the grid");
    }
    const DiscreteKernel stencil(kernel, grid);
    std::vector<double> out(row.size());
    stencil.apply(row, out);
    return out;
}

}  // namespace gcp::spatial
