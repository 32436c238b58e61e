#include "gcp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gcp/error.hpp"

namespace gcp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double trapezoid(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    }
    return sum;
}

}  // namespace

TableKernel::TableKernel(std::vector<double> abscissae, std::vector<double> weights)
    : abscissae_(std::move(abscissae)), weights_(std::move(weights)) {
    const std::size_t n = abscissae_.size();
    if (n < 2 || weights_.size() != n) {
        throw DomainError("table kernel needs matching abscissae and weights with at least two points");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(abscissae_[i]) || !std::isfinite(weights_[i])) {
            throw DomainError("table kernel entries must be finite");
        }
        if (weights_[i] < 0.0) {
            throw DomainError("table kernel weights must be nonnegative");
        }
        if (i > 0 && !(abscissae_[i] > abscissae_[i - 1])) {
            throw DomainError("table kernel abscissae must be strictly increasing");
        }
    }
    const double scale = std::max(std::abs(abscissae_.front()), std::abs(abscissae_.back()));
    const double wmax = *std::max_element(weights_.begin(), weights_.end());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t mirror = n - 1 - i;
        if (std::abs(abscissae_[i] + abscissae_[mirror]) > 1e-12 * scale ||
            std::abs(weights_[i] - weights_[mirror]) > 1e-12 * wmax) {
            throw DomainError("table kernel must be symmetric: J(x) = J(-x)");
        }
    }
    const double m = trapezoid(abscissae_, weights_);
    if (!(m > 0.0)) {
        throw DomainError("table kernel has zero mass");
    }
    for (double& w : weights_) {
        w /= m;
    }
}

double TableKernel::operator()(double x) const {
    if (x < abscissae_.front() || x > abscissae_.back()) {
        return 0.0;
    }
    const auto it = std::upper_bound(abscissae_.begin(), abscissae_.end(), x);
    if (it == abscissae_.end()) {
        return weights_.back();
    }
    const std::size_t hi = static_cast<std::size_t>(it - abscissae_.begin());
    const std::size_t lo = hi - 1;
    const double s = (x - abscissae_[lo]) / (abscissae_[hi] - abscissae_[lo]);
    return (1.0 - s) * weights_[lo] + s * weights_[hi];
}

// Exact cosine transform of the piecewise-linear interpolant. Differences of
// sines and cosines are rewritten as products so small xi loses no digits.
double TableKernel::fourier(double xi) const {
    const double w = 2.0 * std::numbers::pi * xi;
    const auto sinc = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < abscissae_.size(); ++i) {
        const double a = abscissae_[i];
        const double b = abscissae_[i + 1];
        const double d = 0.5 * (b - a);
        const double m = 0.5 * (a + b);
        const double slope = (weights_[i + 1] - weights_[i]) / (b - a);
        const double sin_diff = 2.0 * std::cos(w * m) * d * sinc(w * d);  // (sin wb - sin wa) / w
        const double cos_diff = -2.0 * m * sinc(w * m) * d * sinc(w * d);  // (cos wb - cos wa) / w^2
        sum += weights_[i] * sin_diff + slope * ((b - a) * b * sinc(w * b) + cos_diff);
    }
    return sum;
}

double TableKernel::mass() const { return trapezoid(abscissae_, weights_); }

Kernel Kernel::delta() { return Kernel(DeltaKernel{}); }

Kernel Kernel::box(double half_width) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw DomainError("box kernel half-width b must be > 0");
    }
    return Kernel(BoxKernel{half_width});
}

Kernel Kernel::gaussian(double width) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw DomainError("gaussian kernel width sigma must be > 0");
    }
    return Kernel(GaussianKernel{width});
}

Kernel Kernel::table(std::vector<double> abscissae, std::vector<double> weights) {
    return Kernel(TableKernel(std::move(abscissae), std::move(weights)));
}

double Kernel::operator()(double x) const {
    return std::visit(
        overloaded{
            [](const DeltaKernel&) -> double {
                throw DomainError("delta kernel is not pointwise evaluable");
            },
            [x](const BoxKernel& k) { return std::abs(x) < k.half_width ? 0.5 / k.half_width : 0.0; },
            [x](const GaussianKernel& k) {
                const double z = x / k.width;
                return std::exp(-0.5 * z * z) / (k.width * std::sqrt(2.0 * std::numbers::pi));
            },
            [x](const TableKernel& k) { return k(x); },
        },
        variant_);
}

double Kernel::fourier(double xi) const {
    return std::visit(overloaded{
                          [](const DeltaKernel&) { return 1.0; },
                          [xi](const BoxKernel& k) {
                              const double arg = 2.0 * std::numbers::pi * k.half_width * xi;
                              return arg == 0.0 ? 1.0 : std::sin(arg) / arg;
                          },
                          [xi](const GaussianKernel& k) {
                              const double s = std::numbers::pi * k.width * xi;
                              return std::exp(-2.0 * s * s);
                          },
                          [xi](const TableKernel& k) { return k.fourier(xi); },
                      },
                      variant_);
}

double Kernel::support() const {
    return std::visit(overloaded{
                          [](const DeltaKernel&) { return 0.0; },
                          [](const BoxKernel& k) { return k.half_width; },
                          [](const GaussianKernel& k) { return kGaussianCutoffWidths * k.width; },
                          [](const TableKernel& k) {
                              return std::max(std::abs(k.abscissae().front()), std::abs(k.abscissae().back()));
                          },
                      },
                      variant_);
}

std::string Kernel::describe() const {
    std::ostringstream out;
    std::visit(overloaded{
                   [&](const DeltaKernel&) { out << "delta"; },
                   [&](const BoxKernel& k) { out << "box(b=" << k.half_width << ")"; },
                   [&](const GaussianKernel& k) { out << "gaussian(sigma=" << k.width << ")"; },
                   [&](const TableKernel& k) { out << "table(" << k.abscissae().size() << " points)"; },
               },
               variant_);
    return out.str();
}

double kernel_eval(const Kernel& kernel, double x) { return kernel(x); }

double kernel_fourier(const Kernel& kernel, double xi) { return kernel.fourier(xi); }

}  // namespace gcp
