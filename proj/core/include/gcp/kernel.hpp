#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gcp {

/// Gaussian kernels are truncated at this many widths when discretized.
inline constexpr double kGaussianCutoffWidths = 8.0;

struct DeltaKernel {};

struct BoxKernel {
    double half_width;
};

struct GaussianKernel {
    double width;
};

/// Tabulated symmetric profile, linearly interpolated between abscissae and
/// zero outside them. Weights are renormalized on construction so that the
/// trapezoid integral over the abscissae is exactly the stored mass of 1.
class TableKernel {
public:
    TableKernel(std::vector<double> abscissae, std::vector<double> weights);

    std::span<const double> abscissae() const noexcept { return abscissae_; }
    std::span<const double> weights() const noexcept { return weights_; }

    double operator()(double x) const;
    double fourier(double xi) const;
    /// Trapezoid mass of the stored weights.
    double mass() const;

private:
    std::vector<double> abscissae_;
    std::vector<double> weights_;
};

/// Symmetric, nonnegative, unit-mass interaction profile J.
///
/// Fourier transforms use the convention J^(xi) = int J(x) exp(-2 pi i xi x) dx,
/// so mode m of a periodic box of length L sits at xi = m / L.
class Kernel {
public:
    using Variant = std::variant<DeltaKernel, BoxKernel, GaussianKernel, TableKernel>;

    static Kernel delta();
    static Kernel box(double half_width);
    static Kernel gaussian(double width);
    static Kernel table(std::vector<double> abscissae, std::vector<double> weights);

    const Variant& variant() const noexcept { return variant_; }
    bool is_delta() const noexcept { return std::holds_alternative<DeltaKernel>(variant_); }

    /// Pointwise value J(x). Throws DomainError for the delta kernel.
    double operator()(double x) const;

    /// Real-valued transform J^(xi); J^(0) = 1 and |J^| <= 1.
    double fourier(double xi) const;

    /// Half-width of the (possibly truncated) support; 0 for delta.
    double support() const;

    std::string describe() const;

private:
    explicit Kernel(Variant v) : variant_(std::move(v)) {}

    Variant variant_;
};

double kernel_eval(const Kernel& kernel, double x);
double kernel_fourier(const Kernel& kernel, double xi);

}  // namespace gcp
