#pragma once

#include <cstddef>

namespace gcp {

class Kernel;

/// Uniform 1-D grid on [-L/2, L/2); x_i = -L/2 + i*h with h = L/n.
class Grid1D {
public:
    Grid1D(double length, std::size_t points, bool periodic = true);

    double length() const noexcept { return length_; }
    std::size_t points() const noexcept { return points_; }
    double spacing() const noexcept { return length_ / static_cast<double>(points_); }
    bool periodic() const noexcept { return periodic_; }

    double x(std::size_t i) const noexcept { return x_min() + static_cast<double>(i) * spacing(); }
    double x_min() const noexcept { return -0.5 * length_; }
    double x_max() const noexcept { return x_min() + length_ - spacing(); }

    /// Throws ConfigError unless the kernel support is strictly below L/2.
    void require_fits(const Kernel& kernel) const;

private:
    double length_;
    std::size_t points_;
    bool periodic_;
};

}  // namespace gcp
