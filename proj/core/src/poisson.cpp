#include "gcp/poisson.hpp"

#include <cmath>

#include "gcp/error.hpp"

namespace gcp {

namespace {
// Above this exp(-r) is close to the subnormal range and the running product
// loses digits; switch to log space.
constexpr double kLogSpaceThreshold = 700.0;
}  // namespace

void h_coeffs(double r, std::span<double> out) {
    if (!(r >= 0.0)) {
        throw DomainError("H_j(r) requires r >= 0");
    }
    if (out.empty()) {
        return;
    }
    if (r <= kLogSpaceThreshold) {
        double h = std::exp(-r);
        out[0] = h;
        for (std::size_t j = 1; j < out.size(); ++j) {
            h *= r / static_cast<double>(j);
            out[j] = h;
        }
        return;
    }
    const double log_r = std::log(r);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double jd = static_cast<double>(j);
        out[j] = std::exp(-r + jd * log_r - std::lgamma(jd + 1.0));
    }
}

double h_coeff(int j, double r) {
    if (j < 0) {
        throw DomainError("H_j(r) requires j >= 0");
    }
    if (!(r >= 0.0)) {
        throw DomainError("H_j(r) requires r >= 0");
    }
    if (r == 0.0) {
        return j == 0 ? 1.0 : 0.0;
    }
    if (r <= kLogSpaceThreshold) {
        double h = std::exp(-r);
        for (int i = 1; i <= j; ++i) {
            h *= r / static_cast<double>(i);
        }
        return h;
    }
    const double jd = static_cast<double>(j);
    return std::exp(-r + jd * std::log(r) - std::lgamma(jd + 1.0));
}

}  // namespace gcp
