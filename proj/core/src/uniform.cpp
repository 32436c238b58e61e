#include "gcp/uniform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gcp/error.hpp"
#include "gcp/poisson.hpp"

namespace gcp::uniform {

namespace {

constexpr double kRootTolerance = 1e-12;
constexpr double kQuadratureTolerance = 1e-10;

void require_r(double r) {
    if (!(r >= 0.0)) {
        throw DomainError("r must be >= 0");
    }
}

// sum_{j<k} sum_{i<=j} H_{j-i}(r) c_i, with H precomputed.
double nested_poisson_sum(std::span<const double> h, std::span<const double> c) {
    const std::size_t k = c.size();
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            total += h[j - i] * c[i];
        }
    }
    return total;
}

// Bound on |phi(s) - k(lambda-1)| valid for every s >= r:
// k lambda * max_i |v_i - q0| * k * P(Poisson(r) < k), the last factor being
// nonincreasing in r.
double tail_bound(const ModelParams& params, const PopulationState& v, double r) {
    const auto k = static_cast<std::size_t>(params.k());
    const double q0 = params.sustaining_inactive();
    double c_max = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        c_max = std::max(c_max, std::abs(v[i] - q0));
    }
    std::vector<double> h(k);
    h_coeffs(r, h);
    double below_k = 0.0;
    for (double hj : h) {
        below_k += hj;
    }
    return params.rate() * c_max * static_cast<double>(k) * below_k;
}

template <class F>
double bisect_root(F&& f, double lo, double hi) {
    // f(lo) > 0 >= f(hi)
    double f_hi = f(hi);
    if (f_hi == 0.0) {
        return hi;
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = f(mid);
        if (std::abs(f_mid) < kRootTolerance) {
            return mid;
        }
        if (f_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    return hi;
}

// phi with the initial-state offsets and the H buffer held across evaluations.
class PhiFunction {
public:
    PhiFunction(const ModelParams& params, const PopulationState& v_init)
        : k_(params.k()), lambda_(params.lambda()), c_(static_cast<std::size_t>(params.k())),
          h_(static_cast<std::size_t>(params.k())) {
        const double q0 = params.sustaining_inactive();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c_[i] = v_init[i] - q0;
        }
    }

    double operator()(double r) const {
        h_coeffs(r, h_);
        return k_ * (lambda_ - 1.0 - lambda_ * nested_poisson_sum(h_, c_));
    }

    // dH_n/dr = H_{n-1} - H_n telescopes the double sum to k lambda sum_i H_{k-1-i} c_i.
    double derivative(double r) const {
        h_coeffs(r, h_);
        const std::size_t k = c_.size();
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            total += h_[k - 1 - i] * c_[i];
        }
        return k_ * lambda_ * total;
    }

private:
    int k_;
    double lambda_;
    std::vector<double> c_;
    mutable std::vector<double> h_;
};

// Zero of phi' in (lo, hi) given phi'(lo) < 0 < phi'(hi).
template <class F>
double interior_minimum(const F& f, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (f.derivative(mid) < 0.0 ? lo : hi) = mid;
    }
    return hi;
}

void require_active(const PopulationState& v) {
    if (!(v.active() > 0.0)) {
        throw DomainError(
            "frozen initial state: v_k(0) = 0, so the system remains in its initial state forever");
    }
}

}  // namespace

std::vector<double> vtilde(const ModelParams& params, const PopulationState& v_init, double r) {
    require_matching_stages(params, v_init);
    require_r(r);
    const auto k = static_cast<std::size_t>(params.k());
    const double q0 = params.sustaining_inactive();

    std::vector<double> h(k);
    h_coeffs(r, h);

    std::vector<double> out(k + 1);
    double inactive = 0.0;
    double cumulative_h = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double propagated = 0.0;
        for (std::size_t i = 0; i <= j; ++i) {
            propagated += h[j - i] * v_init[i];
        }
        // int_0^r H_j(s) ds = 1 - sum_{i<=j} H_i(r)
        cumulative_h += h[j];
        out[j] = propagated + q0 * (1.0 - cumulative_h);
        inactive += out[j];
    }
    out[k] = 1.0 - inactive;
    return out;
}

double phi(const ModelParams& params, const PopulationState& v_init, double r) {
    require_matching_stages(params, v_init);
    require_r(r);
    return PhiFunction(params, v_init)(r);
}

Classification classify(const ModelParams& params, const PopulationState& v_init, const ClassifyOptions& options) {
    require_matching_stages(params, v_init);
    require_active(v_init);
    if (!(options.r_max > 0.0) || options.n_scan < 2 || options.max_extensions < 0) {
        throw DomainError("classify needs r_max > 0, n_scan >= 2 and max_extensions >= 0");
    }
    const PhiFunction f(params, v_init);
    const double lambda = params.lambda();

    double seg_start = 0.0;
    double seg_end = options.r_max;
    for (int extension = 0;; ++extension) {
        const double step = (seg_end - seg_start) / options.n_scan;
        double prev = seg_start;
        for (int i = 1; i <= options.n_scan; ++i) {
            const double r = i == options.n_scan ? seg_end : seg_start + i * step;
            if (f(r) <= 0.0) {
                return Classification::extinct(bisect_root(f, prev, r));
            }
            // Both samples positive, but a shallow dip may hide between them.
            if (f.derivative(prev) < 0.0 && f.derivative(r) > 0.0) {
                const double r_min = interior_minimum(f, prev, r);
                if (f(r_min) <= 0.0) {
                    return Classification::extinct(bisect_root(f, prev, r_min));
                }
            }
            prev = r;
        }
        if (lambda > 1.0) {
            const double floor = params.k() * (lambda - 1.0);
            if (floor - tail_bound(params, v_init, seg_end) > 0.0) {
                return Classification::sustaining();
            }
        } else if (lambda == 1.0) {
            return Classification::extinct_asymptotic();
        }
        // lambda < 1: phi -> k(lambda-1) < 0, so a root exists further out.
        if (extension == options.max_extensions) {
            std::ostringstream msg;
            msg << "classification inconclusive up to r = " << seg_end;
            throw ConvergenceError(msg.str(), extension, f(seg_end));
        }
        seg_start = seg_end;
        seg_end *= 2.0;
    }
}

double time_of_r(const ModelParams& params, const PopulationState& v_init, double r) {
    require_matching_stages(params, v_init);
    if (std::isnan(r) || r < 0.0) {
        throw DomainError("time_of_r requires r >= 0");
    }
    if (r == 0.0) {
        return 0.0;
    }
    require_active(v_init);

    ClassifyOptions options;
    if (std::isfinite(r)) {
        options.r_max = std::max(options.r_max, r);
    }
    const Classification cls = classify(params, v_init, options);
    if (cls.outcome == Outcome::extinct) {
        if (r == cls.r0) {
            return std::numeric_limits<double>::infinity();
        }
        if (r > cls.r0) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "phi(s) <= 0 at s = " << cls.r0 << " < r = " << r << "; r is never reached";
            throw DomainError(msg.str());
        }
    }
    if (std::isinf(r)) {
        return std::numeric_limits<double>::infinity();
    }
    const PhiFunction f(params, v_init);
    const auto integrand = [&](double s) { return 1.0 / f(s); };
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, 0.0, r, 30,
                                                                         kQuadratureTolerance, &error);
}

void rhs(const ModelParams& params, std::span<const double> v, std::span<double> dv) {
    const auto k = static_cast<std::size_t>(params.k());
    const double drive = params.rate() * v[k];
    dv[0] = v[k] - v[0] * drive;
    for (std::size_t j = 1; j < k; ++j) {
        dv[j] = (v[j - 1] - v[j]) * drive;
    }
    dv[k] = -v[k] + v[k - 1] * drive;
}

Trajectory simulate_uniform(const ModelParams& params, const PopulationState& v_init, double t_end, double dt,
                            int stride) {
    require_matching_stages(params, v_init);
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw DomainError("t_end must be > 0");
    }
    if (!(dt > 0.0) || dt > kMaxUniformDt) {
        throw DomainError("dt must be in (0, 1e-2]");
    }
    if (stride < 1) {
        throw DomainError("snapshot stride must be >= 1");
    }
    const auto k = static_cast<std::size_t>(params.k());
    const std::size_t dim = k + 2;  // v_0..v_k, r
    const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    const double h = t_end / static_cast<double>(steps);

    std::vector<double> y(dim);
    std::copy(v_init.values().begin(), v_init.values().end(), y.begin());
    y[k + 1] = 0.0;

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    const auto deriv = [&](const std::vector<double>& state, std::vector<double>& out) {
        rhs(params, std::span<const double>(state.data(), k + 1), std::span<double>(out.data(), k + 1));
        out[k + 1] = params.rate() * state[k];
    };

    Trajectory traj;
    const auto record = [&](double t) {
        traj.times.push_back(t);
        traj.r.push_back(y[k + 1]);
        traj.states.emplace_back(y.begin(), y.begin() + static_cast<long>(k) + 1);
    };
    const auto observe = [&](long step) {
        double sum = 0.0;
        double lowest = y[0];
        for (std::size_t j = 0; j <= k; ++j) {
            sum += y[j];
            lowest = std::min(lowest, y[j]);
        }
        traj.invariants.observe(sum, lowest);
        if (lowest < -kNegativeTolerance) {
            std::ostringstream msg;
            msg << "uniform integration left the simplex at step " << step << " (t = " << step * h
                << ", min component " << lowest << "); reduce dt";
            throw InvariantViolation(msg.str());
        }
    };

    observe(0);
    record(0.0);
    for (long n = 1; n <= steps; ++n) {
        deriv(y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        deriv(tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        deriv(tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        deriv(tmp, k4);
        for (std::size_t i = 0; i < dim; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        observe(n);
        if (n % stride == 0 || n == steps) {
            record(n == steps ? t_end : static_cast<double>(n) * h);
        }
    }
    return traj;
}

double k1_analytic(double lambda, double v1_0, double t) {
    if (!(lambda > 0.0)) {
        throw DomainError("k1_analytic requires lambda > 0");
    }
    if (lambda == 1.0) {
        throw DomainError("k1_analytic is undefined at lambda = 1");
    }
    if (!(v1_0 > 0.0 && v1_0 <= 1.0)) {
        throw DomainError("k1_analytic requires v1(0) in (0, 1]");
    }
    if (!(t >= 0.0)) {
        throw DomainError("k1_analytic requires t >= 0");
    }
    const double a = lambda / (lambda - 1.0);
    return v1_0 / (a * v1_0 + (1.0 - a * v1_0) * std::exp(-(lambda - 1.0) * t));
}

UniformSolution::UniformSolution(ModelParams params, PopulationState v_init)
    : params_(params), v_init_(std::move(v_init)) {
    require_matching_stages(params_, v_init_);
}

}  // namespace gcp::uniform
