#include "gcp/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gcp/csv.hpp"
#include "gcp/error.hpp"
#include "gcp/parallel.hpp"

namespace gcp::stability {

namespace {

using cdouble = std::complex<double>;

// p(y) = y^{k+1} - (1-beta) y^k - beta, coefficients highest degree first.
std::vector<double> multiplied_polynomial(int k, double beta) {
    std::vector<double> c(static_cast<std::size_t>(k) + 2, 0.0);
    c[0] = 1.0;
    c[1] = -(1.0 - beta);
    c.back() -= beta;
    return c;
}

cdouble horner(const std::vector<double>& c, cdouble y) {
    cdouble p = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) {
        p = p * y + c[i];
    }
    return p;
}

cdouble horner_derivative(const std::vector<double>& c, cdouble y) {
    const std::size_t degree = c.size() - 1;
    cdouble d = static_cast<double>(degree) * c[0];
    for (std::size_t i = 1; i < degree; ++i) {
        d = d * y + static_cast<double>(degree - i) * c[i];
    }
    return d;
}

std::vector<cdouble> companion_roots(const std::vector<double>& c) {
    const auto n = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        companion(0, j) = -c[static_cast<std::size_t>(j) + 1] / c[0];
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        companion(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("companion eigenvalue iteration did not converge", 0, 0.0);
    }
    std::vector<cdouble> roots(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    }
    return roots;
}

// A few Newton corrections, kept only while they reduce |p|.
cdouble polish(const std::vector<double>& c, cdouble y) {
    double best = std::abs(horner(c, y));
    for (int it = 0; it < 4 && best > 0.0; ++it) {
        const cdouble d = horner_derivative(c, y);
        if (d == 0.0) {
            break;
        }
        const cdouble next = y - horner(c, y) / d;
        const double value = std::abs(horner(c, next));
        if (!(value < best)) {
            break;
        }
        y = next;
        best = value;
    }
    return y;
}

void require_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be finite and >= 0");
    }
}

}  // namespace

Spectrum sustaining_spectrum_detail(int k, double beta) {
    if (k < 1) {
        throw DomainError("sustaining_spectrum requires k >= 1");
    }
    require_beta(beta);
    Spectrum out;
    const auto ku = static_cast<std::size_t>(k);
    if (beta == 0.0) {
        // p(y) = y^k (y - 1): A alone, x = -1 with multiplicity k. The
        // companion route would only resolve the k-fold root to eps^(1/k).
        out.eigenvalues.assign(ku, cdouble(-1.0, 0.0));
        out.discarded_root = 1.0;
        return out;
    }
    const std::vector<double> c = multiplied_polynomial(k, beta);
    std::vector<cdouble> roots = companion_roots(c);
    const auto spurious = std::min_element(roots.begin(), roots.end(), [](cdouble a, cdouble b) {
        return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    out.discarded_root = *spurious;
    roots.erase(spurious);

    out.eigenvalues.reserve(ku);
    for (const cdouble& y : roots) {
        out.eigenvalues.push_back(polish(c, y) - 1.0);
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](cdouble a, cdouble b) {
        if (a.real() != b.real()) {
            return a.real() > b.real();
        }
        return a.imag() > b.imag();
    });
    return out;
}

std::vector<std::complex<double>> sustaining_spectrum(int k, double beta) {
    return sustaining_spectrum_detail(k, beta).eigenvalues;
}

double characteristic_residual(int k, double beta, std::complex<double> x) {
    const cdouble y = x + 1.0;
    const cdouble yk = std::pow(y, k);
    const cdouble value = yk * (y - (1.0 - beta)) - beta;
    const double ay = std::abs(y);
    const double scale = std::pow(ay, k + 1) + std::abs(1.0 - beta) * std::pow(ay, k) + beta;
    return std::abs(value) / scale;
}

double beta_of_mode(const ModelParams& params, const Kernel& kernel, double xi) {
    if (!params.has_sustaining_state()) {
        throw DomainError("beta(xi) requires lambda > 1: the sustaining state does not exist otherwise");
    }
    const double alpha = (params.lambda() - 1.0) * params.k();
    // Clamp rounding in 1 - J^ near xi = 0; J^ <= 1 holds analytically.
    return std::max(0.0, (1.0 - kernel.fourier(xi)) / alpha);
}

StabilityReport sustaining_report(const ModelParams& params, const Kernel& kernel, const Grid1D& grid, int n_modes,
                                  int threads) {
    if (!params.has_sustaining_state()) {
        throw DomainError("sustaining_report requires lambda > 1");
    }
    if (n_modes < 0) {
        throw DomainError("n_modes must be >= 0");
    }
    const double alpha = (params.lambda() - 1.0) * params.k();
    StabilityReport report{params, kernel, {}, 0.0};
    report.modes.resize(static_cast<std::size_t>(2 * n_modes + 1));

    WorkerPool pool(threads);
    pool.parallel_for(report.modes.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            ModeSpectrum& mode = report.modes[idx];
            mode.mode = static_cast<int>(idx) - n_modes;
            mode.xi = mode.mode / grid.length();
            mode.beta = beta_of_mode(params, kernel, mode.xi);
            mode.eigenvalues = sustaining_spectrum(params.k(), mode.beta);
            mode.max_rate = alpha * mode.eigenvalues.front().real();
        }
    });

    report.max_rate = report.modes.front().max_rate;
    for (const ModeSpectrum& mode : report.modes) {
        report.max_rate = std::max(report.max_rate, mode.max_rate);
    }
    if (!(report.max_rate < 0.0)) {
        std::ostringstream msg;
        msg << "sustaining state reported linearly unstable: max rate " << report.max_rate;
        throw InvariantViolation(msg.str());
    }
    return report;
}

void write_csv(const StabilityReport& report, std::ostream& out) {
    const int k = report.params.k();
    std::vector<std::string> columns{"xi", "beta"};
    for (int i = 1; i <= k; ++i) {
        columns.push_back("re_x_" + std::to_string(i));
    }
    for (int i = 1; i <= k; ++i) {
        columns.push_back("im_x_" + std::to_string(i));
    }
    columns.push_back("max_rate");
    csv::write_header(out, columns);

    std::vector<double> row;
    for (const ModeSpectrum& mode : report.modes) {
        row.clear();
        row.push_back(mode.xi);
        row.push_back(mode.beta);
        for (const auto& x : mode.eigenvalues) {
            row.push_back(x.real());
        }
        for (const auto& x : mode.eigenvalues) {
            row.push_back(x.imag());
        }
        row.push_back(mode.max_rate);
        csv::write_row(out, row);
    }
}

double inert_rate_k1(double lambda, const Kernel& kernel, double xi) {
    if (!(lambda > 0.0)) {
        throw DomainError("lambda must be > 0");
    }
    return lambda * kernel.fourier(xi) - 1.0;
}

double inert_decay_kgt1(int k, double f_k_0, double t) {
    if (k < 2) {
        throw DomainError("inert_decay_kgt1 requires k >= 2; use inert_rate_k1 for k = 1");
    }
    if (!(t >= 0.0)) {
        throw DomainError("t must be >= 0");
    }
    return f_k_0 * std::exp(-t);
}

}  // namespace gcp::stability
