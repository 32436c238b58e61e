#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "gcp/grid.hpp"
#include "gcp/kernel.hpp"
#include "gcp/model.hpp"

namespace gcp::stability {

// Linearization around the sustaining state. In Fourier mode xi the
// perturbation of the inactive stages obeys
//     d f^/dt = alpha (A - beta(xi) M) f^,   alpha = (lambda-1) k,
// with A = -I + B_k and M the matrix whose top row is all ones.
// With y = x + 1 the eigenvalues x of A - beta M solve y^k (y - (1-beta)) = beta.

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;  // x = y - 1, sorted by descending real part
    std::complex<double> discarded_root;            // companion root nearest y = 1, removed
};

/// Roots of the degree-(k+1) polynomial y^{k+1} - (1-beta) y^k - beta from
/// its companion matrix; the spurious root y = 1 is removed and the remaining
/// k roots are returned as x = y - 1. Throws DomainError for beta < 0.
Spectrum sustaining_spectrum_detail(int k, double beta);
std::vector<std::complex<double>> sustaining_spectrum(int k, double beta);

/// |y^k (y - (1-beta)) - beta| / (|y|^{k+1} + |1-beta| |y|^k + beta) at y = x + 1:
/// the backward error of x as a root of the characteristic equation.
double characteristic_residual(int k, double beta, std::complex<double> x);

/// beta(xi) = (1 - J^(xi)) / ((lambda-1) k). Throws DomainError for lambda <= 1.
double beta_of_mode(const ModelParams& params, const Kernel& kernel, double xi);

struct ModeSpectrum {
    int mode = 0;  // m, with xi = m / L
    double xi = 0.0;
    double beta = 0.0;
    std::vector<std::complex<double>> eigenvalues;
    double max_rate = 0.0;  // alpha * max Re(x): physical decay rate of the slowest component
};

struct StabilityReport {
    ModelParams params;
    Kernel kernel;
    std::vector<ModeSpectrum> modes;  // m = -n_modes .. n_modes
    double max_rate = 0.0;
};

/// Spectra at xi = m / L for |m| <= n_modes. Throws InvariantViolation if any
/// rate is >= 0, which would contradict linear stability.
StabilityReport sustaining_report(const ModelParams& params, const Kernel& kernel, const Grid1D& grid, int n_modes,
                                  int threads = 1);

/// Columns xi, beta, re_x_1..k, im_x_1..k, max_rate.
void write_csv(const StabilityReport& report, std::ostream& out);

/// Growth rate lambda J^(xi) - 1 of mode xi around the inert state v_0 = 1 for k = 1.
double inert_rate_k1(double lambda, const Kernel& kernel, double xi);

/// Linearized inert-state amplitude f_k(t) = f_k(0) e^{-t} for k >= 2.
double inert_decay_kgt1(int k, double f_k_0, double t);

}  // namespace gcp::stability
