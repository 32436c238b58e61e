#pragma once

#include <span>

namespace gcp {

/// H_j(r) = exp(-r) r^j / j!, the Poisson(r) weight of j. These fill the j-th
/// subdiagonal of exp(A r) for the bidiagonal stage matrix A = -I + B_k.
double h_coeff(int j, double r);

/// Fills out[j] = H_j(r) for j = 0 .. out.size()-1 with one exponential.
void h_coeffs(double r, std::span<double> out);

}  // namespace gcp
