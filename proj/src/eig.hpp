#pragma once

#include <complex>
#include <vector>

#include "statespace.hpp"

namespace idob {

// Eigenvalues of a real square matrix: balancing, Householder reduction to
// upper Hessenberg form, then Francis double-shift QR. Throws
// NumericalFailure when an eigenvalue does not converge.
std::vector<std::complex<double>> eigenvalues(const Mat& M);

double spectral_radius(const Mat& M);

}  // namespace idob
