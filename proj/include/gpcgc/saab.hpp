#pragma once

#include <cstddef>
#include <vector>

#include "gpcgc/errors.hpp"

namespace gpcgc {

// Orthonormal data-driven patch transform. Kernel 0 is the constant vector
// with entries 1/sqrt(dim); kernels 1..dim-1 are eigenvectors of the
// covariance of DC-removed training patches, ordered by non-increasing
// eigenvalue, each with its largest-magnitude entry made positive.
struct SaabTransform {
  int dim = 0;
  std::vector<double> kernels;      // dim x dim, kernel k at [k*dim, (k+1)*dim)
  std::vector<double> eigenvalues;  // slot 0 holds the mean squared DC coefficient

  const double* kernel(int k) const { return kernels.data() + static_cast<std::size_t>(k) * dim; }
};

// coefficients = K^T * patch
std::vector<double> saab_forward(const SaabTransform& t, const std::vector<double>& patch);

// patch = K * coefficients; exact inverse up to rounding.
std::vector<double> saab_inverse(const SaabTransform& t, const std::vector<double>& coeffs);

// Fits the transform from training patches (each of length dim). Requires at
// least two patches. When the DC-removed patches carry no energy the AC
// kernels fall back to a canonical orthonormal completion of the DC kernel.
SaabTransform fit_saab(const std::vector<std::vector<double>>& patches, int dim);

}  // namespace gpcgc
