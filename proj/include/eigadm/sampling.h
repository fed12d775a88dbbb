#pragma once

#include <cstddef>
#include <vector>

#include "eigadm/linalg.h"
#include "eigadm/rng.h"
#include "eigadm/spectrum.h"

namespace eigadm {

/// Haar-distributed element of O(p): QR of a Gaussian matrix with the
/// columns of Q multiplied by the signs of diag(R).
OrthogonalMatrix sample_haar_orthogonal(RngStream& stream, std::size_t p);

/// n sorted i.i.d. uniforms: 0 < r_1 < ... < r_n < 1.
std::vector<double> sample_ordered_unit(RngStream& stream, std::size_t n);

/// Gamma(shape, 1) via Marsaglia-Tsang squeeze/rejection; shape < 1 is
/// handled with the U^(1/shape) boost.
double sample_gamma(RngStream& stream, double shape);

/// Chi-square with `df` degrees of freedom (df > 0, not necessarily integer).
double sample_chi_square(RngStream& stream, double df);

/// S ~ W_p(nu, diag(lambda)) by Bartlett decomposition. Requires nu >= p.
SymmetricMatrix sample_wishart(RngStream& stream, int nu, const Spectrum& lambda);

/// Descending eigenvalues of a W_p(nu, diag(lambda)) draw.
Spectrum sample_wishart_eigs(RngStream& stream, int nu, const Spectrum& lambda);

/// Descending eigenvalues of a positive definite symmetric matrix.
/// Throws invalid_input for non-finite entries or a non-positive eigenvalue.
Spectrum eig_sym_desc(const SymmetricMatrix& m);

}  // namespace eigadm
