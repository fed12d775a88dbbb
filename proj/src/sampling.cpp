#include "eigadm/sampling.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "eigadm/error.h"

namespace eigadm {

OrthogonalMatrix sample_haar_orthogonal(RngStream& stream, std::size_t p) {
  if (p == 0) {
    throw Error(Errc::invalid_dimension, "sample_haar_orthogonal: p must be at least 1");
  }
  Matrix z(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) z(i, j) = stream.normal();

  auto [q, r] = householder_qr(z);
  for (std::size_t j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) {
      for (std::size_t i = 0; i < p; ++i) q(i, j) = -q(i, j);
    }
  }
  return OrthogonalMatrix(std::move(q));
}

std::vector<double> sample_ordered_unit(RngStream& stream, std::size_t n) {
  std::vector<double> r(n);
  for (double& x : r) x = stream.uniform();
  std::sort(r.begin(), r.end());
  return r;
}

double sample_gamma(RngStream& stream, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw Error(Errc::invalid_parameter, "sample_gamma: shape must be positive and finite");
  }
  if (shape < 1.0) {
    const double g = sample_gamma(stream, shape + 1.0);
    return g * std::pow(stream.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = stream.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_chi_square(RngStream& stream, double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw Error(Errc::invalid_parameter,
                "sample_chi_square: degrees of freedom must be positive, got " + std::to_string(df));
  }
  return 2.0 * sample_gamma(stream, 0.5 * df);
}

SymmetricMatrix sample_wishart(RngStream& stream, int nu, const Spectrum& lambda) {
  const std::size_t p = lambda.size();
  if (nu < 0 || static_cast<std::size_t>(nu) < p) {
    throw Error(Errc::invalid_parameter, "sample_wishart: need nu >= p (nu=" + std::to_string(nu) +
                                             ", p=" + std::to_string(p) + ")");
  }
  // Bartlett factor scaled by diag(sqrt(lambda)): b = L A, S = b b^T.
  Matrix b(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    const double scale = std::sqrt(lambda[i]);
    b(i, i) = scale * std::sqrt(sample_chi_square(stream, static_cast<double>(nu) - i));
    for (std::size_t j = 0; j < i; ++j) b(i, j) = scale * stream.normal();
  }
  SymmetricMatrix s(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= j; ++k) acc += b(i, k) * b(j, k);
      s.set(i, j, acc);
    }
  }
  return s;
}

Spectrum sample_wishart_eigs(RngStream& stream, int nu, const Spectrum& lambda) {
  return eig_sym_desc(sample_wishart(stream, nu, lambda));
}

Spectrum eig_sym_desc(const SymmetricMatrix& m) {
  if (m.size() == 0) {
    throw Error(Errc::invalid_dimension, "eig_sym_desc: empty matrix");
  }
  auto eig = symmetric_eigen(m);
  if (!(eig.values.back() > 0.0)) {
    throw Error(Errc::invalid_input, "matrix is not positive definite (smallest eigenvalue " +
                                         std::to_string(eig.values.back()) + ")");
  }
  return Spectrum::sample(std::move(eig.values));
}

}  // namespace eigadm
