#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eigadm/linalg.h"
#include "eigadm/rng.h"
#include "eigadm/spectrum.h"

namespace eigadm {

/// Integration budget for the tau integral.
struct McConfig {
  std::size_t n_points = 1000;
  /// Pairs each (H, r) with (H, r') where r' is the reflected order
  /// statistic vector (1 - r_{p-1}, ..., 1 - r_1). Reflecting H itself is
  /// useless here because the integrand only sees squared entries of H.
  bool antithetic = false;

  /// Throws Error(invalid_config) when n_points is zero.
  void validate() const;
};

/// Shrinkage weights tau_ij(l). Stored as `weights` = (nu + 2) * tau so that
/// every row is a probability vector and p = 1 reduces to exactly 1.
struct TauMatrix {
  int nu = 0;
  Matrix weights;
  /// Monte Carlo standard error of each tau_ij (self-normalized delta method).
  Matrix std_error;
  /// Effective sample size (sum w)^2 / sum w^2 of each row's weights.
  std::vector<double> row_ess;

  std::size_t p() const noexcept { return weights.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return weights(i, j) / (nu + 2.0);
  }
  double row_sum(std::size_t i) const noexcept;
  Matrix entries() const;

  /// Builds a TauMatrix from raw tau entries (no diagnostics).
  static TauMatrix from_entries(int nu, const Matrix& tau);
};

struct EstimateResult {
  std::vector<double> psi;  // order as computed, not re-sorted
  TauMatrix tau;
  std::vector<double> row_ess;
};

/// Self-normalized Monte Carlo estimate of tau_ij(l) over paired draws
/// (H, r) from Haar measure on O(p) and the ordered simplex 0 < r_1 < ... <
/// r_{p-1} < 1. Every numerator and denominator shares one point set.
/// `l` is rescaled by l_1 first, which leaves tau unchanged.
TauMatrix compute_tau(const Spectrum& l, int nu, const McConfig& mc, RngStream& stream);

/// psi_i = sum_j tau_ij l_j.
EstimateResult psi_star(const Spectrum& l, const TauMatrix& tau);

/// compute_tau followed by psi_star.
EstimateResult estimate_psi_star(const Spectrum& l, int nu, const McConfig& mc,
                                 RngStream& stream);

/// l / (nu + 2).
std::vector<double> phi_star(const Spectrum& l, int nu);

/// l / nu.
std::vector<double> mle(const Spectrum& l, int nu);

/// tau_ij * l_j / l_i; row sums times l_i reproduce psi_i.
Matrix tilde_tau(const TauMatrix& tau, const Spectrum& l);

/// Scale-invariant squared error: sum_i (psi_i / lambda_i - 1)^2.
double loss(std::span<const double> psi, const Spectrum& lambda);

}  // namespace eigadm
