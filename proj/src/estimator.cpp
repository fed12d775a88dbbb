#include "eigadm/estimator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eigadm/error.h"
#include "eigadm/sampling.h"

namespace eigadm {

namespace {

void require_nu(int nu, std::size_t p, const char* who) {
  if (nu < 1 || static_cast<std::size_t>(nu) < p) {
    throw Error(Errc::invalid_parameter, std::string(who) + ": need nu >= p (nu=" +
                                             std::to_string(nu) + ", p=" + std::to_string(p) + ")");
  }
}

}  // namespace

void McConfig::validate() const {
  if (n_points == 0) {
    throw Error(Errc::invalid_config, "McConfig: n_points must be at least 1");
  }
}

double TauMatrix::row_sum(std::size_t i) const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < p(); ++j) s += (*this)(i, j);
  return s;
}

Matrix TauMatrix::entries() const {
  Matrix t(p(), p());
  for (std::size_t i = 0; i < p(); ++i)
    for (std::size_t j = 0; j < p(); ++j) t(i, j) = (*this)(i, j);
  return t;
}

TauMatrix TauMatrix::from_entries(int nu, const Matrix& tau) {
  if (tau.rows() != tau.cols()) {
    throw Error(Errc::dimension_mismatch, "TauMatrix: entries must be square");
  }
  TauMatrix out;
  out.nu = nu;
  out.weights = Matrix(tau.rows(), tau.cols());
  for (std::size_t i = 0; i < tau.rows(); ++i)
    for (std::size_t j = 0; j < tau.cols(); ++j) out.weights(i, j) = tau(i, j) * (nu + 2.0);
  out.std_error = Matrix(tau.rows(), tau.cols());
  out.row_ess.assign(tau.rows(), std::numeric_limits<double>::quiet_NaN());
  return out;
}

TauMatrix compute_tau(const Spectrum& l, int nu, const McConfig& mc, RngStream& stream) {
  mc.validate();
  const std::size_t p = l.size();
  require_nu(nu, p, "compute_tau");

  TauMatrix out;
  out.nu = nu;
  out.weights = Matrix(p, p);
  out.std_error = Matrix(p, p);
  out.row_ess.assign(p, static_cast<double>(mc.n_points));
  if (p == 1) {
    out.weights(0, 0) = 1.0;
    return out;
  }

  std::vector<double> scaled(p);
  for (std::size_t k = 0; k < p; ++k) scaled[k] = l[k] / l.largest();

  const double half_nu = 0.5 * nu;
  const double power = p * half_nu + 2.0;
  const std::size_t n = mc.n_points;
  // Per node: squared entries of H (row-major), log r_s with log r_p = 0,
  // and the row-independent part of the log weight.
  std::vector<double> node_h2(n * p * p);
  std::vector<double> node_log_r(n * p, 0.0);
  std::vector<double> node_log_weight(n);

  std::vector<double> r;
  Matrix h2(p, p);
  for (std::size_t k = 0; k < n; ++k) {
    const bool mirrored = mc.antithetic && (k % 2 == 1);
    if (mirrored) {
      std::vector<double> reflected(p - 1);
      for (std::size_t s = 0; s + 1 < p; ++s) reflected[s] = 1.0 - r[p - 2 - s];
      r = std::move(reflected);
    } else {
      const auto h = sample_haar_orthogonal(stream, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) h2(i, j) = h(i, j) * h(i, j);
      r = sample_ordered_unit(stream, p - 1);
    }

    std::copy(h2.data().begin(), h2.data().end(), node_h2.begin() + k * p * p);
    double* log_r = node_log_r.data() + k * p;
    double a = 0.0;
    double log_r_sum = 0.0;
    for (std::size_t s = 0; s < p; ++s) {
      double y = 0.0;
      for (std::size_t j = 0; j < p; ++j) y += scaled[j] * h2(s, j);
      const double rs = s + 1 < p ? r[s] : 1.0;
      a += rs * y;
      if (s + 1 < p) {
        log_r[s] = std::log(rs);
        log_r_sum += log_r[s];
      }
    }
    a *= 0.5;
    node_log_weight[k] = -power * std::log(a) + (half_nu - 1.0) * log_r_sum;
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < p; ++i) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = node_log_weight[k] + 2.0 * node_log_r[k * p + i];
      max_log = std::max(max_log, w[k]);
    }
    double den = 0.0;
    double den_sq = 0.0;
    std::vector<double> num(p, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = std::exp(w[k] - max_log);
      den += w[k];
      den_sq += w[k] * w[k];
      for (std::size_t j = 0; j < p; ++j) num[j] += w[k] * node_h2[(k * p + i) * p + j];
    }
    for (std::size_t j = 0; j < p; ++j) {
      const double ratio = num[j] / den;
      out.weights(i, j) = ratio;
      double var = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double wk = w[k] / den;
        const double dev = node_h2[(k * p + i) * p + j] - ratio;
        var += wk * wk * dev * dev;
      }
      out.std_error(i, j) = std::sqrt(var) / (nu + 2.0);
    }
    out.row_ess[i] = den * den / den_sq;
  }
  return out;
}

EstimateResult psi_star(const Spectrum& l, const TauMatrix& tau) {
  const std::size_t p = l.size();
  if (tau.p() != p) {
    throw Error(Errc::dimension_mismatch, "psi_star: tau is " + std::to_string(tau.p()) + "x" +
                                              std::to_string(tau.p()) + " but l has " +
                                              std::to_string(p) + " values");
  }
  EstimateResult out;
  out.psi.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) acc += tau.weights(i, j) * l[j];
    out.psi[i] = acc / (tau.nu + 2.0);
  }
  out.tau = tau;
  out.row_ess = tau.row_ess;
  return out;
}

EstimateResult estimate_psi_star(const Spectrum& l, int nu, const McConfig& mc,
                                 RngStream& stream) {
  return psi_star(l, compute_tau(l, nu, mc, stream));
}

std::vector<double> phi_star(const Spectrum& l, int nu) {
  if (nu < 1) throw Error(Errc::invalid_parameter, "phi_star: nu must be positive");
  std::vector<double> out(l.values().begin(), l.values().end());
  for (double& v : out) v /= nu + 2.0;
  return out;
}

std::vector<double> mle(const Spectrum& l, int nu) {
  if (nu < 1) throw Error(Errc::invalid_parameter, "mle: nu must be positive");
  std::vector<double> out(l.values().begin(), l.values().end());
  for (double& v : out) v /= static_cast<double>(nu);
  return out;
}

Matrix tilde_tau(const TauMatrix& tau, const Spectrum& l) {
  const std::size_t p = l.size();
  if (tau.p() != p) throw Error(Errc::dimension_mismatch, "tilde_tau: dimension mismatch");
  Matrix out(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) out(i, j) = tau(i, j) * l[j] / l[i];
  return out;
}

double loss(std::span<const double> psi, const Spectrum& lambda) {
  if (psi.size() != lambda.size()) {
    throw Error(Errc::dimension_mismatch, "loss: estimate has " + std::to_string(psi.size()) +
                                              " values, lambda has " +
                                              std::to_string(lambda.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double d = psi[i] / lambda[i] - 1.0;
    total += d * d;
  }
  return total;
}

}  // namespace eigadm
