#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eigadm/estimator.h"
#include "eigadm/spectrum.h"

namespace eigadm {

enum class EstimatorKind { psi_star, phi_star, mle };

std::string_view to_string(EstimatorKind kind) noexcept;
/// Accepts "psi_star", "phi_star", "mle". Throws invalid_config otherwise.
EstimatorKind parse_estimator(std::string_view name);

/// Whether each replicate draws its own tau integration points or all
/// replicates share one fixed point set.
enum class TauPoints { fresh, frozen };

std::string_view to_string(TauPoints mode) noexcept;
TauPoints parse_tau_points(std::string_view name);

struct Scenario {
  int nu = 5;
  Spectrum lambda = Spectrum::population({1.0, 1.0});
  std::size_t n_rep = 10000;
  McConfig mc;
  std::uint64_t seed = 42;
  EstimatorKind estimator = EstimatorKind::psi_star;
  TauPoints tau_points = TauPoints::fresh;
  /// Worker threads; 0 picks the hardware concurrency. Results never
  /// depend on this value.
  unsigned threads = 1;

  std::size_t p() const noexcept { return lambda.size(); }
  /// Throws Error(invalid_config / invalid_parameter) on a bad scenario.
  void validate() const;
};

struct RiskEstimate {
  double mean_loss = 0.0;
  /// Sample standard deviation of replicate losses over sqrt(n_rep).
  double std_error = 0.0;
  std::size_t n_rep = 0;
  /// Smallest per-row effective sample size seen (psi_star only).
  std::optional<double> ess_min;
  std::size_t nonfinite_count = 0;
  /// 99.9th percentile of the replicate losses, how many replicates exceed
  /// it, and the share of the total loss those replicates carry.
  double tail_threshold = 0.0;
  std::size_t tail_count = 0;
  double tail_share = 0.0;

  friend bool operator==(const RiskEstimate&, const RiskEstimate&) = default;
};

/// Mean loss over n_rep Wishart replicates. Replicate k draws its sample
/// eigenvalues from derive_stream(RngStream(seed), k).derive(0) and its tau
/// points from .derive(1) (fresh) or from one shared stream (frozen).
RiskEstimate simulate_risk(const Scenario& s);

/// 2p/(nu+2) + p(p-1) nu/(nu+2)^2: exact risk of l/(nu+2) when Sigma = I.
double analytic_phi_star_risk_identity(std::size_t p, int nu);

/// p(p+1)/nu: exact risk of l/nu when Sigma = I.
double analytic_mle_risk_identity(std::size_t p, int nu);

struct ReportRow {
  Spectrum lambda;
  int nu = 0;
  EstimatorKind estimator = EstimatorKind::psi_star;
  RiskEstimate risk;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportMetadata {
  std::uint64_t seed = 0;
  std::size_t n_points = 0;
  std::size_t n_rep = 0;
  std::string version;
  std::int64_t wall_ms = 0;

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

/// Flat list of (lambda, nu, estimator) risk rows.
struct RiskReport {
  ReportMetadata metadata;
  std::vector<ReportRow> rows;

  friend bool operator==(const RiskReport&, const RiskReport&) = default;
};

/// One cell of the published risk tables.
struct ReferenceCell {
  std::vector<double> lambda;
  int nu = 0;
  double psi_star = 0.0;
  double phi_star = 0.0;
  /// Cells whose psi_star risk is dominated by rare huge losses.
  bool divergent = false;
};

/// Published cells for table 1 (p = 2) or table 2 (p = 3), in row order
/// then nu order {5, 20, 50}. Throws invalid_config for other ids.
const std::vector<ReferenceCell>& reference_table(int table);

struct TableOptions {
  std::uint64_t seed = 42;
  std::size_t n_rep = 10000;
  McConfig mc;
  TauPoints tau_points = TauPoints::fresh;
  unsigned threads = 1;
  std::vector<EstimatorKind> estimators{EstimatorKind::psi_star, EstimatorKind::phi_star};
};

/// Simulates every cell of a reference table. Rows are ordered by lambda
/// pattern, then nu, then estimator. Every cell uses `seed` (common random
/// numbers across cells). wall_ms is left at 0.
RiskReport reproduce_tables(int table, const TableOptions& options);

std::string_view library_version() noexcept;

}  // namespace eigadm
