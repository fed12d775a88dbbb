#include "eigadm/risk.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "eigadm/error.h"
#include "eigadm/rng.h"
#include "eigadm/sampling.h"

namespace eigadm {

namespace {

constexpr double kTailQuantile = 0.999;

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t k = t; k < n; k += threads) fn(k);
    });
  }
}

std::vector<double> apply_estimator(const Scenario& s, const Spectrum& l, RngStream& tau_stream,
                                    double& ess) {
  switch (s.estimator) {
    case EstimatorKind::phi_star:
      return phi_star(l, s.nu);
    case EstimatorKind::mle:
      return mle(l, s.nu);
    case EstimatorKind::psi_star: {
      auto est = estimate_psi_star(l, s.nu, s.mc, tau_stream);
      ess = *std::min_element(est.row_ess.begin(), est.row_ess.end());
      return std::move(est.psi);
    }
  }
  return {};
}

}  // namespace

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::psi_star: return "psi_star";
    case EstimatorKind::phi_star: return "phi_star";
    case EstimatorKind::mle: return "mle";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "psi_star") return EstimatorKind::psi_star;
  if (name == "phi_star") return EstimatorKind::phi_star;
  if (name == "mle") return EstimatorKind::mle;
  throw Error(Errc::invalid_config, "unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(TauPoints mode) noexcept {
  return mode == TauPoints::fresh ? "fresh" : "frozen";
}

TauPoints parse_tau_points(std::string_view name) {
  if (name == "fresh") return TauPoints::fresh;
  if (name == "frozen") return TauPoints::frozen;
  throw Error(Errc::invalid_config, "unknown tau_points mode '" + std::string(name) + "'");
}

void Scenario::validate() const {
  if (nu < 1 || static_cast<std::size_t>(nu) < p()) {
    throw Error(Errc::invalid_parameter, "scenario: need nu >= p (nu=" + std::to_string(nu) +
                                             ", p=" + std::to_string(p()) + ")");
  }
  if (n_rep == 0) throw Error(Errc::invalid_config, "scenario: n_rep must be at least 1");
  mc.validate();
}

RiskEstimate simulate_risk(const Scenario& s) {
  s.validate();
  const RngStream root(s.seed, 0);
  const RngStream frozen_root(s.seed, 1);

  std::vector<double> losses(s.n_rep);
  std::vector<double> ess(s.n_rep, std::numeric_limits<double>::infinity());

  parallel_for(s.n_rep, s.threads, [&](std::size_t k) {
    const RngStream replicate = derive_stream(root, k);
    RngStream wishart_stream = replicate.derive(0);
    RngStream tau_stream = s.tau_points == TauPoints::fresh ? replicate.derive(1) : frozen_root;
    const Spectrum l = sample_wishart_eigs(wishart_stream, s.nu, s.lambda);
    const auto estimate = apply_estimator(s, l, tau_stream, ess[k]);
    losses[k] = loss(estimate, s.lambda);
  });

  RiskEstimate out;
  out.n_rep = s.n_rep;
  double sum = 0.0;
  std::vector<double> finite;
  finite.reserve(losses.size());
  for (double v : losses) {
    sum += v;
    if (std::isfinite(v)) {
      finite.push_back(v);
    } else {
      ++out.nonfinite_count;
    }
  }
  const double n = static_cast<double>(s.n_rep);
  out.mean_loss = sum / n;
  if (s.n_rep > 1) {
    double ss = 0.0;
    for (double v : losses) ss += (v - out.mean_loss) * (v - out.mean_loss);
    out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  if (s.estimator == EstimatorKind::psi_star) {
    out.ess_min = *std::min_element(ess.begin(), ess.end());
  }

  if (!finite.empty()) {
    std::vector<double> sorted = finite;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(std::ceil(kTailQuantile * sorted.size()));
    out.tail_threshold = sorted[std::max<std::size_t>(rank, 1) - 1];
    double tail_sum = 0.0;
    double finite_sum = 0.0;
    for (double v : finite) {
      finite_sum += v;
      if (v > out.tail_threshold) {
        ++out.tail_count;
        tail_sum += v;
      }
    }
    out.tail_share = finite_sum > 0.0 ? tail_sum / finite_sum : 0.0;
  }
  return out;
}

double analytic_phi_star_risk_identity(std::size_t p, int nu) {
  if (p == 0 || nu < 1 || static_cast<std::size_t>(nu) < p) {
    throw Error(Errc::invalid_parameter, "analytic_phi_star_risk_identity: need nu >= p >= 1");
  }
  const double pd = static_cast<double>(p);
  const double d = nu + 2.0;
  return 2.0 * pd / d + pd * (pd - 1.0) * nu / (d * d);
}

double analytic_mle_risk_identity(std::size_t p, int nu) {
  if (p == 0 || nu < 1 || static_cast<std::size_t>(nu) < p) {
    throw Error(Errc::invalid_parameter, "analytic_mle_risk_identity: need nu >= p >= 1");
  }
  const double pd = static_cast<double>(p);
  return pd * (pd + 1.0) / nu;
}

const std::vector<ReferenceCell>& reference_table(int table) {
  // {lambda, nu, psi_star risk, phi_star risk, divergent}
  static const std::vector<ReferenceCell> kTable1 = {
      {{1.0, 1.0}, 5, 0.623, 0.776, false},    {{1.0, 1.0}, 20, 0.184, 0.263, false},
      {{1.0, 1.0}, 50, 0.077, 0.114, false},   {{1.0, 0.8}, 5, 0.584, 0.689, false},
      {{1.0, 0.8}, 20, 0.160, 0.203, false},   {{1.0, 0.8}, 50, 0.065, 0.078, false},
      {{1.0, 0.6}, 5, 0.565, 0.637, false},    {{1.0, 0.6}, 20, 0.169, 0.180, false},
      {{1.0, 0.6}, 50, 0.080, 0.074, false},   {{1.0, 0.4}, 5, 0.587, 0.624, false},
      {{1.0, 0.4}, 20, 0.199, 0.185, false},   {{1.0, 0.4}, 50, 0.086, 0.078, false},
      {{1.0, 0.2}, 5, 0.628, 0.634, false},    {{1.0, 0.2}, 20, 0.197, 0.186, false},
      {{1.0, 0.2}, 50, 0.077, 0.077, false},   {{1.0, 0.01}, 5, 0.643, 0.633, false},
      {{1.0, 0.01}, 20, 0.240, 0.188, false},  {{1.0, 0.01}, 50, 0.151, 0.079, false},
      {{1.0, 0.001}, 5, 23.271, 0.632, true},  {{1.0, 0.001}, 20, 15.299, 0.188, true},
      {{1.0, 0.001}, 50, 14.044, 0.078, true},
  };
  static const std::vector<ReferenceCell> kTable2 = {
      {{1, 1, 1}, 5, 0.942, 1.475, false},        {{1, 1, 1}, 20, 0.261, 0.523, false},
      {{1, 1, 1}, 50, 0.102, 0.226, false},       {{1, 0.5, 0.25}, 5, 0.820, 1.060, false},
      {{1, 0.5, 0.25}, 20, 0.279, 0.278, false},  {{1, 0.5, 0.25}, 50, 0.145, 0.114, false},
      {{1, 0.1, 0.01}, 5, 5.281, 1.079, true},    {{1, 0.1, 0.01}, 20, 9.666, 0.294, true},
      {{1, 0.1, 0.01}, 50, 13.246, 0.120, true},  {{1, 1, 0.5}, 5, 0.866, 1.269, false},
      {{1, 1, 0.5}, 20, 0.258, 0.369, false},     {{1, 1, 0.5}, 50, 0.132, 0.154, false},
      {{1, 0.5, 0.5}, 5, 0.863, 1.092, false},    {{1, 0.5, 0.5}, 20, 0.270, 0.335, false},
      {{1, 0.5, 0.5}, 50, 0.135, 0.149, false},   {{1, 1, 0.1}, 5, 1.002, 1.234, false},
      {{1, 1, 0.1}, 20, 0.353, 0.367, false},     {{1, 1, 0.1}, 50, 0.198, 0.155, false},
      {{1, 0.1, 0.1}, 5, 1.006, 1.120, false},    {{1, 0.1, 0.1}, 20, 0.276, 0.360, false},
      {{1, 0.1, 0.1}, 50, 0.127, 0.153, false},   {{1, 1, 0.01}, 5, 41.145, 1.233, true},
      {{1, 1, 0.01}, 20, 20.654, 0.370, true},    {{1, 1, 0.01}, 50, 18.899, 0.156, true},
      {{1, 0.01, 0.01}, 5, 11.869, 1.135, true},  {{1, 0.01, 0.01}, 20, 9.718, 0.365, true},
      {{1, 0.01, 0.01}, 50, 7.173, 0.155, true},
  };
  if (table == 1) return kTable1;
  if (table == 2) return kTable2;
  throw Error(Errc::invalid_config, "table id must be 1 or 2, got " + std::to_string(table));
}

RiskReport reproduce_tables(int table, const TableOptions& options) {
  const auto& cells = reference_table(table);
  RiskReport report;
  report.metadata.seed = options.seed;
  report.metadata.n_points = options.mc.n_points;
  report.metadata.n_rep = options.n_rep;
  report.metadata.version = std::string(library_version());

  for (const auto& cell : cells) {
    for (EstimatorKind kind : options.estimators) {
      Scenario s;
      s.nu = cell.nu;
      s.lambda = Spectrum::population(cell.lambda);
      s.n_rep = options.n_rep;
      s.mc = options.mc;
      s.seed = options.seed;
      s.estimator = kind;
      s.tau_points = options.tau_points;
      s.threads = options.threads;
      report.rows.push_back({s.lambda, cell.nu, kind, simulate_risk(s)});
    }
  }
  return report;
}

std::string_view library_version() noexcept { return "0.1.0"; }

}  // namespace eigadm
