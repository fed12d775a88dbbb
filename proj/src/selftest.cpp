#include "eigadm/selftest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eigadm/estimator.h"
#include "eigadm/risk.h"
#include "eigadm/sampling.h"

namespace eigadm {

namespace {

struct Case {
  std::vector<double> l;
  int nu;
};

const std::vector<Case>& tau_cases() {
  static const std::vector<Case> cases = {
      {{3.0, 1.0}, 5},       {{1.0, 1.0}, 2},        {{10.0, 0.01}, 20},
      {{2.0, 1.0, 0.5}, 5},  {{1.0, 1.0, 1.0}, 50},  {{5.0, 0.3, 0.001}, 3},
  };
  return cases;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

bool SelftestReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport report;
  const RngStream root(options.seed, 0);
  McConfig mc;

  std::vector<TauMatrix> taus;
  for (std::size_t c = 0; c < tau_cases().size(); ++c) {
    RngStream s = root.derive(c);
    taus.push_back(compute_tau(Spectrum::sample(tau_cases()[c].l), tau_cases()[c].nu, mc, s));
  }
  if (options.perturb_row_sum) taus.front().weights(0, 0) += 1e-6;

  {
    double worst = 0.0;
    for (const auto& tau : taus)
      for (std::size_t i = 0; i < tau.p(); ++i)
        worst = std::max(worst, std::abs(tau.row_sum(i) - 1.0 / (tau.nu + 2.0)));
    report.checks.push_back({"tau_row_sums", worst <= 1e-12, "max deviation " + fmt(worst)});
  }
  {
    double lowest = 0.0;
    for (const auto& tau : taus)
      for (double w : tau.weights.data()) lowest = std::min(lowest, w);
    report.checks.push_back({"tau_nonnegative", lowest >= 0.0, "min entry " + fmt(lowest)});
  }
  {
    double worst = 0.0;
    RngStream s = root.derive(100);
    for (std::size_t p = 1; p <= 5; ++p)
      for (int k = 0; k < 200; ++k)
        worst = std::max(worst, sample_haar_orthogonal(s, p).orthogonality_error());
    report.checks.push_back({"haar_orthogonality", worst <= 1e-10, "max |H^T H - I| " + fmt(worst)});
  }
  {
    double worst = 0.0;
    for (std::size_t c = 0; c < tau_cases().size(); ++c) {
      const auto l = Spectrum::sample(tau_cases()[c].l);
      for (double scale : {1e-6, 1.0, 1e6}) {
        RngStream s = root.derive(c);
        const auto tau = compute_tau(l.scaled(scale), tau_cases()[c].nu, mc, s);
        worst = std::max(worst, max_abs_diff(tau.entries(), taus[c].entries()));
      }
    }
    report.checks.push_back({"scale_invariance", worst <= 1e-12, "max deviation " + fmt(worst)});
  }
  {
    bool ok = true;
    RngStream s = root.derive(200);
    for (double value : {7.0, 0.25, 1234.5}) {
      for (int nu : {1, 5, 50}) {
        const auto l = Spectrum::sample({value});
        const auto est = estimate_psi_star(l, nu, mc, s);
        ok = ok && est.psi[0] == value / (nu + 2.0);
      }
    }
    report.checks.push_back({"p1_degeneracy", ok, ok ? "psi = l/(nu+2) exactly" : "mismatch"});
  }
  {
    bool ok = true;
    for (std::size_t c = 0; c < tau_cases().size(); ++c) {
      const auto l = Spectrum::sample(tau_cases()[c].l);
      const auto est = psi_star(l, taus[c]);
      const double cap = l.largest() / (tau_cases()[c].nu + 2.0);
      for (double v : est.psi) ok = ok && v > 0.0 && v <= cap * (1.0 + 1e-12);
    }
    report.checks.push_back({"shrinkage_bound", ok, ok ? "0 < psi_i <= l_1/(nu+2)" : "violated"});
  }
  {
    Scenario s;
    s.nu = 5;
    s.lambda = Spectrum::population({1.0, 1.0});
    s.n_rep = 20000;
    s.seed = options.seed;
    s.estimator = EstimatorKind::phi_star;
    s.threads = options.threads;
    const auto risk = simulate_risk(s);
    const double exact = analytic_phi_star_risk_identity(2, 5);
    const bool ok = std::abs(risk.mean_loss - exact) <= 3.0 * risk.std_error;
    report.checks.push_back({"phi_star_identity_risk", ok,
                             "simulated " + fmt(risk.mean_loss) + " +/- " + fmt(risk.std_error) +
                                 ", exact " + fmt(exact)});
  }
  return report;
}

}  // namespace eigadm
