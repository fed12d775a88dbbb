#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eigadm {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  std::uint64_t seed = 42;
  unsigned threads = 1;
  /// Test hook: nudges one tau entry before the row-sum check so the
  /// failure path can be exercised.
  bool perturb_row_sum = false;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;

  bool passed() const noexcept;
};

/// Fast invariant suite: tau row sums and nonnegativity, Haar orthogonality,
/// scale invariance, p = 1 degeneracy, shrinkage bound, and the phi_star
/// identity risk at (p=2, nu=5) with 2e4 replicates.
SelftestReport run_selftest(const SelftestOptions& options);

}  // namespace eigadm
