#pragma once

// Numbered validation checks shared by `deltatrap validate` and the
// acceptance test binary. Each function returns one or more results for a
// single criterion; thresholds are fixed constants, never caller-tunable.

#include <string>
#include <vector>

namespace deltatrap::validation {

struct CheckResult {
  std::string id;
  int criterion = 0;  ///< 0 for supplementary checks outside the numbered list
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  ///< "<=", ">=" or "=="
  bool passed = false;
  std::string detail;
};

using Checks = std::vector<CheckResult>;

enum class Level { fast, full };

/// Faddeyeva against a frozen 50-digit reference table, plus the reflection
/// and Moshinsky pair-sum identities.
Checks special_functions();
/// Quadrature propagation of the riding eigenstate at gamma = 1, v = 0.5.
Checks eigenstate_invariance();
/// Closed form vs quadrature vs Crank-Nicolson at gamma = 0.7, v = 1.5, t = 1.
Checks three_way_agreement();
/// Survival formula vs overlap quadrature; with `with_oracle`, also the
/// trapped fraction of long Crank-Nicolson runs.
Checks survival(bool with_oracle);
/// Density maxima and the three-term approximation at gamma = 10, v = 40, t = 0.05.
Checks double_velocity_snapshot();
/// Peak densities at gamma = 10, v = 20: trapped limit and decay exponents.
Checks peak_dynamics();
/// Spectra of the three peak traces at gamma = 10, v = 20.
Checks peak_spectra();
/// Half-line Moshinsky integral identity on 20 cases with t in [0.1, 10].
Checks integral_identity();
/// Crank-Nicolson norm drift, self-convergence order and ground-state fidelity.
Checks oracle_hygiene();
/// Crank-Nicolson run at gamma = 0.7, v = 1.5: the density cusp of the trapped
/// part follows x = vt within two grid spacings.
Checks trapped_peak_tracking();

/// Checks of one numbered criterion (1-9) at full depth.
Checks criterion(int n);

/// fast: special functions, survival formula, eigenstate invariance.
/// full: every check above.
Checks run(Level level);

bool all_passed(const Checks& checks);

/// One CSV row per check: id,criterion,value,relation,threshold,passed,detail.
std::string to_csv(const Checks& checks);

}  // namespace deltatrap::validation
