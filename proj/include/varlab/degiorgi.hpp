#pragma once

#include <string>
#include <vector>

#include "varlab/field.hpp"
#include "varlab/report.hpp"

namespace varlab {

// Truncation machinery, level-set profiles and the two numeric sequence
// lemmas behind the iteration argument.

ScalarField truncate_plus(const ScalarField& v, double kappa);

struct LevelProfile {
  char form = 'V';  // 'V': integral profile, 'W': measure profile
  std::vector<double> heights;
  std::vector<double> values;
};

/// V(s) = integral over B_{2-s} of (v-s)_+^2, with the grid reread as
/// radius 2 (heights s in [0,1]).
LevelProfile v_profile(const ScalarField& v, const std::vector<double>& s);

/// Smallest constant C making V(kappa) <= C (kappa-tau)^{-(2+4/n)}
/// V(tau)^{1+2/n} over all sampled pairs tau < kappa; passes when finite.
ProbeReport scaling_class_audit(const LevelProfile& profile, int n);

struct MeasureLemma {
  LevelProfile profile;  // W(s), node-counting fractions over B_1
  double largest_c = 0.0;  // largest admissible constant in the pay-in-measure bound
};

MeasureLemma measure_profile(const ScalarField& v, const std::vector<double>& s);

enum class Verdict { converges_to_zero, bound_satisfied, diverges };

std::string to_string(Verdict v);

struct IterationTrace {
  std::vector<double> a;
  Verdict verdict = Verdict::diverges;
  double threshold_a0 = 0.0;  // geometric lemma: bisected critical a0

  std::string to_csv() const;
};

/// Extremal recurrence a_{k+1} = C^k a_k^{1+delta}, iterated in the log
/// domain. Converges-to-zero once a_k < 1e-300, diverges past 1e300; at
/// the horizon a non-increasing negative log-ratio certifies convergence.
/// Also bisects (to 1e-6) the a0 threshold separating the two verdicts.
IterationTrace seq_lemma_geometric(double C, double delta, double a0, long kmax);

/// Threshold alone (used by sweeps).
double seq_geometric_threshold(double C, double delta, long kmax);

/// Extremal recurrence a_{k+1} = a_k - c a_k^2 with the bound
/// a_k <= 1/(1+ck) checked at every step; c in (0, 1/2], a0 in [0, 1].
IterationTrace seq_lemma_quadratic(double c, double a0, long kmax);

/// Measured interior drop of a sub-solution whose zero set fills at least
/// delta_frac of B_1: rho = sup_{B_1/2} v / sup_{B_1} v_+, pass when
/// rho <= 1 - 1e-3.
ProbeReport oscillation_drop(const ScalarField& v, double delta_frac);

std::string profile_to_csv(const LevelProfile& p);

}  // namespace varlab
