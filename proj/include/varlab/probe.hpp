#pragma once

#include <functional>
#include <string>
#include <vector>

#include "varlab/field.hpp"
#include "varlab/report.hpp"
#include "varlab/solver.hpp"

namespace varlab {

// Quantitative regularity diagnostics on solved (or sampled) fields. All
// probes are read-only over their inputs.

/// max - min over the non-exterior nodes of the closed ball.
double oscillation(const ScalarField& v, const Vec& center, double r);

struct HolderFit {
  double alpha = 0.0;
  double residual = 0.0;  // rms of the log-log fit residuals
  bool constant = false;  // all oscillations below 1e-12
  std::vector<double> radii;  // radii actually used
  std::vector<double> oscillations;
  std::string warning;  // non-empty when radii were dropped
};

/// Least-squares slope of log osc vs log r over dyadic radii; balls with
/// fewer than 25 nodes are dropped with a warning.
HolderFit holder_fit(const ScalarField& v, const Vec& center,
                     const std::vector<double>& radii);

std::vector<double> dyadic_radii(int count);  // 1/2, 1/4, ..., 2^-count

/// Energy bound L = int |grad v|^2 psi^2 against R = 4 lambda^-4 int v^2
/// |grad psi|^2 with psi = cutoff(r_in, r_out); passes with 10% slack.
/// The window [m, M] of the coefficient field is normalized to the
/// symmetric form [lambda, 1/lambda] via lambda = sqrt(m/M).
ProbeReport caccioppoli_audit(const CoefficientField& a, const ScalarField& v,
                              double r_in, double r_out);

/// 2D only: (osc over the discrete circle of radius r)^2 against
/// pi/log(1/(2r)) times the Dirichlet energy of B_{1/2}; requires the
/// circle oscillations to be non-decreasing in r first.
ProbeReport courant_lebesgue_check(const ScalarField& w, double r);

struct BallSpec {
  Vec center;
  double r;
};

/// Interior max of each ball must not exceed its ring max by more than
/// 2h times a measured Lipschitz bound.
ProbeReport max_principle_check(const ScalarField& v,
                                const std::vector<BallSpec>& balls);

/// Same check applied to the discrete directional derivative e . grad u.
ProbeReport max_principle_check_directional(const ScalarField& u, const Vec& e,
                                            const std::vector<BallSpec>& balls);

/// sup_{B_1} v over ||v_+||_{L^2(B_2)} with the grid reread as radius 2;
/// reports the ratio and compares against a configured cap.
ProbeReport l2_linf_check(const ScalarField& v, double cap = 10.0);

/// sup / inf of a positive field over B_{1/4}.
double harnack_ratio(const ScalarField& v);

struct EnergyDecay {
  std::vector<double> radii;
  std::vector<double> integrals;  // Dirichlet energy over each B_r
  double exponent = 0.0;          // fitted slope (2*alpha)
  bool constant = false;
};

EnergyDecay energy_decay(const ScalarField& v);

struct GradientCloud {
  std::vector<Vec> points;
  Vec center;
  double r = 0.0;
  double diameter = 0.0;
  Vec bbox_lo, bbox_hi;
};

/// Gradients at the interior nodes of B_r(center).
GradientCloud gradient_cloud(const ScalarField& u, const Vec& center, double r);

GradientCloud cloud_from_points(std::vector<Vec> points);

enum class LineChop { below, above, crosses };
enum class CircleChop { inside, outside, crosses };

/// Classify the cloud against the strip {a <= p.e <= a+gap}.
LineChop chop_halfplane(const GradientCloud& c, const Vec& e, double a,
                        double gap);

/// Classify the cloud against the annulus {r_in <= |p-q| <= r_out}.
CircleChop chop_circle(const GradientCloud& c, const Vec& q, double r_in,
                       double r_out);

std::string to_string(LineChop r);
std::string to_string(CircleChop r);

/// Closed-form Hessian eigenvalues of the radial barrier |p|^-M - 1.
double eta_radial_eigenvalue(double M, double r);      // M(M+1) r^{-M-2}
double eta_tangential_eigenvalue(double M, double r);  // -M r^{-M-2}

/// Cross-checks the barrier eigenvalue formulas by finite differences on
/// sampled |p| in [rho0, 1] and reports the dimension-n subharmonicity
/// criterion M(M+1) >= (n-1)M.
ProbeReport eta_subsolution_audit(double M, double rho0, int n,
                                  unsigned long seed = 1);

/// Pointwise non-divergence residual F_ij(grad u) u_ij of a closed-form
/// candidate, by finite differences.
double pointwise_el_residual(const Lagrangian& F,
                             const std::function<double(const Vec&)>& u,
                             const Vec& x, double step = 1e-4);

// cloud CSV: one point per row, components comma-separated
std::string cloud_to_csv(const GradientCloud& c);

}  // namespace varlab
