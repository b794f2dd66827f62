#pragma once

#include <functional>
#include <string>
#include <vector>

#include "varlab/field.hpp"
#include "varlab/linalg.hpp"
#include "varlab/report.hpp"

namespace varlab {

// Homogeneous functions u(x) = |x|^degree g(x/|x|) and the hypersurface
// traced by their gradient image on the sphere, with its normal
// correspondence and curvature checks.

struct HomogeneousFunction {
  int dim = 2;
  double degree = 1.0;
  std::string label;
  std::function<double(const Vec&)> sphere_trace;  // g on unit vectors
  // optional closed form for the full function (better roundoff); when
  // absent, values come from homogeneity + the trace
  std::function<double(const Vec&)> value;

  double operator()(const Vec& x) const;
};

struct HomogeneousJet {
  double value;
  Vec gradient;
  SymMat hessian;
};

/// Value by homogeneity, derivatives by central differences with step
/// 1e-4 |x|. Degree-1 Hessians annihilate the radial direction to 1e-5.
HomogeneousJet eval_homogeneous(const HomogeneousFunction& f, const Vec& x);

Vec homogeneous_gradient(const HomogeneousFunction& f, const Vec& x);

/// u(z1, z2) = (|z1|^2 - |z2|^2)/sqrt(|z1|^2 + |z2|^2) on R^4 with
/// z1 = (x1, x2), z2 = (x3, x4).
HomogeneousFunction fourD_example();

/// u = |x| (trace g = 1).
HomogeneousFunction norm_function(int dim);

/// Linear u = e.x as a degenerate hedgehog fixture.
HomogeneousFunction linear_function(const Vec& e);

/// 2D trace g(theta) = 1 + amp cos(k theta).
HomogeneousFunction perturbed_circle(double amp, int k);

/// Degree-alpha fixture |x|^alpha g(x/|x|) from an expression trace.
HomogeneousFunction homogeneous_from_trace(int dim, double degree,
                                           std::function<double(const Vec&)> g,
                                           std::string label);

/// Sorted eigenvalues of the finite-difference Hessian at x.
Vec hessian_spectrum(const HomogeneousFunction& f, const Vec& x);

/// At each sample the non-radial Hessian eigenvalues must carry both
/// signs with max|pos|/max|neg| and its reciprocal below ratio_cap; the
/// near-null radial eigenvalue is dropped for degree-1 functions.
ProbeReport elliptic_solvability_check(const HomogeneousFunction& f,
                                       const std::vector<Vec>& samples,
                                       double ratio_cap);

/// Seeded uniform sphere samples, optionally filtered.
std::vector<Vec> sphere_samples(int dim, int count, unsigned long seed,
                                const std::function<bool(const Vec&)>& keep = nullptr);

struct HedgehogCloud {
  std::vector<Vec> points;    // sphere sample points x_i
  std::vector<Vec> images;    // grad u(x_i)
  std::vector<Vec> normals;   // tangent-fit estimates at the images
  std::vector<char> singular; // fit residual above 10x the median
  int components = 0;         // k-NN graph components over regular points

  std::string to_csv() const;  // point, image, normal, flag per row
};

/// Gradient-image cloud with k=12 nearest-neighbor tangent fits.
HedgehogCloud hedgehog_cloud(const HomogeneousFunction& f,
                             const std::vector<Vec>& samples);

HedgehogCloud hedgehog_cloud(const HomogeneousFunction& f, int sample_count,
                             unsigned long seed);

/// Alignment |nu_i . x_i| >= 1 - 1e-3 at regular points (sign fixed per
/// component by majority); passes at a 99% fraction.
ProbeReport normal_correspondence_check(const HedgehogCloud& cloud);

/// Quadratic fit of the image patch near grad u(x) in the frame with
/// normal x against the tangential pseudo-inverse of D^2 u; 5% relative
/// tolerance, patch radius 1e-2.
ProbeReport second_form_check(const HomogeneousFunction& f, const Vec& x);

struct RadialSolution {
  HomogeneousFunction u;  // |x|^alpha g
  double mu;              // coefficient a = I + mu x^ (x^)T
  double lambda_g;        // sphere eigenvalue of g
  ProbeReport report;     // residual + ellipticity window
};

/// u = |x|^alpha g with g = cos(k theta) (n=2) or the degree-k zonal
/// harmonic (n=3); mu = lambda_g / (alpha(alpha+n-2)) - 1. The report
/// checks the flux-form residual at seeded annulus samples and the
/// window {1, 1+mu}.
RadialSolution radial_homogeneous_solution(double alpha, int k, int n,
                                           unsigned long seed = 1);

struct ZeroHomogeneous {
  ScalarField field;   // 3d lattice samples of x3/|x|
  ProbeReport report;  // osc constancy, finite energy, discontinuity at 0
};

ZeroHomogeneous zero_homogeneous_counterexample(int resolution = 65);

}  // namespace varlab
