#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "varlab/errors.hpp"
#include "varlab/expr.hpp"
#include "varlab/linalg.hpp"
#include "varlab/report.hpp"

namespace varlab {

/// Where an integrand loses smoothness / uniform convexity in gradient
/// space. distance_to is 0 exactly on the set and 1-Lipschitz.
class DegeneracySet {
 public:
  enum class Kind { empty, point, closed_ball, finite_points, custom };

  static DegeneracySet empty_set();
  static DegeneracySet single_point(const Vec& p);
  static DegeneracySet ball(double radius);
  static DegeneracySet points(std::vector<Vec> pts);
  static DegeneracySet custom(std::function<double(const Vec&)> distance,
                              std::string description);

  Kind kind() const { return kind_; }
  bool empty() const { return kind_ == Kind::empty; }
  double distance_to(const Vec& p) const;
  const std::string& description() const { return description_; }

 private:
  Kind kind_ = Kind::empty;
  double radius_ = 0.0;
  std::vector<Vec> points_;
  std::function<double(const Vec&)> distance_;
  std::string description_;
};

/// Evaluator bundle for an integrand F(p): value, gradient, Hessian,
/// plus convexity/degeneracy metadata. Instances are immutable after
/// construction and all evaluators are pure.
struct Lagrangian {
  int dim = 2;
  std::string label;
  std::function<double(const Vec&)> value_at;
  std::function<Vec(const Vec&)> grad_at;
  std::function<SymMat(const Vec&)> hess_at;
  DegeneracySet degeneracy;
};

enum class Builtin { quadratic, minimal_surface, p_laplace, congestion,
                     anisotropic, separable };

struct BuiltinParams {
  double p = 2.0;               // p_laplace exponent
  std::vector<double> p_vec;    // anisotropic exponents (one per axis)
  std::function<double(double)> H;         // separable: 1d convex profile
  std::function<double(double)> H_deriv;   // optional closed-form H'
};

Lagrangian make_builtin(Builtin name, int dim, const BuiltinParams& params = {});

/// String factory used by the CLI: "quadratic", "minimal-surface",
/// "p-laplace" (+p), "congestion", "anisotropic" (+p_vec),
/// "separable:<expr in x>", "expr:<expr in x..w standing for p1..pn>".
Lagrangian make_lagrangian(const std::string& spec, int dim,
                           const BuiltinParams& params = {});

struct GradientRegion {
  Vec center;
  double radius = 1.0;  // closed ball in gradient space
};

struct EllipticityWindow {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::string region;
  bool degenerate = false;  // sampled region met the degeneracy set
};

/// Extreme Hessian eigenvalues over seeded uniform samples of the region.
EllipticityWindow ellipticity_bounds(const Lagrangian& F,
                                     const GradientRegion& region,
                                     int samples, unsigned long seed);

/// Legendre transform of an even, strictly convex 1d profile:
/// H*(x) = integral of (H')^{-1} from 0 to x, via bracketed inversion
/// and adaptive quadrature. Pass `deriv` when a closed form is at hand,
/// otherwise H' falls back to central differences.
double legendre_1d(const std::function<double(double)>& H, double x,
                   const std::function<double(double)>& deriv = nullptr);

struct SeparableExample {
  Lagrangian F;                                  // F(p,q) = H(p) + H(q)
  std::function<double(double, double)> companion;  // u(x,y) = H*(x) - H*(y)
};

SeparableExample separable_example(const std::function<double(double)>& H,
                                   const std::function<double(double)>& deriv = nullptr);

struct GradientBox {
  Vec lo, hi;
};

/// Guard for user-supplied integrands: worst midpoint-convexity gap and
/// most negative Hessian eigenvalue over a sampled box; both must stay
/// above -1e-8.
ProbeReport convexity_audit(const Lagrangian& F, const GradientBox& box,
                            int grid, unsigned long seed);

}  // namespace varlab
