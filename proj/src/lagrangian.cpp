#include "varlab/lagrangian.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "varlab/fd.hpp"

namespace varlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Numeric differentiation steps for expression-defined integrands.
constexpr double kGradStep = 1e-5;
constexpr double kHessStep = 1e-4;

}  // namespace

DegeneracySet DegeneracySet::empty_set() {
  DegeneracySet s;
  s.kind_ = Kind::empty;
  s.description_ = "empty";
  return s;
}

DegeneracySet DegeneracySet::single_point(const Vec& p) {
  DegeneracySet s;
  s.kind_ = Kind::point;
  s.points_ = {p};
  s.description_ = "point";
  return s;
}

DegeneracySet DegeneracySet::ball(double radius) {
  DegeneracySet s;
  s.kind_ = Kind::closed_ball;
  s.radius_ = radius;
  s.description_ = "closed-ball";
  return s;
}

DegeneracySet DegeneracySet::points(std::vector<Vec> pts) {
  DegeneracySet s;
  s.kind_ = Kind::finite_points;
  s.points_ = std::move(pts);
  s.description_ = "finite-points";
  return s;
}

DegeneracySet DegeneracySet::custom(std::function<double(const Vec&)> distance,
                                    std::string description) {
  DegeneracySet s;
  s.kind_ = Kind::custom;
  s.distance_ = std::move(distance);
  s.description_ = std::move(description);
  return s;
}

double DegeneracySet::distance_to(const Vec& p) const {
  switch (kind_) {
    case Kind::empty:
      return kInf;
    case Kind::point:
    case Kind::finite_points: {
      double d = kInf;
      for (const Vec& q : points_) d = std::min(d, dist(p, q));
      return d;
    }
    case Kind::closed_ball:
      return std::max(p.norm() - radius_, 0.0);
    case Kind::custom:
      return distance_(p);
  }
  return kInf;
}

namespace {

Lagrangian make_quadratic(int dim) {
  Lagrangian F;
  F.dim = dim;
  F.label = "quadratic";
  F.value_at = [](const Vec& p) { return p.norm2(); };
  F.grad_at = [](const Vec& p) { return 2.0 * p; };
  F.hess_at = [dim](const Vec&) { return 2.0 * SymMat::identity(dim); };
  F.degeneracy = DegeneracySet::empty_set();
  return F;
}

Lagrangian make_minimal_surface(int dim) {
  Lagrangian F;
  F.dim = dim;
  F.label = "minimal-surface";
  F.value_at = [](const Vec& p) { return std::sqrt(1.0 + p.norm2()); };
  F.grad_at = [](const Vec& p) {
    return p * (1.0 / std::sqrt(1.0 + p.norm2()));
  };
  F.hess_at = [dim](const Vec& p) {
    double s2 = 1.0 + p.norm2();
    double s = std::sqrt(s2);
    SymMat h = SymMat::identity(dim);
    h *= 1.0 / s;
    SymMat o = outer(p);
    o *= -1.0 / (s2 * s);
    h += o;
    return h;
  };
  F.degeneracy = DegeneracySet::empty_set();
  return F;
}

Lagrangian make_p_laplace(int dim, double p) {
  if (!(p > 1.0))
    throw Error(ErrorKind::invalid_parameter, "p-laplace requires p > 1");
  Lagrangian F;
  F.dim = dim;
  F.label = "p-laplace";
  F.value_at = [p](const Vec& q) { return std::pow(q.norm(), p); };
  F.grad_at = [p, dim](const Vec& q) {
    double r = q.norm();
    if (r == 0.0) return Vec::zero(dim);
    return q * (p * std::pow(r, p - 2.0));
  };
  F.hess_at = [p, dim](const Vec& q) {
    double r = q.norm();
    if (r == 0.0) {
      // p>2: Hessian vanishes at the origin; p<2 blows up, p=2 is 2I.
      if (p > 2.0) return SymMat(dim);
      if (p == 2.0) return 2.0 * SymMat::identity(dim);
      SymMat h(dim);
      for (int i = 0; i < dim; ++i) h(i, i) = kInf;
      return h;
    }
    SymMat h = SymMat::identity(dim);
    h *= p * std::pow(r, p - 2.0);
    SymMat o = outer(q);
    o *= p * (p - 2.0) * std::pow(r, p - 4.0);
    h += o;
    return h;
  };
  F.degeneracy = DegeneracySet::single_point(Vec::zero(dim));
  return F;
}

Lagrangian make_congestion(int dim) {
  Lagrangian F;
  F.dim = dim;
  F.label = "congestion";
  F.value_at = [](const Vec& p) {
    double e = std::max(p.norm() - 1.0, 0.0);
    return e * e;
  };
  F.grad_at = [dim](const Vec& p) {
    double r = p.norm();
    if (r <= 1.0) return Vec::zero(dim);
    return p * (2.0 * (r - 1.0) / r);
  };
  F.hess_at = [dim](const Vec& p) {
    double r = p.norm();
    if (r <= 1.0) return SymMat(dim);
    // radial eigenvalue 2, tangential 2(r-1)/r
    SymMat h = SymMat::identity(dim);
    h *= 2.0 * (r - 1.0) / r;
    SymMat o = outer(p * (1.0 / r));
    o *= 2.0 - 2.0 * (r - 1.0) / r;
    h += o;
    return h;
  };
  F.degeneracy = DegeneracySet::ball(1.0);
  return F;
}

Lagrangian make_anisotropic(int dim, const std::vector<double>& pv) {
  if ((int)pv.size() != dim)
    throw Error(ErrorKind::invalid_parameter,
                "anisotropic needs one exponent per axis");
  for (double pi : pv)
    if (!(pi > 1.0))
      throw Error(ErrorKind::invalid_parameter,
                  "anisotropic requires every p_i > 1");
  Lagrangian F;
  F.dim = dim;
  F.label = "anisotropic";
  F.value_at = [pv, dim](const Vec& q) {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += std::pow(std::abs(q[i]), pv[i]);
    return s;
  };
  F.grad_at = [pv, dim](const Vec& q) {
    Vec g(dim);
    for (int i = 0; i < dim; ++i) {
      double a = std::abs(q[i]);
      g[i] = a == 0.0 ? 0.0
                      : pv[i] * std::pow(a, pv[i] - 1.0) * (q[i] > 0 ? 1 : -1);
    }
    return g;
  };
  F.hess_at = [pv, dim](const Vec& q) {
    SymMat h(dim);
    for (int i = 0; i < dim; ++i) {
      double a = std::abs(q[i]);
      if (a == 0.0)
        h(i, i) = pv[i] > 2.0 ? 0.0 : (pv[i] == 2.0 ? 2.0 : kInf);
      else
        h(i, i) = pv[i] * (pv[i] - 1.0) * std::pow(a, pv[i] - 2.0);
    }
    return h;
  };
  // K is the union of the coordinate hyperplanes {p_i = 0} over the
  // exponents with p_i != 2; exact distance is the smallest such |p_i|.
  std::vector<int> degen;
  for (int i = 0; i < dim; ++i)
    if (pv[i] != 2.0) degen.push_back(i);
  if (degen.empty()) {
    F.degeneracy = DegeneracySet::empty_set();
  } else {
    F.degeneracy = DegeneracySet::custom(
        [degen](const Vec& q) {
          double d = kInf;
          for (int i : degen) d = std::min(d, std::abs(q[i]));
          return d;
        },
        "coordinate-hyperplanes");
  }
  return F;
}

std::function<double(double)> derivative_of(
    const std::function<double(double)>& H,
    const std::function<double(double)>& deriv) {
  if (deriv) return deriv;
  return [H](double t) { return (H(t + kGradStep) - H(t - kGradStep)) / (2.0 * kGradStep); };
}

Lagrangian make_separable(const std::function<double(double)>& H,
                          const std::function<double(double)>& deriv) {
  if (!H)
    throw Error(ErrorKind::invalid_parameter, "separable requires a profile H");
  auto dH = derivative_of(H, deriv);
  Lagrangian F;
  F.dim = 2;
  F.label = "separable";
  F.value_at = [H](const Vec& p) { return H(p[0]) + H(p[1]); };
  F.grad_at = [dH](const Vec& p) { return Vec{dH(p[0]), dH(p[1])}; };
  F.hess_at = [dH](const Vec& p) {
    SymMat h(2);
    h(0, 0) = (dH(p[0] + kHessStep) - dH(p[0] - kHessStep)) / (2.0 * kHessStep);
    h(1, 1) = (dH(p[1] + kHessStep) - dH(p[1] - kHessStep)) / (2.0 * kHessStep);
    return h;
  };
  F.degeneracy = DegeneracySet::empty_set();
  return F;
}

Lagrangian make_expression(const Expression& e, int dim) {
  if (e.arity() > dim)
    throw Error(ErrorKind::invalid_parameter,
                "integrand uses more variables than the gradient dimension");
  auto value = [e](const Vec& p) { return e.eval(p); };
  Lagrangian F;
  F.dim = dim;
  F.label = "expr";
  F.value_at = value;
  F.grad_at = [value](const Vec& p) { return fd_gradient(value, p, kGradStep); };
  F.hess_at = [value](const Vec& p) { return fd_hessian(value, p, kHessStep); };
  // Unknown analytic structure; treat as smooth and let the convexity
  // audit flag trouble.
  F.degeneracy = DegeneracySet::empty_set();
  return F;
}

}  // namespace

Lagrangian make_builtin(Builtin name, int dim, const BuiltinParams& params) {
  if (dim < 1)
    throw Error(ErrorKind::invalid_parameter, "dimension must be >= 1");
  switch (name) {
    case Builtin::quadratic: return make_quadratic(dim);
    case Builtin::minimal_surface: return make_minimal_surface(dim);
    case Builtin::p_laplace: return make_p_laplace(dim, params.p);
    case Builtin::congestion: return make_congestion(dim);
    case Builtin::anisotropic: return make_anisotropic(dim, params.p_vec);
    case Builtin::separable: return make_separable(params.H, params.H_deriv);
  }
  throw Error(ErrorKind::unknown_lagrangian, "unrecognized builtin");
}

Lagrangian make_lagrangian(const std::string& spec, int dim,
                           const BuiltinParams& params) {
  if (spec == "quadratic") return make_builtin(Builtin::quadratic, dim, params);
  if (spec == "minimal-surface")
    return make_builtin(Builtin::minimal_surface, dim, params);
  if (spec == "p-laplace") return make_builtin(Builtin::p_laplace, dim, params);
  if (spec == "congestion") return make_builtin(Builtin::congestion, dim, params);
  if (spec == "anisotropic")
    return make_builtin(Builtin::anisotropic, dim, params);
  if (spec.rfind("separable:", 0) == 0) {
    Expression h = parse(spec.substr(10));
    if (h.arity() > 1)
      throw Error(ErrorKind::invalid_parameter,
                  "separable profile must be a function of x alone");
    BuiltinParams bp = params;
    bp.H = [h](double t) { return h.eval(Vec{t}); };
    return make_builtin(Builtin::separable, 2, bp);
  }
  if (spec.rfind("expr:", 0) == 0) return make_expression(parse(spec.substr(5)), dim);
  throw Error(ErrorKind::unknown_lagrangian, "'" + spec + "'");
}

EllipticityWindow ellipticity_bounds(const Lagrangian& F,
                                     const GradientRegion& region,
                                     int samples, unsigned long seed) {
  if (samples < 1)
    throw Error(ErrorKind::invalid_parameter, "samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Vec center =
      region.center.size() == F.dim ? region.center : Vec::zero(F.dim);

  EllipticityWindow w;
  w.lambda_min = kInf;
  w.lambda_max = -kInf;
  w.region = "ball r=" + std::to_string(region.radius);
  bool all_degenerate = true;

  int accepted = 0;
  while (accepted < samples) {
    Vec p(F.dim);
    for (int k = 0; k < F.dim; ++k) p[k] = unit(rng) * region.radius;
    if (p.norm() > region.radius) continue;  // rejection
    ++accepted;
    Vec q = p + center;
    Vec ev = sym_eigenvalues(F.hess_at(q));
    w.lambda_min = std::min(w.lambda_min, ev[0]);
    w.lambda_max = std::max(w.lambda_max, ev[F.dim - 1]);
    if (F.degeneracy.distance_to(q) > 0.0) all_degenerate = false;
  }
  if (!F.degeneracy.empty() && all_degenerate) {
    w.degenerate = true;
    w.lambda_min = 0.0;
  }
  return w;
}

double legendre_1d(const std::function<double(double)>& H, double x,
                   const std::function<double(double)>& deriv) {
  if (x == 0.0) return 0.0;
  auto dH = derivative_of(H, deriv);

  // (H')^{-1}(s): H' is increasing and odd with H'(0)=0, so bracket by
  // doubling and bisect.
  auto inverse = [&dH](double s) {
    if (s == 0.0) return 0.0;
    double sign = s > 0 ? 1.0 : -1.0;
    double target = std::abs(s);
    double hi = 1.0;
    int expansions = 0;
    while (dH(hi) < target) {
      hi *= 2.0;
      if (++expansions > 200)
        throw Error(ErrorKind::inversion_failure,
                    "no bracket for (H')^{-1} within expansion limit");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (dH(mid) < target ? lo : hi) = mid;
      if (hi - lo < 1e-15 * (1.0 + hi)) break;
    }
    return sign * 0.5 * (lo + hi);
  };

  // Adaptive Simpson on [0, x].
  std::function<double(double, double, double, double, double, double, int)>
      simpson = [&](double a, double b, double fa, double fb, double fm,
                    double whole, int depth) -> double {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = inverse(lm), frm = inverse(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = (left + right - whole) / 15.0;
    if (depth <= 0 || std::abs(err) < 1e-11)
      return left + right + err;
    return simpson(a, m, fa, fm, flm, left, depth - 1) +
           simpson(m, b, fm, fb, frm, right, depth - 1);
  };

  double a = 0.0, b = x;
  double fa = 0.0, fb = inverse(b), fm = inverse(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(a, b, fa, fb, fm, whole, 48);
}

SeparableExample separable_example(const std::function<double(double)>& H,
                                   const std::function<double(double)>& deriv) {
  SeparableExample ex;
  BuiltinParams params;
  params.H = H;
  params.H_deriv = deriv;
  ex.F = make_builtin(Builtin::separable, 2, params);
  ex.companion = [H, deriv](double x, double y) {
    return legendre_1d(H, x, deriv) - legendre_1d(H, y, deriv);
  };
  return ex;
}

ProbeReport convexity_audit(const Lagrangian& F, const GradientBox& box,
                            int grid, unsigned long seed) {
  if (grid < 2)
    throw Error(ErrorKind::invalid_parameter, "grid must be >= 2");
  std::mt19937_64 rng(seed);

  std::vector<Vec> pts;
  // full lattice for dim <= 2, seeded samples above that
  if (F.dim <= 2) {
    int m = grid;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < (F.dim == 2 ? m : 1); ++j) {
        Vec p(F.dim);
        p[0] = box.lo[0] + (box.hi[0] - box.lo[0]) * i / (m - 1);
        if (F.dim == 2) p[1] = box.lo[1] + (box.hi[1] - box.lo[1]) * j / (m - 1);
        pts.push_back(p);
      }
  } else {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < grid * grid; ++i) {
      Vec p(F.dim);
      for (int k = 0; k < F.dim; ++k)
        p[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * u01(rng);
      pts.push_back(p);
    }
  }

  double worst_gap = kInf;         // min of (F(p)+F(q))/2 - F(mid)
  double worst_eig = kInf;
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    worst_eig = std::min(worst_eig, sym_eigenvalues(F.hess_at(pts[i]))[0]);
    const Vec& p = pts[i];
    const Vec& q = pts[pick(rng)];
    Vec mid = 0.5 * (p + q);
    double gap = 0.5 * (F.value_at(p) + F.value_at(q)) - F.value_at(mid);
    worst_gap = std::min(worst_gap, gap);
  }

  ProbeReport r;
  r.name = "convexity-audit";
  r.measured["worst_midpoint_gap"] = worst_gap;
  r.measured["min_hessian_eigenvalue"] = worst_eig;
  r.set_margin(std::min(worst_gap, worst_eig) + 1e-8);
  return r;
}

}  // namespace varlab
