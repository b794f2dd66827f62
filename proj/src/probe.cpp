#include "varlab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "varlab/fd.hpp"
#include "varlab/numfmt.hpp"

namespace varlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MinMax {
  double lo = kInf;
  double hi = -kInf;
  long count = 0;
  void feed(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++count;
  }
};

MinMax scan_ball(const ScalarField& v, const Vec& center, double r) {
  MinMax mm;
  for (long idx : v.grid->ball_nodes(center, r)) mm.feed(v[idx]);
  return mm;
}

// nodes with r-h < |x-c| <= r+h, the discrete stand-in for a circle
MinMax scan_band(const ScalarField& v, const Vec& center, double r) {
  MinMax mm;
  const Grid& g = *v.grid;
  const double h = g.h();
  for (long idx = 0; idx < g.node_count(); ++idx) {
    if (g.is_exterior(idx)) continue;
    double d = (g.coord(idx) - center).norm();
    if (d > r - h && d <= r + h) mm.feed(v[idx]);
  }
  return mm;
}

double max_gradient_norm(const VectorField& gv, const Vec& center, double r) {
  double m = 0.0;
  for (long idx : gv.grid->ball_nodes(center, r))
    m = std::max(m, gv.at(idx).norm());
  return m;
}

struct LineFit {
  double slope, rms;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double inter = (sy - slope * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (slope * xs[i] + inter);
    rss += e * e;
  }
  return {slope, std::sqrt(rss / n)};
}

}  // namespace

double oscillation(const ScalarField& v, const Vec& center, double r) {
  MinMax mm = scan_ball(v, center, r);
  if (mm.count < 2)
    throw Error(ErrorKind::insufficient_resolution,
                "fewer than 2 nodes in the ball");
  return mm.hi - mm.lo;
}

std::vector<double> dyadic_radii(int count) {
  std::vector<double> out;
  double r = 0.5;
  for (int k = 0; k < count; ++k, r *= 0.5) out.push_back(r);
  return out;
}

HolderFit holder_fit(const ScalarField& v, const Vec& center,
                     const std::vector<double>& radii) {
  HolderFit fit;
  for (double r : radii) {
    auto nodes = v.grid->ball_nodes(center, r);
    if (nodes.size() < 25) {
      fit.warning += "dropped r=" + fmt_short(r) + " (" +
                     std::to_string(nodes.size()) + " nodes); ";
      continue;
    }
    MinMax mm;
    for (long idx : nodes) mm.feed(v[idx]);
    fit.radii.push_back(r);
    fit.oscillations.push_back(mm.hi - mm.lo);
  }
  if (fit.radii.size() < 2)
    throw Error(ErrorKind::insufficient_resolution,
                "fewer than two resolvable radii");

  bool all_tiny = true;
  for (double o : fit.oscillations)
    if (o >= 1e-12) all_tiny = false;
  if (all_tiny) {
    fit.constant = true;
    return fit;
  }

  std::vector<double> lr, lo;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    if (fit.oscillations[i] <= 0.0) continue;
    lr.push_back(std::log(fit.radii[i]));
    lo.push_back(std::log(fit.oscillations[i]));
  }
  if (lr.size() < 2)
    throw Error(ErrorKind::insufficient_resolution,
                "not enough nonzero oscillations to fit");
  LineFit lf = fit_line(lr, lo);
  fit.alpha = lf.slope;
  fit.residual = lf.rms;
  return fit;
}

ProbeReport caccioppoli_audit(const CoefficientField& a, const ScalarField& v,
                              double r_in, double r_out) {
  if (!(a.eig_min > 0.0))
    throw Error(ErrorKind::not_applicable, "degenerate coefficient window");
  const double lambda = std::sqrt(a.eig_min / a.eig_max);

  ScalarField psi = cutoff(v.grid, r_in, r_out);
  VectorField gv = gradient(v);
  VectorField gpsi = gradient(psi);

  const Grid& g = *v.grid;
  const double cell = std::pow(g.h(), g.dim());
  double L = 0.0, R = 0.0;
  for (long idx = 0; idx < g.node_count(); ++idx) {
    if (g.is_exterior(idx)) continue;
    double p = psi[idx];
    L += cell * gv.at(idx).norm2() * p * p;
    R += cell * v[idx] * v[idx] * gpsi.at(idx).norm2();
  }
  R *= 4.0 / std::pow(lambda, 4);

  ProbeReport rep;
  rep.name = "caccioppoli";
  rep.measured["lhs"] = L;
  rep.measured["rhs"] = R;
  rep.measured["lambda"] = lambda;
  rep.measured["ratio"] = R > 0.0 ? L / R : (L > 0.0 ? kInf : 0.0);
  rep.set_margin(R * 1.1 - L);
  return rep;
}

ProbeReport courant_lebesgue_check(const ScalarField& w, double r) {
  const Grid& g = *w.grid;
  if (g.dim() != 2)
    throw Error(ErrorKind::invalid_parameter, "courant-lebesgue is 2D only");
  if (!(r > 0.0 && r <= 0.25))
    throw Error(ErrorKind::invalid_parameter, "requires 0 < r <= 1/4");

  VectorField gw = gradient(w);
  const double slack = 4.0 * g.h() * max_gradient_norm(gw, Vec{0.0, 0.0}, 1.0);

  // precheck: w must obey the discrete maximum principle (no interior
  // maxima or minima) on the annuli between r and 1/2, which is what
  // makes circle oscillations non-decreasing
  for (int j = 0; j <= 6; ++j) {
    double s = r + j * (0.5 - r) / 6.0;
    MinMax ring = scan_band(w, Vec{0.0, 0.0}, s);
    MinMax inner = scan_ball(w, Vec{0.0, 0.0}, s - g.h());
    if (ring.count < 4 || inner.count < 1)
      throw Error(ErrorKind::insufficient_resolution, "circle not resolved");
    if (inner.hi > ring.hi + slack || inner.lo < ring.lo - slack)
      throw Error(ErrorKind::not_applicable,
                  "interior extremum inside the probe annuli; "
                  "maximum-principle precheck failed");
  }

  MinMax circle = scan_band(w, Vec{0.0, 0.0}, r);
  double osc = circle.hi - circle.lo;
  double L = osc * osc;

  const double cellw = g.h() * g.h();
  double dirichlet = 0.0;
  for (long idx : g.ball_nodes(Vec{0.0, 0.0}, 0.5))
    dirichlet += cellw * gw.at(idx).norm2();
  double R = M_PI / std::log(1.0 / (2.0 * r)) * dirichlet;

  ProbeReport rep;
  rep.name = "courant-lebesgue";
  rep.measured["r"] = r;
  rep.measured["osc"] = osc;
  rep.measured["lhs"] = L;
  rep.measured["rhs"] = R;
  rep.measured["dirichlet_half"] = dirichlet;
  rep.set_margin(R * 1.1 - L);
  return rep;
}

namespace {

ProbeReport max_principle_on(const ScalarField& v,
                             const std::vector<BallSpec>& balls,
                             const std::string& name) {
  const double h = v.grid->h();
  VectorField gv = gradient(v);

  ProbeReport rep;
  rep.name = name;
  double worst = -kInf;
  int idx = 0;
  for (const auto& ball : balls) {
    MinMax inner = scan_ball(v, ball.center, ball.r - h);
    MinMax ring;
    {
      const Grid& g = *v.grid;
      for (long node = 0; node < g.node_count(); ++node) {
        if (g.is_exterior(node)) continue;
        double d = (g.coord(node) - ball.center).norm();
        if (d > ball.r - h && d <= ball.r + h) ring.feed(v[node]);
      }
    }
    if (inner.count == 0 || ring.count == 0)
      throw Error(ErrorKind::insufficient_resolution, "ball not resolved");
    double lip = max_gradient_norm(gv, ball.center, ball.r + h);
    double violation = inner.hi - ring.hi - 2.0 * h * lip;
    rep.measured["violation_" + std::to_string(idx++)] = violation;
    worst = std::max(worst, violation);
  }
  rep.measured["worst_violation"] = worst;
  rep.set_margin(-worst);
  return rep;
}

}  // namespace

ProbeReport max_principle_check(const ScalarField& v,
                                const std::vector<BallSpec>& balls) {
  return max_principle_on(v, balls, "max-principle");
}

ProbeReport max_principle_check_directional(const ScalarField& u, const Vec& e,
                                            const std::vector<BallSpec>& balls) {
  VectorField gu = gradient(u);
  ScalarField ue(u.grid);
  for (long idx = 0; idx < u.grid->node_count(); ++idx)
    ue[idx] = u.grid->is_exterior(idx)
                  ? std::numeric_limits<double>::quiet_NaN()
                  : gu.at(idx).dot(e);
  return max_principle_on(ue, balls, "max-principle-directional");
}

ProbeReport l2_linf_check(const ScalarField& v, double cap) {
  const Grid& g = *v.grid;
  // the inscribed disk is read as B_2; grid radius 1/2 is B_1
  double sup = -kInf;
  for (long idx : g.ball_nodes(Vec(g.dim()), 0.5)) sup = std::max(sup, v[idx]);

  const double cell = std::pow(2.0 * g.h(), g.dim());
  double l2sq = 0.0;
  for (long idx : g.ball_nodes(Vec(g.dim()), 1.0)) {
    double plus = std::max(v[idx], 0.0);
    l2sq += cell * plus * plus;
  }
  double l2 = std::sqrt(l2sq);

  ProbeReport rep;
  rep.name = "l2-linf";
  rep.measured["sup_b1"] = sup;
  rep.measured["l2_plus_b2"] = l2;
  rep.measured["cap"] = cap;
  if (l2 == 0.0) {
    rep.measured["ratio"] = 0.0;
    rep.set_margin(sup > 0.0 ? -sup : 0.0);
    if (sup > 0.0) rep.note = "positive sup with vanishing L2 mass";
    return rep;
  }
  double ratio = sup / l2;
  rep.measured["ratio"] = ratio;
  rep.set_margin(cap - ratio);
  return rep;
}

double harnack_ratio(const ScalarField& v) {
  const Grid& g = *v.grid;
  for (long idx : g.ball_nodes(Vec(g.dim()), 1.0))
    if (!(v[idx] > 0.0))
      throw Error(ErrorKind::not_applicable, "field is not positive on B_1");
  MinMax mm = scan_ball(v, Vec(g.dim()), 0.25);
  return mm.hi / mm.lo;
}

EnergyDecay energy_decay(const ScalarField& v) {
  const Grid& g = *v.grid;
  VectorField gv = gradient(v);
  const double cell = std::pow(g.h(), g.dim());

  EnergyDecay out;
  for (int k = 0;; ++k) {
    double r = std::pow(2.0, -k);
    auto nodes = g.ball_nodes(Vec(g.dim()), r);
    if (nodes.size() < 25) break;
    double e = 0.0;
    for (long idx : nodes) e += cell * gv.at(idx).norm2();
    out.radii.push_back(r);
    out.integrals.push_back(e);
  }
  if (out.radii.size() < 2)
    throw Error(ErrorKind::insufficient_resolution, "no resolvable radii");

  bool all_tiny = true;
  for (double e : out.integrals)
    if (e >= 1e-30) all_tiny = false;
  if (all_tiny) {
    out.constant = true;
    return out;
  }
  std::vector<double> lr, le;
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    if (out.integrals[i] <= 0.0) continue;
    lr.push_back(std::log(out.radii[i]));
    le.push_back(std::log(out.integrals[i]));
  }
  out.exponent = fit_line(lr, le).slope;
  return out;
}

namespace {

void summarize(GradientCloud& c) {
  const int n = c.points.empty() ? 0 : c.points[0].size();
  c.bbox_lo = Vec(n);
  c.bbox_hi = Vec(n);
  for (int k = 0; k < n; ++k) {
    c.bbox_lo[k] = kInf;
    c.bbox_hi[k] = -kInf;
  }
  for (const Vec& p : c.points)
    for (int k = 0; k < n; ++k) {
      c.bbox_lo[k] = std::min(c.bbox_lo[k], p[k]);
      c.bbox_hi[k] = std::max(c.bbox_hi[k], p[k]);
    }

  // diameter over the hull in 2D, brute force otherwise
  std::vector<Vec> pts = c.points;
  if (n == 2 && pts.size() > 64) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
      return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
      hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
      while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
      hull[k++] = pts[i - 1];
    }
    hull.resize(k ? k - 1 : 0);
    pts = hull;
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d2 = std::max(d2, (pts[i] - pts[j]).norm2());
  c.diameter = std::sqrt(d2);
}

}  // namespace

GradientCloud gradient_cloud(const ScalarField& u, const Vec& center, double r) {
  const Grid& g = *u.grid;
  VectorField gu = gradient(u);
  GradientCloud c;
  c.center = center;
  c.r = r;
  for (long idx : g.ball_nodes(center, r))
    if (g.kind(idx) == NodeKind::interior) c.points.push_back(gu.at(idx));
  if (c.points.empty())
    throw Error(ErrorKind::insufficient_resolution, "no interior nodes in ball");
  summarize(c);
  return c;
}

GradientCloud cloud_from_points(std::vector<Vec> points) {
  GradientCloud c;
  c.points = std::move(points);
  if (!c.points.empty()) summarize(c);
  return c;
}

LineChop chop_halfplane(const GradientCloud& c, const Vec& e, double a,
                        double gap) {
  if (c.points.empty()) throw Error(ErrorKind::empty_cloud, "no points");
  if (!(gap > 0.0)) throw Error(ErrorKind::invalid_parameter, "gap must be > 0");
  Vec dir = normalized(e);
  if (dir.norm() == 0.0)
    throw Error(ErrorKind::invalid_parameter, "zero direction");
  bool below = true, above = true;
  for (const Vec& p : c.points) {
    double t = p.dot(dir);
    if (t > a + gap) below = false;
    if (t < a) above = false;
  }
  if (below) return LineChop::below;
  if (above) return LineChop::above;
  return LineChop::crosses;
}

CircleChop chop_circle(const GradientCloud& c, const Vec& q, double r_in,
                       double r_out) {
  if (c.points.empty()) throw Error(ErrorKind::empty_cloud, "no points");
  if (!(0.0 < r_in && r_in < r_out))
    throw Error(ErrorKind::invalid_parameter, "need 0 < r_in < r_out");
  bool inside = true, outside = true;
  for (const Vec& p : c.points) {
    double d = (p - q).norm();
    if (d > r_in) inside = false;
    if (d < r_out) outside = false;
  }
  if (inside) return CircleChop::inside;
  if (outside) return CircleChop::outside;
  return CircleChop::crosses;
}

std::string to_string(LineChop r) {
  switch (r) {
    case LineChop::below: return "below";
    case LineChop::above: return "above";
    case LineChop::crosses: return "crosses";
  }
  return "?";
}

std::string to_string(CircleChop r) {
  switch (r) {
    case CircleChop::inside: return "inside";
    case CircleChop::outside: return "outside";
    case CircleChop::crosses: return "crosses";
  }
  return "?";
}

double eta_radial_eigenvalue(double M, double r) {
  return M * (M + 1.0) * std::pow(r, -M - 2.0);
}

double eta_tangential_eigenvalue(double M, double r) {
  return -M * std::pow(r, -M - 2.0);
}

ProbeReport eta_subsolution_audit(double M, double rho0, int n,
                                  unsigned long seed) {
  if (!(M > 0.0) || !(rho0 > 0.0 && rho0 < 1.0) || n < 2)
    throw Error(ErrorKind::invalid_parameter,
                "need M > 0, 0 < rho0 < 1, n >= 2");

  auto eta = [M](const Vec& p) {
    return std::max(std::pow(p.norm(), -M) - 1.0, 0.0);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double worst_radial = 0.0, worst_tangential = 0.0;
  const int radii = 20;
  for (int k = 0; k < radii; ++k) {
    double r = rho0 * std::pow(1.0 / rho0, (k + 0.5) / radii);
    Vec dir(n);
    for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
    dir = normalized(dir);
    Vec p = r * dir;

    SymMat h = fd_hessian(eta, p, 1e-4 * r);
    EigenSystem es = sym_eigensystem(h);

    // the radial eigenvector is the one aligned with p
    int radial = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      double align = std::abs(es.vectors[i].dot(dir));
      if (align > best) {
        best = align;
        radial = i;
      }
    }
    double want_rad = eta_radial_eigenvalue(M, r);
    double want_tan = eta_tangential_eigenvalue(M, r);
    worst_radial = std::max(
        worst_radial, std::abs(es.values[radial] - want_rad) / std::abs(want_rad));
    for (int i = 0; i < n; ++i) {
      if (i == radial) continue;
      worst_tangential = std::max(
          worst_tangential,
          std::abs(es.values[i] - want_tan) / std::abs(want_tan));
    }
  }

  ProbeReport rep;
  rep.name = "eta-subsolution";
  rep.measured["M"] = M;
  rep.measured["max_rel_err_radial"] = worst_radial;
  rep.measured["max_rel_err_tangential"] = worst_tangential;
  rep.measured["criterion_lhs"] = M * (M + 1.0);
  rep.measured["criterion_rhs"] = (n - 1.0) * M;
  double fd_margin = 1e-6 - std::max(worst_radial, worst_tangential);
  double criterion_margin = M * (M + 1.0) - (n - 1.0) * M;
  rep.set_margin(std::min(fd_margin, criterion_margin));
  return rep;
}

double pointwise_el_residual(const Lagrangian& F,
                             const std::function<double(const Vec&)>& u,
                             const Vec& x, double step) {
  double s = step * std::max(1.0, x.norm());
  Vec grad = fd_gradient(u, x, s);
  SymMat hess = fd_hessian(u, x, s);
  SymMat a = F.hess_at(grad);
  double residual = 0.0;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) residual += a(i, j) * hess(i, j);
  return residual;
}

std::string cloud_to_csv(const GradientCloud& c) {
  std::string out;
  for (const Vec& p : c.points) {
    for (int k = 0; k < p.size(); ++k)
      out += (k ? "," : "") + fmt_full(p[k]);
    out += "\n";
  }
  return out;
}

}  // namespace varlab
