#include "varlab/solver.hpp"

#include <chrono>
#include <cmath>

#include "varlab/numfmt.hpp"

namespace varlab {

namespace {

// Each grid cell splits into two right triangles and the field is
// piecewise linear on them: gradients live on triangles, values on
// nodes, and the discrete energy is exactly convex in the node values,
// so the gradient-norm stopping certificate is honest. The simplicial
// split leaves no spurious null mode (a corner-averaged cell gradient
// would admit a checkerboard) and nodal truncation cannot increase the
// energy on right triangles, which gives the discrete maximum principle.
//
// Triangle encoding: gx = s (u_a - u_b)/h, gy = s (u_a - u_c)/h with
// s = -1 for the lower-left triangle (a = corner node) and s = +1 for
// the upper-right one.
struct Cells {
  struct Tri {
    long a, b, c;
    double s;
  };
  std::vector<Tri> tris;
  double h;
  long nodes;

  explicit Cells(const Grid& g) : h(g.h()), nodes(g.node_count()) {
    if (g.dim() != 2)
      throw Error(ErrorKind::invalid_parameter,
                  "the energy solver is two-dimensional");
    const int res = g.res();
    auto live = [&](long idx) { return !g.is_exterior(idx); };
    for (int j = 0; j + 1 < res; ++j)
      for (int i = 0; i + 1 < res; ++i) {
        long n00 = j * (long)res + i;
        long n10 = n00 + 1;
        long n01 = n00 + res;
        long n11 = n01 + 1;
        if (live(n00) && live(n10) && live(n01) && live(n11)) {
          tris.push_back({n00, n10, n01, -1.0});
          tris.push_back({n11, n01, n10, +1.0});
        }
      }
  }

  void tri_gradient(const std::vector<double>& u, const Tri& t, double& gx,
                    double& gy) const {
    gx = t.s * (u[t.a] - u[t.b]) / h;
    gy = t.s * (u[t.a] - u[t.c]) / h;
  }
};

double cell_energy(const Cells& cs, const Lagrangian& F,
                   const std::vector<double>& u, double eps) {
  const double w = 0.5 * cs.h * cs.h;  // triangle area
  double total = 0.0;
  Vec g(2);
  for (const auto& t : cs.tris) {
    cs.tri_gradient(u, t, g[0], g[1]);
    total += w * (F.value_at(g) + eps * g.norm2());
  }
  return total;
}

// dJ/du at every node (zeroed later on non-free nodes).
void cell_gradient_of_energy(const Cells& cs, const Lagrangian& F,
                             const std::vector<double>& u, double eps,
                             std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double w = 0.5 * cs.h;  // area / h
  Vec g(2);
  for (const auto& t : cs.tris) {
    cs.tri_gradient(u, t, g[0], g[1]);
    Vec dF = F.grad_at(g);
    double fx = t.s * w * (dF[0] + 2.0 * eps * g[0]);
    double fy = t.s * w * (dF[1] + 2.0 * eps * g[1]);
    out[t.a] += fx + fy;
    out[t.b] -= fx;
    out[t.c] -= fy;
  }
}

struct CellHessian {
  double a11, a12, a22;
};

void cache_cell_hessians(const Cells& cs, const Lagrangian& F,
                         const std::vector<double>& u, double eps,
                         std::vector<CellHessian>& out) {
  out.resize(cs.tris.size());
  Vec g(2);
  for (std::size_t k = 0; k < cs.tris.size(); ++k) {
    cs.tri_gradient(u, cs.tris[k], g[0], g[1]);
    SymMat h = F.hess_at(g);
    out[k] = {h(0, 0) + 2.0 * eps, h(0, 1), h(1, 1) + 2.0 * eps};
  }
}

// H v with the cached per-triangle Hessians; v is zero on fixed nodes and
// the result is only read on free nodes.
void hessian_apply(const Cells& cs, const std::vector<CellHessian>& hc,
                   const std::vector<double>& v, std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double invh = 1.0 / cs.h;
  const double w = 0.5 * cs.h;
  for (std::size_t k = 0; k < cs.tris.size(); ++k) {
    const auto& t = cs.tris[k];
    double gx = t.s * (v[t.a] - v[t.b]) * invh;
    double gy = t.s * (v[t.a] - v[t.c]) * invh;
    double wx = t.s * w * (hc[k].a11 * gx + hc[k].a12 * gy);
    double wy = t.s * w * (hc[k].a12 * gx + hc[k].a22 * gy);
    out[t.a] += wx + wy;
    out[t.b] -= wx;
    out[t.c] -= wy;
  }
}

void hessian_diag(const Cells& cs, const std::vector<CellHessian>& hc,
                  std::vector<double>& diag) {
  std::fill(diag.begin(), diag.end(), 0.0);
  for (std::size_t k = 0; k < cs.tris.size(); ++k) {
    const auto& t = cs.tris[k];
    diag[t.a] += 0.5 * (hc[k].a11 + 2.0 * hc[k].a12 + hc[k].a22);
    diag[t.b] += 0.5 * hc[k].a11;
    diag[t.c] += 0.5 * hc[k].a22;
  }
}

struct Workspace {
  std::vector<char> free_node;
  std::vector<double> grad, dir, hv, resid, z, p, diag;
  long free_count = 0;

  explicit Workspace(const Grid& g) {
    long n = g.node_count();
    free_node.assign(n, 0);
    for (long idx : g.interior_nodes()) {
      free_node[idx] = 1;
      ++free_count;
    }
    grad.assign(n, 0.0);
    dir.assign(n, 0.0);
    hv.assign(n, 0.0);
    resid.assign(n, 0.0);
    z.assign(n, 0.0);
    p.assign(n, 0.0);
    diag.assign(n, 0.0);
  }

  void mask(std::vector<double>& v) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!free_node[i]) v[i] = 0.0;
  }

  double dot(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (free_node[i]) s += a[i] * b[i];
    return s;
  }

  double max_abs(const std::vector<double>& a) const {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (free_node[i]) m = std::max(m, std::abs(a[i]));
    return m;
  }
};

// Jacobi-preconditioned CG on the free nodes; rhs = -grad.
void solve_newton_step(const Cells& cs, const std::vector<CellHessian>& hc,
                       Workspace& ws, double levenberg) {
  hessian_diag(cs, hc, ws.diag);
  double dmax = 0.0;
  for (std::size_t i = 0; i < ws.diag.size(); ++i)
    if (ws.free_node[i]) dmax = std::max(dmax, ws.diag[i]);
  if (dmax == 0.0) dmax = 1.0;
  const double floor = 1e-12 * dmax + levenberg;

  std::fill(ws.dir.begin(), ws.dir.end(), 0.0);
  for (std::size_t i = 0; i < ws.resid.size(); ++i)
    ws.resid[i] = ws.free_node[i] ? -ws.grad[i] : 0.0;

  auto precond = [&](const std::vector<double>& r, std::vector<double>& z) {
    for (std::size_t i = 0; i < r.size(); ++i)
      z[i] = ws.free_node[i] ? r[i] / (ws.diag[i] + floor) : 0.0;
  };

  precond(ws.resid, ws.z);
  ws.p = ws.z;
  double rz = ws.dot(ws.resid, ws.z);
  double r0 = std::sqrt(ws.dot(ws.resid, ws.resid));
  if (r0 == 0.0) return;

  const long max_cg = 8 * ws.free_count + 200;
  for (long it = 0; it < max_cg; ++it) {
    hessian_apply(cs, hc, ws.p, ws.hv);
    for (std::size_t i = 0; i < ws.hv.size(); ++i)
      if (ws.free_node[i]) ws.hv[i] += floor * ws.p[i];
    double php = ws.dot(ws.p, ws.hv);
    if (php <= 0.0) break;  // convex F: only roundoff lands here
    double alpha = rz / php;
    for (std::size_t i = 0; i < ws.dir.size(); ++i)
      if (ws.free_node[i]) {
        ws.dir[i] += alpha * ws.p[i];
        ws.resid[i] -= alpha * ws.hv[i];
      }
    double rn = std::sqrt(ws.dot(ws.resid, ws.resid));
    if (rn <= 1e-2 * r0) break;
    precond(ws.resid, ws.z);
    double rz_new = ws.dot(ws.resid, ws.z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < ws.p.size(); ++i)
      if (ws.free_node[i]) ws.p[i] = ws.z[i] + beta * ws.p[i];
  }
}

struct StageResult {
  long iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
};

StageResult run_stage(const Cells& cs, const Lagrangian& F,
                      std::vector<double>& u, double eps, double gtol,
                      double tol_rel_energy, SolveMethod method,
                      long iter_budget, Workspace& ws) {
  StageResult res;
  double energy_now = cell_energy(cs, F, u, eps);
  std::vector<double> trial(u.size());
  std::vector<CellHessian> hc;

  for (long it = 0; it < iter_budget; ++it) {
    cell_gradient_of_energy(cs, F, u, eps, ws.grad);
    ws.mask(ws.grad);
    res.grad_norm = ws.max_abs(ws.grad);
    if (res.grad_norm <= gtol) {
      res.converged = true;
      return res;
    }
    ++res.iterations;

    cache_cell_hessians(cs, F, u, eps, hc);
    if (method == SolveMethod::newton_damped) {
      solve_newton_step(cs, hc, ws, 0.0);
    } else {
      // diagonally preconditioned steepest descent
      hessian_diag(cs, hc, ws.diag);
      double dmax = 0.0;
      for (std::size_t i = 0; i < ws.diag.size(); ++i)
        if (ws.free_node[i]) dmax = std::max(dmax, ws.diag[i]);
      if (dmax == 0.0) dmax = 1.0;
      for (std::size_t i = 0; i < ws.dir.size(); ++i)
        ws.dir[i] = ws.free_node[i]
                        ? -ws.grad[i] / (ws.diag[i] + 1e-8 * dmax)
                        : 0.0;
    }

    double slope = ws.dot(ws.grad, ws.dir);
    if (slope >= 0.0) {  // fall back to raw steepest descent
      for (std::size_t i = 0; i < ws.dir.size(); ++i)
        ws.dir[i] = ws.free_node[i] ? -ws.grad[i] : 0.0;
      slope = ws.dot(ws.grad, ws.dir);
      if (slope == 0.0) {
        res.converged = true;
        return res;
      }
    }

    // Near the minimum the predicted decrease drops below what the energy
    // can resolve in double precision; Armijo then blocks the last factor
    // of descent towards the gradient certificate. Such sub-resolution
    // steps (tiny direction, tiny slope) are taken at full length and the
    // next gradient check governs.
    double resolution = tol_rel_energy * (1.0 + std::abs(energy_now));
    if (-slope <= resolution &&
        ws.max_abs(ws.dir) <= 1e-6 * (1.0 + ws.max_abs(u))) {
      for (std::size_t i = 0; i < u.size(); ++i)
        if (ws.free_node[i]) u[i] += ws.dir[i];
      energy_now = cell_energy(cs, F, u, eps);
      continue;
    }

    // Armijo backtracking keeps the energy monotone across accepted steps.
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = u;
      for (std::size_t i = 0; i < trial.size(); ++i)
        if (ws.free_node[i]) trial[i] += t * ws.dir[i];
      double e = cell_energy(cs, F, trial, eps);
      if (e <= energy_now + 1e-4 * t * slope) {
        u.swap(trial);
        energy_now = e;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return res;  // step collapsed below rounding
  }
  return res;
}

}  // namespace

double energy(const Lagrangian& F, const ScalarField& u) {
  Cells cs(*u.grid);
  return cell_energy(cs, F, u.values, 0.0);
}

double weak_residual(const Lagrangian& F, const ScalarField& u,
                     const ScalarField& psi) {
  const Grid& g = *u.grid;
  for (long idx = 0; idx < g.node_count(); ++idx)
    if (g.kind(idx) != NodeKind::interior && psi.values[idx] != 0.0 &&
        !std::isnan(psi.values[idx]))
      throw Error(ErrorKind::invalid_test_function,
                  "test function does not vanish at the boundary");
  Cells cs(g);
  const double w = 0.5 * g.h() * g.h();
  double total = 0.0;
  Vec gu(2), gp(2);
  for (const auto& t : cs.tris) {
    cs.tri_gradient(u.values, t, gu[0], gu[1]);
    cs.tri_gradient(psi.values, t, gp[0], gp[1]);
    total += w * F.grad_at(gu).dot(gp);
  }
  return total;
}

std::pair<ScalarField, ConvergenceReport> minimize(const Lagrangian& F,
                                                   GridPtr grid,
                                                   const BoundaryValues& boundary,
                                                   const SolveOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  if (F.dim != grid->dim())
    throw Error(ErrorKind::invalid_parameter,
                "integrand dimension does not match the grid");

  if (opts.audit_convexity) {
    GradientBox box{Vec{-2.5, -2.5}, Vec{2.5, 2.5}};
    ProbeReport audit = convexity_audit(F, box, 7, 1);
    if (!audit.pass)
      throw Error(ErrorKind::invalid_parameter,
                  "integrand failed the convexity audit");
  }

  Cells cs(*grid);
  Workspace ws(*grid);

  ScalarField u(grid);
  for (long idx = 0; idx < grid->node_count(); ++idx)
    if (grid->is_exterior(idx))
      u.values[idx] = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < boundary.nodes.size(); ++k) {
    double v = boundary.values[k];
    if (!std::isfinite(v))
      throw Error(ErrorKind::invalid_parameter, "non-finite boundary value");
    u.values[boundary.nodes[k]] = v;
  }

  const double hn = std::pow(grid->h(), grid->dim());
  const double gtol = opts.tol_residual * hn;

  ConvergenceReport rep;

  // Warm start from the Laplace solution with the same data; for the
  // quadratic integrand this is already the answer.
  {
    Lagrangian quad = make_builtin(Builtin::quadratic, 2);
    StageResult warm = run_stage(cs, quad, u.values, 0.0, gtol,
                                 opts.tol_rel_energy,
                                 SolveMethod::newton_damped, 200, ws);
    rep.iterations += warm.iterations;
  }

  std::vector<double> schedule;
  double eps0 = opts.smoothing_eps;
  if (eps0 < 0.0) eps0 = F.degeneracy.empty() ? 0.0 : 1e-3;
  if (eps0 > 0.0) {
    for (double e = eps0; e >= 1e-9; e /= 10.0) schedule.push_back(e);
  }
  schedule.push_back(0.0);

  long budget = opts.max_iters;
  bool converged = false;
  double grad_norm = 0.0;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    double eps = schedule[s];
    bool final_stage = (s + 1 == schedule.size());
    double stage_tol = final_stage ? gtol : std::max(gtol, 1e-2 * eps * hn);
    StageResult sr =
        run_stage(cs, F, u.values, eps, stage_tol, opts.tol_rel_energy,
                  opts.method, std::max<long>(budget, 1), ws);
    rep.iterations += sr.iterations;
    budget -= sr.iterations;
    grad_norm = sr.grad_norm;
    if (final_stage) converged = sr.converged;
    if (budget <= 0 && !final_stage) {
      // spend what remains on the true energy
      StageResult last = run_stage(cs, F, u.values, 0.0, gtol,
                                   opts.tol_rel_energy, opts.method, 1, ws);
      grad_norm = last.grad_norm;
      converged = last.converged;
      break;
    }
  }

  rep.smoothing_schedule = schedule;
  rep.energy = cell_energy(cs, F, u.values, 0.0);
  rep.residual = grad_norm / hn;
  rep.converged = converged;
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(u), rep};
}

CoefficientField CoefficientField::identity(GridPtr grid) {
  CoefficientField cf;
  cf.grid = grid;
  cf.a.assign(grid->node_count(), SymMat::identity(grid->dim()));
  cf.eig_min = cf.eig_max = 1.0;
  return cf;
}

CoefficientField coefficient_field(const Lagrangian& F, const ScalarField& u) {
  const Grid& g = *u.grid;
  VectorField gu = gradient(u);
  CoefficientField cf;
  cf.grid = u.grid;
  cf.a.assign(g.node_count(), SymMat(g.dim()));
  cf.eig_min = std::numeric_limits<double>::infinity();
  cf.eig_max = -cf.eig_min;
  for (long idx = 0; idx < g.node_count(); ++idx) {
    if (g.is_exterior(idx)) continue;
    cf.a[idx] = F.hess_at(gu.at(idx));
    Vec ev = sym_eigenvalues(cf.a[idx]);
    cf.eig_min = std::min(cf.eig_min, ev[0]);
    cf.eig_max = std::max(cf.eig_max, ev[g.dim() - 1]);
  }
  return cf;
}

std::string ConvergenceReport::to_text() const {
  std::string out;
  out += "iterations=" + std::to_string(iterations) + "\n";
  out += "energy=" + fmt_full(energy) + "\n";
  out += "residual=" + fmt_full(residual) + "\n";
  std::string sched;
  for (double e : smoothing_schedule)
    sched += (sched.empty() ? "" : ",") + fmt_short(e);
  out += "smoothing_schedule=" + sched + "\n";
  out += "converged=" + std::string(converged ? "true" : "false") + "\n";
  out += "wall_seconds=" + fmt_short(wall_seconds) + "\n";
  return out;
}

}  // namespace varlab
