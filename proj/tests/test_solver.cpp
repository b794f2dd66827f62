#include "doctest.h"
#include "varlab/probe.hpp"
#include "varlab/solver.hpp"

#include <cmath>
#include <random>

using namespace varlab;

namespace {

ScalarField sample2(GridPtr g, double (*f)(double, double)) {
  return ScalarField::sample(g, [f](const Vec& x) { return f(x[0], x[1]); });
}

ScalarField solve_for(const std::string& lag, const std::string& bc, int res,
                      Mask mask = Mask::square, double p = 2.0) {
  BuiltinParams params;
  params.p = p;
  Lagrangian F = make_lagrangian(lag, 2, params);
  GridPtr grid = make_grid(2, res, mask);
  BoundaryValues bv = trace_boundary(grid, parse(bc));
  auto [u, rep] = minimize(F, grid, bv);
  REQUIRE(rep.converged);
  return u;
}

}  // namespace

TEST_CASE("energy closed forms") {
  GridPtr g = make_grid(2, 65, Mask::square);
  Lagrangian quad = make_builtin(Builtin::quadratic, 2);

  ScalarField fx = sample2(g, [](double x, double) { return x; });
  CHECK(energy(quad, fx) == doctest::Approx(4.0).epsilon(1e-12));

  Lagrangian cong = make_builtin(Builtin::congestion, 2);
  // 1-Lipschitz sample: gradient never exceeds the unit ball
  ScalarField lip = sample2(g, [](double x, double y) {
    return 0.6 * x + 0.7 * y;  // |grad| = sqrt(0.85) < 1
  });
  CHECK(energy(cong, lip) == 0.0);

  Lagrangian ms = make_builtin(Builtin::minimal_surface, 2);
  ScalarField zero = sample2(g, [](double, double) { return 0.0; });
  CHECK(energy(ms, zero) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("laplace solve matches the harmonic polynomial") {
  GridPtr g = make_grid(2, 65, Mask::square);
  ScalarField u = solve_for("quadratic", "x^2-y^2", 65);
  double worst = 0.0;
  for (long idx : g->interior_nodes()) {
    Vec x = u.grid->coord(idx);
    worst = std::max(worst, std::abs(u[idx] - (x[0] * x[0] - x[1] * x[1])));
  }
  // x^2 - y^2 is an exact discrete critical point; only solver tolerance
  // remains
  CHECK(worst <= 1e-7);
}

TEST_CASE("weak residual") {
  GridPtr g = make_grid(2, 65, Mask::square);
  Lagrangian quad = make_builtin(Builtin::quadratic, 2);
  ScalarField psi = cutoff(g, 0.25, 0.5);

  // affine field: constant flux pairs to zero against any test function
  ScalarField affine = sample2(g, [](double x, double y) { return 0.3 * x - y; });
  for (const char* lag : {"quadratic", "minimal-surface", "congestion"}) {
    Lagrangian F = make_lagrangian(lag, 2);
    CHECK(std::abs(weak_residual(F, affine, psi)) <= 1e-12);
  }

  ScalarField u = solve_for("quadratic", "x^2-y^2", 65);
  CHECK(std::abs(weak_residual(quad, u, psi)) <= 1e-8);

  // non-minimizer flags loudly: flux of x^2+y^2 has divergence 8
  ScalarField bad = sample2(g, [](double x, double y) { return x * x + y * y; });
  CHECK(std::abs(weak_residual(quad, bad, psi)) >= 0.1);

  // test functions must vanish at the boundary
  ScalarField notest = sample2(g, [](double, double) { return 1.0; });
  CHECK_THROWS_AS(weak_residual(quad, u, notest), Error);
}

TEST_CASE("minimal surface with zero data stays zero") {
  ScalarField u = solve_for("minimal-surface", "0", 65);
  for (long idx = 0; idx < u.grid->node_count(); ++idx)
    if (!u.grid->is_exterior(idx)) CHECK(std::abs(u[idx]) <= 1e-10);
}

TEST_CASE("congestion reaches a flat minimizer on 1-lipschitz data") {
  Lagrangian cong = make_builtin(Builtin::congestion, 2);
  GridPtr grid = make_grid(2, 65, Mask::square);
  BoundaryValues bv = trace_boundary(grid, parse("x"));
  auto [u, rep] = minimize(cong, grid, bv);
  CHECK(rep.converged);
  CHECK(rep.energy <= 1e-8);
  // gradient image stays in the closed unit ball (+2h slack)
  GradientCloud c = gradient_cloud(u, Vec{0.0, 0.0}, 0.9);
  double worst = 0.0;
  for (const Vec& p : c.points) worst = std::max(worst, p.norm());
  CHECK(worst <= 1.0 + 2.0 * grid->h());
}

TEST_CASE("p-laplace solve satisfies the weak form after continuation") {
  GridPtr grid = make_grid(2, 65, Mask::square);
  BuiltinParams params;
  params.p = 4.0;
  Lagrangian F = make_builtin(Builtin::p_laplace, 2, params);
  BoundaryValues bv = trace_boundary(grid, parse("x*y"));
  auto [u, rep] = minimize(F, grid, bv);
  CHECK(rep.converged);
  ScalarField psi = cutoff(grid, 0.25, 0.5);
  double psinorm = std::sqrt(energy(make_builtin(Builtin::quadratic, 2), psi) / 2.0);
  CHECK(std::abs(weak_residual(F, u, psi)) <= 1e-8 * std::max(1.0, psinorm));
}

TEST_CASE("discrete comparison principle for uniformly convex integrands") {
  for (const char* lag : {"quadratic", "minimal-surface"}) {
    for (const char* bc : {"x^2-y^2", "sin(2*x)*y", "x*y+0.3*x"}) {
      ScalarField u = solve_for(lag, bc, 49);
      BoundaryValues bv = trace_boundary(u.grid, parse(bc));
      double lo = *std::min_element(bv.values.begin(), bv.values.end());
      double hi = *std::max_element(bv.values.begin(), bv.values.end());
      for (long idx : u.grid->interior_nodes()) {
        CHECK(u[idx] >= lo - 1e-9);
        CHECK(u[idx] <= hi + 1e-9);
      }
    }
  }
}

TEST_CASE("interior bump strictly increases the energy of a minimizer") {
  Lagrangian quad = make_builtin(Builtin::quadratic, 2);
  ScalarField u = solve_for("quadratic", "x^2-y^2", 65);
  double base = energy(quad, u);
  const double h = u.grid->h();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(-0.4, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    Vec c{pos(rng), pos(rng)};
    ScalarField bumped = u;
    for (long idx : u.grid->interior_nodes()) {
      double d = (u.grid->coord(idx) - c).norm();
      if (d < 0.2) {
        double t = 1.0 - (d / 0.2) * (d / 0.2);
        bumped[idx] += h * h * t * t;
      }
    }
    CHECK(energy(quad, bumped) > base);
  }
}

TEST_CASE("gradient bound by boundary barriers on the disk") {
  // boundary data f(theta) = cos(2 theta); the linear barrier built from
  // the tangential derivative plus a curvature correction caps |grad u|
  ScalarField u = solve_for("quadratic", "x^2-y^2", 97, Mask::ball);
  double m1 = 0.0, m2 = 0.0;
  for (int j = 0; j < 512; ++j) {
    double theta = 2.0 * M_PI * j / 512;
    m1 = std::max(m1, std::abs(-2.0 * std::sin(2 * theta)));
    m2 = std::max(m2, std::abs(-4.0 * std::cos(2 * theta)));
  }
  double barrier = m1 + (M_PI * M_PI / 2.0) * (m2 / 2.0 + m1 * M_PI / 6.0);
  VectorField gu = gradient(u);
  double lip = 0.0;
  for (long idx : u.grid->interior_nodes())
    lip = std::max(lip, gu.at(idx).norm());
  CHECK(lip <= barrier + 2.0 * u.grid->h());
}

TEST_CASE("coefficient fields") {
  GridPtr g = make_grid(2, 33, Mask::square);
  Lagrangian quad = make_builtin(Builtin::quadratic, 2);
  ScalarField any = sample2(g, [](double x, double y) { return x * y; });
  CoefficientField a = coefficient_field(quad, any);
  CHECK(a.eig_min == doctest::Approx(2.0));
  CHECK(a.eig_max == doctest::Approx(2.0));

  Lagrangian ms = make_builtin(Builtin::minimal_surface, 2);
  ScalarField zero = sample2(g, [](double, double) { return 0.0; });
  CoefficientField am = coefficient_field(ms, zero);
  CHECK(am.eig_min == doctest::Approx(1.0));
  CHECK(am.eig_max == doctest::Approx(1.0));

  BuiltinParams params;
  params.p = 4.0;
  Lagrangian p4 = make_builtin(Builtin::p_laplace, 2, params);
  ScalarField fx = sample2(g, [](double x, double) { return x; });
  CoefficientField ap = coefficient_field(p4, fx);
  CHECK(ap.eig_min == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(ap.eig_max == doctest::Approx(12.0).epsilon(1e-6));
}

TEST_CASE("solver guards") {
  GridPtr grid = make_grid(2, 33, Mask::square);
  BoundaryValues bv = trace_boundary(grid, parse("x"));

  // refuses non-convex integrands
  Lagrangian bad = make_lagrangian("expr:0-(x^2+y^2)", 2);
  CHECK_THROWS_AS(minimize(bad, grid, bv), Error);

  // non-convergence is a flag, not an exception
  Lagrangian ms = make_builtin(Builtin::minimal_surface, 2);
  SolveOptions opts;
  opts.method = SolveMethod::gradient_descent;
  opts.max_iters = 3;
  opts.tol_residual = 1e-14;
  BoundaryValues hard = trace_boundary(grid, parse("sin(3*x)*cos(2*y)"));
  auto [u, rep] = minimize(ms, grid, hard, opts);
  CHECK_FALSE(rep.converged);
}

TEST_CASE("gradient descent agrees with newton on a small problem") {
  GridPtr grid = make_grid(2, 33, Mask::square);
  Lagrangian quad = make_builtin(Builtin::quadratic, 2);
  BoundaryValues bv = trace_boundary(grid, parse("x*y"));
  SolveOptions gd;
  gd.method = SolveMethod::gradient_descent;
  auto [ug, rg] = minimize(quad, grid, bv, gd);
  auto [un, rn] = minimize(quad, grid, bv);
  CHECK(rg.converged);
  CHECK(rn.converged);
  double worst = 0.0;
  for (long idx : grid->interior_nodes())
    worst = std::max(worst, std::abs(ug[idx] - un[idx]));
  CHECK(worst <= 1e-6);
}
