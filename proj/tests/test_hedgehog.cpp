#include "doctest.h"
#include "varlab/hedgehog.hpp"

#include <cmath>
#include <random>

using namespace varlab;

TEST_CASE("the 4d fixture: values and exact symmetries") {
  HomogeneousFunction u = fourD_example();
  CHECK(u(Vec{1, 0, 0, 0}) == 1.0);
  CHECK(u(Vec{0, 0, 1, 0}) == -1.0);
  CHECK(u(Vec{1, 0, 1, 0}) == 0.0);

  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    Vec x{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    if (x.norm() < 1e-6) continue;
    // one-homogeneity is exact for the doubling scaling
    Vec x2 = 2.0 * x;
    CHECK(u(x2) == 2.0 * u(x));
    // block swap antisymmetry is exact
    Vec swapped{x[2], x[3], x[0], x[1]};
    CHECK(u(swapped) == -u(x));
  }

  // rotation in the z1 plane leaves u unchanged (up to roundoff)
  Vec x{0.3, -0.2, 0.5, 0.7};
  double c = std::cos(0.77), s = std::sin(0.77);
  Vec rot{c * x[0] - s * x[1], s * x[0] + c * x[1], x[2], x[3]};
  CHECK(u(rot) == doctest::Approx(u(x)).epsilon(1e-13));
}

TEST_CASE("eval_homogeneous jets") {
  HomogeneousFunction u = fourD_example();
  CHECK_THROWS_AS(eval_homogeneous(u, Vec{0, 0, 0, 0}), Error);

  HomogeneousJet jet = eval_homogeneous(u, Vec{1, 0, 0, 0});
  CHECK(jet.value == 1.0);
  CHECK(jet.gradient[0] == doctest::Approx(1.0).epsilon(1e-8));

  // gradients of one-homogeneous functions are zero-homogeneous
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vec x{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    if (x.norm() < 0.1) continue;
    Vec g1 = homogeneous_gradient(u, x);
    Vec g2 = homogeneous_gradient(u, 2.0 * x);
    Vec g3 = homogeneous_gradient(u, 0.5 * x);
    CHECK((g1 - g2).norm() <= 1e-10);
    CHECK((g1 - g3).norm() <= 1e-10);
  }
}

TEST_CASE("euler relation: degree-1 hessians annihilate the radius") {
  std::vector<HomogeneousFunction> fixtures = {
      fourD_example(), norm_function(2), norm_function(3),
      perturbed_circle(0.1, 2)};
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& f : fixtures) {
    for (int trial = 0; trial < 20; ++trial) {
      Vec x(f.dim);
      for (int i = 0; i < f.dim; ++i) x[i] = gauss(rng);
      if (x.norm() < 0.3) continue;
      HomogeneousJet jet = eval_homogeneous(f, x);
      double hnorm = jet.hessian.frobenius();
      if (hnorm < 1e-12) continue;  // linear fixture
      CHECK(jet.hessian.apply(x).norm() <= 1e-5 * hnorm * x.norm());
    }
  }
}

TEST_CASE("hessian spectra") {
  HomogeneousFunction u = fourD_example();
  Vec ev = hessian_spectrum(u, Vec{1, 0, 0, 0});
  // analytic spectrum at e1 is {-3, -3, 0, 1}
  CHECK(ev[0] == doctest::Approx(-3.0).epsilon(1e-5));
  CHECK(ev[1] == doctest::Approx(-3.0).epsilon(1e-5));
  CHECK(std::abs(ev[2]) <= 1e-5);
  CHECK(ev[3] == doctest::Approx(1.0).epsilon(1e-5));

  Vec evn = hessian_spectrum(norm_function(2), Vec{1, 0});
  CHECK(std::abs(evn[0]) <= 1e-6);
  CHECK(evn[1] == doctest::Approx(1.0).epsilon(1e-6));

  Vec evl = hessian_spectrum(linear_function(Vec{0.3, 0.9}), Vec{1, 0});
  CHECK(std::abs(evl[0]) <= 1e-8);
  CHECK(std::abs(evl[1]) <= 1e-8);
}

TEST_CASE("elliptic solvability") {
  HomogeneousFunction u = fourD_example();
  auto away = [](const Vec& x) {
    double a = std::hypot(x[0], x[1]);
    double b = std::hypot(x[2], x[3]);
    return std::abs(a - b) >= 0.05;
  };
  auto pts = sphere_samples(4, 1000, 3, away);
  ProbeReport rep = elliptic_solvability_check(u, pts, 1e6);
  CHECK(rep.pass);
  CHECK(std::isfinite(rep.measured["worst_ratio"]));

  // saddle fixture: ratio one everywhere
  HomogeneousFunction saddle = homogeneous_from_trace(
      2, 2.0,
      [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; }, "saddle");
  auto pts2 = sphere_samples(2, 200, 5);
  ProbeReport rs = elliptic_solvability_check(saddle, pts2, 10.0);
  CHECK(rs.pass);
  CHECK(rs.measured["worst_ratio"] == doctest::Approx(1.0).epsilon(1e-4));

  // definite fixture fails
  HomogeneousFunction bowl = homogeneous_from_trace(
      2, 2.0, [](const Vec&) { return 1.0; }, "bowl");
  CHECK_FALSE(elliptic_solvability_check(bowl, pts2, 10.0).pass);
}

TEST_CASE("hedgehog clouds") {
  // u = |x|: the image of the sphere is the sphere itself
  HedgehogCloud circle = hedgehog_cloud(norm_function(2), 300, 1);
  for (std::size_t i = 0; i < circle.points.size(); ++i)
    CHECK((circle.images[i] - circle.points[i]).norm() <= 1e-8);
  ProbeReport nc = normal_correspondence_check(circle);
  CHECK(nc.pass);
  CHECK(nc.measured["fraction_aligned"] >= 0.999);

  // linear: every image is the same point and every sample is singular
  HedgehogCloud point = hedgehog_cloud(linear_function(Vec{0.6, 0.8}), 300, 1);
  for (char s : point.singular) CHECK(s == 1);
  CHECK_THROWS_AS(normal_correspondence_check(point), Error);

  CHECK_THROWS_AS(hedgehog_cloud(norm_function(2), 10, 1), Error);  // too few
}

TEST_CASE("fourd cloud: correspondence and the two-sheet split") {
  HomogeneousFunction u = fourD_example();
  auto away = [](const Vec& x) {
    double a = std::hypot(x[0], x[1]);
    double b = std::hypot(x[2], x[3]);
    return std::abs(a - b) >= 0.05;
  };
  HedgehogCloud cloud = hedgehog_cloud(u, sphere_samples(4, 2000, 1, away));
  ProbeReport nc = normal_correspondence_check(cloud);
  CHECK(nc.pass);
  CHECK(nc.measured["fraction_aligned"] >= 0.99);

  // the regular images split across the |p_z1| = |p_z2| symmetry plane,
  // with both sheets populated; the sheets meet tangentially on the
  // torus, so the k-NN graph itself stays connected at this scale
  long sheet_a = 0, sheet_b = 0;
  for (std::size_t i = 0; i < cloud.images.size(); ++i) {
    if (cloud.singular[i]) continue;
    const Vec& p = cloud.images[i];
    double a = std::hypot(p[0], p[1]);
    double b = std::hypot(p[2], p[3]);
    CHECK(a != b);
    (a > b ? sheet_a : sheet_b)++;
  }
  CHECK(sheet_a >= 100);
  CHECK(sheet_b >= 100);
  CHECK(cloud.components >= 1);
}

TEST_CASE("second fundamental form against the inverse hessian") {
  // unit circle: curvature 1 against tangential eigenvalue 1
  ProbeReport rc = second_form_check(norm_function(2), Vec{1.0, 0.0});
  CHECK(rc.pass);
  CHECK(rc.measured["fit_norm"] == doctest::Approx(1.0).epsilon(0.05));

  // perturbed circle at theta = 0
  ProbeReport rp = second_form_check(perturbed_circle(0.1, 2), Vec{1.0, 0.0});
  CHECK(rp.pass);

  // 4d fixture well inside one sheet
  ProbeReport r4 = second_form_check(fourD_example(),
                                     normalized(Vec{1.0, 0.0, 0.1, 0.0}));
  CHECK(r4.pass);
}

TEST_CASE("radial divergence-form solutions") {
  RadialSolution sol = radial_homogeneous_solution(0.5, 2, 2);
  CHECK(sol.mu == doctest::Approx(15.0));
  CHECK(sol.report.measured["eig_hi"] == doctest::Approx(16.0));
  CHECK(sol.report.pass);
  CHECK(sol.report.measured["residual_rel"] <= 1e-3);

  RadialSolution harmonic = radial_homogeneous_solution(1.0, 1, 2);
  CHECK(harmonic.mu == 0.0);  // u = x1, a = I
  CHECK(harmonic.report.pass);

  // mu = 0 family: alpha(alpha+n-2) = lambda_g
  RadialSolution family = radial_homogeneous_solution(2.0, 2, 2);
  CHECK(family.mu == 0.0);
  CHECK(family.report.pass);

  // 3d zonal harmonic
  RadialSolution zonal = radial_homogeneous_solution(1.0, 2, 3);
  CHECK(zonal.mu == doctest::Approx(2.0));
  CHECK(zonal.report.pass);

  CHECK_THROWS_AS(radial_homogeneous_solution(-0.5, 2, 2), Error);
  CHECK_THROWS_AS(radial_homogeneous_solution(0.5, 2, 4), Error);
}

TEST_CASE("zero-homogeneous counterexample") {
  ZeroHomogeneous z = zero_homogeneous_counterexample(65);
  CHECK(z.report.pass);
  CHECK(z.report.measured["osc_r0.25"] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(z.report.measured["osc_r0.50"] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(z.report.measured["energy_rel_err"] <= 0.10);
  CHECK(z.report.measured["osc_near_origin"] >= 1.9);

  // scale invariance on lattice rays
  const Grid& g = *z.field.grid;
  long a = g.index({40, 36, 48, 0});  // some node and its doubled ray point
  (void)a;
  for (long idx = 0; idx < g.node_count(); ++idx) {
    auto mi = g.multi(idx);
    int half = (g.res() - 1) / 2;
    int dx = mi[0] - half, dy = mi[1] - half, dz = mi[2] - half;
    if (std::abs(2 * dx) > half || std::abs(2 * dy) > half ||
        std::abs(2 * dz) > half)
      continue;
    if (dx == 0 && dy == 0 && dz == 0) continue;
    std::array<int, kMaxDim> doubled = {half + 2 * dx, half + 2 * dy,
                                        half + 2 * dz, 0};
    CHECK(z.field[idx] == doctest::Approx(z.field[g.index(doubled)]).epsilon(1e-12));
    if (idx > 40000) break;  // a sample of rays is plenty
  }
}
