// Acceptance suite: one pass/fail line per criterion, exit code equals
// the number of failures. The optional argv[1] is the CLI binary used by
// the determinism criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fix256.hpp"
#include "varlab/degiorgi.hpp"
#include "varlab/fd.hpp"
#include "varlab/field.hpp"
#include "varlab/hedgehog.hpp"
#include "varlab/lagrangian.hpp"
#include "varlab/probe.hpp"
#include "varlab/solver.hpp"

namespace fs = std::filesystem;
using namespace varlab;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

ScalarField solve_case(const std::string& lag, const std::string& bc, int res,
                       double p = 2.0) {
  BuiltinParams params;
  params.p = p;
  Lagrangian F = make_lagrangian(lag, 2, params);
  GridPtr grid = make_grid(2, res, Mask::square);
  auto [u, rep] = minimize(F, grid, trace_boundary(grid, parse(bc)));
  if (!rep.converged) throw Error(ErrorKind::not_applicable, "solve failed");
  return u;
}

ScalarField bump_field(GridPtr g, const Vec& center, double radius,
                       double height) {
  return ScalarField::sample(g, [&](const Vec& x) {
    double d = (x - center).norm();
    if (d >= radius) return 0.0;
    double t = 1.0 - (d / radius) * (d / radius);
    return height * t * t;
  });
}

// --------------------------------------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  Lagrangian F = make_builtin(Builtin::quadratic, 2);
  GridPtr grid = make_grid(2, 129, Mask::square);
  auto [u, rep] = minimize(F, grid, trace_boundary(grid, parse("x^2-y^2")));
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  double h = grid->h();
  double worst = 0.0;
  for (long idx = 0; idx < grid->node_count(); ++idx) {
    Vec x = grid->coord(idx);
    worst = std::max(worst, std::abs(u[idx] - (x[0] * x[0] - x[1] * x[1])));
  }
  bool pass = rep.converged && worst <= 10.0 * h * h && seconds <= 60.0;
  report(1, pass, "laplace reproduction at res 129",
         "max_err=" + num(worst) + " bound=" + num(10 * h * h) +
             " time=" + num(seconds) + "s");
}

void criterion_2() {
  struct Case {
    const char* lag;
    double p;
  };
  const std::vector<Case> lags = {
      {"quadratic", 2.0}, {"minimal-surface", 2.0}, {"p-laplace", 4.0}};
  const std::vector<const char*> bcs = {"x^2-y^2", "x*y", "0.3*x+0.5*y"};
  const int res = 65;

  bool pass = true;
  std::string detail;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> cpos(-0.45, 0.45);
  std::uniform_real_distribution<double> crad(0.15, 0.35);

  for (const auto& lc : lags) {
    for (const char* bc : bcs) {
      BuiltinParams params;
      params.p = lc.p;
      Lagrangian F = make_lagrangian(lc.lag, 2, params);
      GridPtr grid = make_grid(2, res, Mask::square);
      auto [u, rep] = minimize(F, grid, trace_boundary(grid, parse(bc)));
      if (!rep.converged) {
        pass = false;
        detail = std::string(lc.lag) + "/" + bc + " did not converge";
        continue;
      }
      Lagrangian quad = make_builtin(Builtin::quadratic, 2);
      double worst_ratio = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        ScalarField psi =
            bump_field(grid, Vec{cpos(rng), cpos(rng)}, crad(rng), 1.0);
        double norm = std::sqrt(energy(quad, psi));
        double r = std::abs(weak_residual(F, u, psi));
        worst_ratio = std::max(worst_ratio, r / std::max(norm, 1e-30));
      }
      if (worst_ratio > 1e-8) {
        pass = false;
        detail = std::string(lc.lag) + "/" + bc +
                 " weak residual ratio " + num(worst_ratio);
      }
      // interior bumps of height h^2 strictly raise the energy
      double base = energy(F, u);
      double h = grid->h();
      for (int trial = 0; trial < 3; ++trial) {
        ScalarField b =
            bump_field(grid, Vec{cpos(rng), cpos(rng)}, crad(rng), h * h);
        ScalarField perturbed = u;
        for (long idx : grid->interior_nodes()) perturbed[idx] += b[idx];
        if (!(energy(F, perturbed) > base)) {
          pass = false;
          detail = std::string(lc.lag) + "/" + bc + " bump did not raise energy";
        }
      }
    }
  }
  if (detail.empty()) detail = "9 solves x 20 bumps + height-h^2 perturbations";
  report(2, pass, "weak-solution equivalence", detail);
}

void criterion_3() {
  bool pass = true;
  std::string detail;
  double worst_ratio = 0.0;
  for (const char* lag : {"quadratic", "minimal-surface"}) {
    for (const char* bc : {"x^2-y^2", "x*y", "sin(x)*y"}) {
      double ratios[2];
      int which = 0;
      for (int res : {65, 129}) {
        Lagrangian F = make_lagrangian(lag, 2);
        GridPtr grid = make_grid(2, res, Mask::square);
        auto [u, rep] = minimize(F, grid, trace_boundary(grid, parse(bc)));
        if (!rep.converged) {
          pass = false;
          detail = "solve failed";
          continue;
        }
        CoefficientField a = coefficient_field(F, u);
        VectorField gu = gradient(u);
        double worst_here = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
          ScalarField v(grid);
          for (long idx = 0; idx < grid->node_count(); ++idx)
            v[idx] = gu.at(idx)[axis];
          ProbeReport r = caccioppoli_audit(a, v, 0.5, 1.0);
          if (!r.pass) {
            pass = false;
            detail = std::string(lag) + "/" + bc + " audit failed";
          }
          worst_here = std::max(worst_here, r.measured["ratio"]);
        }
        ratios[which++] = worst_here;
        worst_ratio = std::max(worst_ratio, worst_here);
      }
      if (which == 2 && ratios[1] > ratios[0] + 0.02) {
        pass = false;
        detail = std::string(lag) + "/" + bc + " ratio grew under refinement: " +
                 num(ratios[0]) + " -> " + num(ratios[1]);
      }
    }
  }
  if (worst_ratio > 1.1) pass = false;
  if (detail.empty())
    detail = "worst L/R ratio " + num(worst_ratio) + " over 6 cases x 2 axes";
  report(3, pass, "caccioppoli audit with 10% slack", detail);
}

void criterion_4() {
  bool pass = true;
  std::string detail;

  GridPtr g = make_grid(2, 129, Mask::square);
  double h = g->h();
  ScalarField fx = ScalarField::sample(g, [](const Vec& x) { return x[0]; });
  ProbeReport closed = courant_lebesgue_check(fx, 0.125);
  double analytic_L = 1.0 / 16.0;
  double analytic_R = M_PI / std::log(4.0) * M_PI / 4.0;
  double bracket_lo = std::pow(2 * (0.125 - h), 2);
  double bracket_hi = std::pow(2 * (0.125 + h), 2);
  if (!closed.pass) pass = false;
  if (closed.measured["lhs"] < bracket_lo - 1e-12 ||
      closed.measured["lhs"] > bracket_hi + 1e-12)
    pass = false;
  if (std::abs(closed.measured["rhs"] - analytic_R) > 0.1 * analytic_R)
    pass = false;
  detail = "w=x1: L=" + num(closed.measured["lhs"]) + " (analytic " +
           num(analytic_L) + "), R=" + num(closed.measured["rhs"]) +
           " (analytic " + num(analytic_R) + ")";

  for (const char* bc : {"x^2-y^2", "sin(2*atan2(y,x))+0.2*x"}) {
    ScalarField u = solve_case("quadratic", bc, 129);
    for (double r : {0.125, 0.0625}) {
      ProbeReport rep = courant_lebesgue_check(u, r);
      if (!rep.pass) {
        pass = false;
        detail += std::string("; ") + bc + " fails at r=" + num(r);
      }
    }
  }
  report(4, pass, "courant-lebesgue with 10% slack at r=1/8,1/16", detail);
}

void criterion_5() {
  GridPtr g = make_grid(2, 129, Mask::square);
  auto radii = dyadic_radii(4);

  ScalarField fx = ScalarField::sample(g, [](const Vec& x) { return x[0]; });
  HolderFit lin = holder_fit(fx, Vec{0, 0}, radii);

  ScalarField fh = ScalarField::sample(g, [](const Vec& x) {
    double r = x.norm();
    if (r == 0.0) return 0.0;
    return std::sqrt(r) * std::cos(2.0 * std::atan2(x[1], x[0]));
  });
  HolderFit half = holder_fit(fh, Vec{0, 0}, radii);

  bool monotone = true;
  for (const ScalarField* f : {&fx, &fh}) {
    double prev = -1.0;
    for (auto it = radii.rbegin(); it != radii.rend(); ++it) {
      double osc = oscillation(*f, Vec{0, 0}, *it);
      if (osc < prev) monotone = false;  // exact set inclusion
      prev = osc;
    }
  }

  bool pass = lin.alpha >= 0.95 && lin.alpha <= 1.05 && half.alpha >= 0.45 &&
              half.alpha <= 0.55 && monotone;
  report(5, pass, "oscillation decay exponents",
         "alpha(x1)=" + num(lin.alpha) + " alpha(sqrt)=" + num(half.alpha) +
             (monotone ? " osc monotone" : " OSC NOT MONOTONE"));
}

void criterion_6() {
  GridPtr g = make_grid(2, 257, Mask::square);
  ScalarField fx = ScalarField::sample(g, [](const Vec& x) { return x[0]; });
  ProbeReport r = l2_linf_check(fx);
  double want = 1.0 / std::sqrt(2.0 * M_PI);
  bool pass = std::abs(r.measured["ratio"] - want) <= 0.02 * want;

  // bounded across a harmonic family
  double family_worst = 0.0;
  for (int m = 1; m <= 5; ++m) {
    for (int part = 0; part < 2; ++part) {
      ScalarField f = ScalarField::sample(g, [m, part](const Vec& x) {
        double rr = std::pow(x.norm(), m);
        double th = std::atan2(x[1], x[0]);
        return rr * (part ? std::sin(m * th) : std::cos(m * th));
      });
      ProbeReport rep = l2_linf_check(f, 10.0);
      if (!rep.pass) pass = false;
      family_worst = std::max(family_worst, rep.measured["ratio"]);
    }
  }
  report(6, pass, "sup/L2 ratio: closed form and harmonic family",
         "ratio(x1)=" + num(r.measured["ratio"]) + " want=" + num(want) +
             " family_worst=" + num(family_worst));
}

void criterion_7() {
  bool pass = true;
  std::string detail;

  for (double c : {0.01, 0.05, 0.1, 0.25, 0.5}) {
    IterationTrace tr = seq_lemma_quadratic(c, 1.0, 10000);
    if (tr.verdict != Verdict::bound_satisfied) {
      pass = false;
      detail = "quadratic bound failed at c=" + num(c);
    }
  }

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uC(0.5, 4.0);
  std::uniform_real_distribution<double> ud(0.25, 2.0);
  std::uniform_real_distribution<double> ua(-6.0, 0.5);  // log10 a0
  int mismatches = 0;
  for (int trial = 0; trial < 20; ++trial) {
    double C = uC(rng), delta = ud(rng);
    double a0 = std::pow(10.0, ua(rng));
    IterationTrace tr = seq_lemma_geometric(C, delta, a0, 2000);
    bool impl = tr.verdict == Verdict::converges_to_zero;
    bool ref = fix256::reference_converges(C, delta, a0, 2000);
    if (impl != ref) ++mismatches;
  }
  if (mismatches > 0) {
    pass = false;
    detail += " geometric verdict mismatches: " + std::to_string(mismatches);
  }
  if (detail.empty())
    detail = "5 damping constants to k=1e4; 20 seeded triples vs 256-bit reference";
  report(7, pass, "sequence lemmas", detail);
}

void criterion_8() {
  Lagrangian cong = make_builtin(Builtin::congestion, 2);
  GridPtr grid = make_grid(2, 129, Mask::square);
  auto [u, rep] = minimize(cong, grid, trace_boundary(grid, parse("x")));
  GradientCloud c = gradient_cloud(u, Vec{0, 0}, 0.9);
  double reach = 0.0;
  for (const Vec& p : c.points) reach = std::max(reach, p.norm());
  bool pass = rep.converged && rep.energy <= 1e-8 &&
              reach <= 1.0 + 2.0 * grid->h();
  report(8, pass, "congestion minimizer on 1-lipschitz data",
         "energy=" + num(rep.energy) + " cloud_reach=" + num(reach) +
             " bound=" + num(1.0 + 2.0 * grid->h()));
}

void criterion_9() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uM(0.5, 8.0);
  std::uniform_real_distribution<double> ur(0.3, 0.95);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    double M = uM(rng), r = ur(rng);
    auto eta = [M](const Vec& p) {
      return std::max(std::pow(p.norm(), -M) - 1.0, 0.0);
    };
    Vec dir{gauss(rng), gauss(rng)};
    dir = normalized(dir);
    Vec p = r * dir;
    SymMat h = fd_hessian(eta, p, 1e-4 * r);
    EigenSystem es = sym_eigensystem(h);
    int radial =
        std::abs(es.vectors[0].dot(dir)) > std::abs(es.vectors[1].dot(dir)) ? 0
                                                                            : 1;
    double want_rad = eta_radial_eigenvalue(M, r);
    double want_tan = eta_tangential_eigenvalue(M, r);
    worst = std::max(worst,
                     std::abs(es.values[radial] - want_rad) / std::abs(want_rad));
    worst = std::max(worst, std::abs(es.values[1 - radial] - want_tan) /
                                std::abs(want_tan));
  }

  bool criterion_ok = true;
  for (double M : {0.5, 1.0, 2.0, 4.0, 8.0})
    if (!(M * (M + 1.0) >= (2 - 1.0) * M)) criterion_ok = false;

  bool pass = worst <= 1e-6 && criterion_ok;
  report(9, pass, "barrier eigenvalue formulas at 100 sampled pairs",
         "worst_rel_err=" + num(worst) +
             (criterion_ok ? " subharmonicity(n=2) holds" : " criterion FAILED"));
}

void criterion_10() {
  RadialSolution a = radial_homogeneous_solution(0.5, 2, 2);
  RadialSolution b = radial_homogeneous_solution(1.0, 1, 2);
  bool pass = a.mu == 15.0 && a.report.pass &&
              a.report.measured["residual_rel"] <= 1e-3 && b.mu == 0.0;
  report(10, pass, "homogeneous divergence-form solutions",
         "mu(1/2,2)=" + num(a.mu) + " residual=" +
             num(a.report.measured["residual_rel"]) + " mu(1,1)=" + num(b.mu));
}

void criterion_11() {
  HomogeneousFunction u = fourD_example();

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  bool homogeneous = true;
  for (int trial = 0; trial < 10000; ++trial) {
    Vec x{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    if (x.norm() < 1e-6) continue;
    if (u(2.0 * x) != 2.0 * u(x)) homogeneous = false;
  }

  Vec ev = hessian_spectrum(u, Vec{1, 0, 0, 0});
  bool spectrum_ok = false;
  double nearest_zero = 1e300;
  int positives = 0, negatives = 0;
  for (int i = 0; i < 4; ++i) nearest_zero = std::min(nearest_zero, std::abs(ev[i]));
  for (int i = 0; i < 4; ++i) {
    if (std::abs(ev[i]) == nearest_zero) continue;
    if (ev[i] > 0) ++positives;
    if (ev[i] < 0) ++negatives;
  }
  spectrum_ok = nearest_zero <= 1e-5 && positives >= 1 && negatives >= 1;

  auto away = [](const Vec& x) {
    double za = std::hypot(x[0], x[1]);
    double zb = std::hypot(x[2], x[3]);
    return std::abs(za - zb) >= 0.05;
  };
  HedgehogCloud cloud = hedgehog_cloud(u, sphere_samples(4, 2000, 1, away));
  ProbeReport nc = normal_correspondence_check(cloud);

  ProbeReport es = elliptic_solvability_check(u, sphere_samples(4, 1000, 3, away), 1e6);

  bool pass = homogeneous && spectrum_ok && nc.pass && es.pass &&
              std::isfinite(es.measured["worst_ratio"]);
  report(11, pass, "4d fixture verification",
         std::string(homogeneous ? "homogeneity exact" : "HOMOGENEITY BROKE") +
             ", aligned=" + num(nc.measured["fraction_aligned"]) +
             ", worst_ratio=" + num(es.measured["worst_ratio"]));
}

void criterion_12(const char* bin) {
  if (!bin) {
    report(12, false, "CLI determinism", "no binary path supplied");
    return;
  }
  auto run = [&](const std::string& args) {
    std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  fs::path base = fs::temp_directory_path() / "varlab_acceptance";
  fs::remove_all(base);
  bool pass = true;
  std::string detail;

  struct Job {
    const char* name;
    std::string args;
    const char* file;
  };
  std::vector<Job> jobs = {
      {"solve", "solve --lagrangian minimal-surface --bc \"x*y\" --res 49 --seed 5",
       "u.csv"},
      {"hedgehog", "hedgehog fourd --samples 300 --seed 3", "cloud.csv"},
      {"degiorgi", "degiorgi seq1 --C 2 --delta 0.5 --a0 0.25", "trace.csv"},
  };
  for (const auto& job : jobs) {
    fs::path d1 = base / (std::string(job.name) + "_1");
    fs::path d2 = base / (std::string(job.name) + "_2");
    fs::create_directories(d1);
    fs::create_directories(d2);
    if (run(job.args + " --out " + d1.string()) != 0 ||
        run(job.args + " --out " + d2.string()) != 0) {
      pass = false;
      detail += std::string(job.name) + " run failed; ";
      continue;
    }
    if (slurp(d1 / job.file) != slurp(d2 / job.file) ||
        slurp(d1 / job.file).empty()) {
      pass = false;
      detail += std::string(job.name) + " bytes differ; ";
    }
  }
  fs::remove_all(base);
  if (detail.empty()) detail = "solve/hedgehog/degiorgi CSVs byte-identical";
  report(12, pass, "CLI determinism", detail);
}

}  // namespace

int main(int argc, char** argv) {
  const char* bin = argc > 1 ? argv[1] : nullptr;
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12(bin);
  } catch (const std::exception& e) {
    std::printf("FAIL: unexpected exception: %s\n", e.what());
    ++failures;
  }
  std::printf("%d criteria failed\n", failures);
  return failures;
}
