// varlab: minimize scalar variational integrals on the square or disk and
// probe the minimizers (oscillation decay, energy bounds, level-set
// iteration, gradient-image geometry). Emits CSV tables and SVG figures.
//
// Exit codes: 0 success, 2 usage/input error, 3 solver non-convergence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "varlab/degiorgi.hpp"
#include "varlab/expr.hpp"
#include "varlab/field.hpp"
#include "varlab/hedgehog.hpp"
#include "varlab/lagrangian.hpp"
#include "varlab/numfmt.hpp"
#include "varlab/probe.hpp"
#include "varlab/solver.hpp"
#include "varlab/svg.hpp"

namespace fs = std::filesystem;
using namespace varlab;

namespace {

std::vector<double> parse_list(const std::string& src) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(src);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stod(token));
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_error, "cannot open " + path.string());
  out << text;
}

Lagrangian lagrangian_from_flags(const std::string& spec, double p,
                                 const std::string& pvec) {
  BuiltinParams params;
  params.p = p;
  if (!pvec.empty()) params.p_vec = parse_list(pvec);
  return make_lagrangian(spec, 2, params);
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string lagrangian = "quadratic";
  std::string bc;
  std::string domain = "square";
  std::string method = "newton";
  std::string out = ".";
  std::string pvec;
  double p = 2.0;
  int res = 129;
  long max_iters = 200000;
  double tol_residual = 1e-8;
  double tol_energy = 1e-10;
  double smoothing_eps = -1.0;
  unsigned long seed = 1;
};

int run_solve(const SolveArgs& args) {
  if (args.res < 33 || args.res % 2 == 0) {
    std::cerr << "error: --res must be odd and >= 33\n";
    return 2;
  }
  Lagrangian F = lagrangian_from_flags(args.lagrangian, args.p, args.pvec);
  Mask mask = args.domain == "ball" ? Mask::ball : Mask::square;
  GridPtr grid = make_grid(2, args.res, mask);
  BoundaryValues bv = trace_boundary(grid, parse(args.bc));

  SolveOptions opts;
  opts.max_iters = args.max_iters;
  opts.tol_residual = args.tol_residual;
  opts.tol_rel_energy = args.tol_energy;
  opts.smoothing_eps = args.smoothing_eps;
  opts.method = args.method == "gd" ? SolveMethod::gradient_descent
                                    : SolveMethod::newton_damped;

  auto [u, report] = minimize(F, grid, bv, opts);

  fs::path out(args.out);
  fs::create_directories(out);
  write_field(u, (out / "u.csv").string());
  std::string text = "command=solve\nlagrangian=" + F.label + "\n" +
                     report.to_text();
  write_text(out / "report.txt", text);
  std::cout << (report.converged ? "converged" : "non-converged")
            << " energy=" << fmt_short(report.energy)
            << " residual=" << fmt_short(report.residual) << "\n";
  return report.converged ? 0 : 3;
}

// ---------------------------------------------------------------- probe

struct ProbeArgs {
  std::string in;
  std::string lagrangian = "quadratic";
  std::string pvec;
  double p = 2.0;
  std::string out = ".";
  std::string radii = "dyadic:5";
  std::string center = "0,0";
  std::string chop_line, chop_circle;
  double r = 0.25;
  double rin = 0.5, rout = 1.0;
  double cap = 10.0;
  bool osc = false, holder = false, caccioppoli = false, courant = false,
       maxprinciple = false, l2linf = false, harnack = false,
       energy_decay_flag = false, cloud = false;
  unsigned long seed = 1;
};

std::vector<double> radii_from_flag(const std::string& flag) {
  if (flag.rfind("dyadic:", 0) == 0)
    return dyadic_radii(std::stoi(flag.substr(7)));
  return parse_list(flag);
}

int run_probe(const ProbeArgs& args) {
  ScalarField u = read_field(args.in);
  Vec center{0.0, 0.0};
  {
    auto c = parse_list(args.center);
    if (c.size() == 2) center = Vec{c[0], c[1]};
  }

  std::string report;
  fs::path out(args.out);
  fs::create_directories(out / "tables");
  fs::create_directories(out / "plots");

  // a probe whose preconditions fail is reported and skipped; the batch
  // keeps going
  auto guarded = [&report](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::not_applicable &&
          e.kind() != ErrorKind::insufficient_resolution)
        throw;
      report += "name=" + name + "\nskipped=" + std::string(e.what()) + "\n\n";
    }
  };

  if (args.osc) {
    auto radii = radii_from_flag(args.radii);
    std::string csv = "r,osc\n";
    for (double r : radii)
      csv += fmt_full(r) + "," + fmt_full(oscillation(u, center, r)) + "\n";
    write_text(out / "tables" / "osc.csv", csv);
    report += "name=oscillation\nrows=" + std::to_string(radii.size()) + "\n\n";
  }

  if (args.holder) {
    HolderFit fit = holder_fit(u, center, radii_from_flag(args.radii));
    ProbeReport rep;
    rep.name = "holder-fit";
    rep.measured["alpha"] = fit.alpha;
    rep.measured["residual"] = fit.residual;
    rep.pass = true;
    rep.margin = 0.0;
    if (fit.constant) rep.note = "constant";
    if (!fit.warning.empty()) rep.note += " " + fit.warning;
    report += to_text(rep);
    std::string csv = "r,osc\n";
    for (std::size_t i = 0; i < fit.radii.size(); ++i)
      csv += fmt_full(fit.radii[i]) + "," + fmt_full(fit.oscillations[i]) + "\n";
    write_text(out / "tables" / "holder.csv", csv);
  }

  if (args.caccioppoli) {
    guarded("caccioppoli", [&] {
      Lagrangian F = lagrangian_from_flags(args.lagrangian, args.p, args.pvec);
      CoefficientField a = coefficient_field(F, u);
      VectorField gu = gradient(u);
      for (int axis = 0; axis < 2; ++axis) {
        ScalarField v(u.grid);
        for (long idx = 0; idx < u.grid->node_count(); ++idx)
          v[idx] = u.grid->is_exterior(idx)
                       ? std::numeric_limits<double>::quiet_NaN()
                       : gu.at(idx)[axis];
        ProbeReport rep = caccioppoli_audit(a, v, args.rin, args.rout);
        rep.name += axis == 0 ? "-dx" : "-dy";
        report += to_text(rep);
      }
    });
  }

  if (args.courant)
    guarded("courant-lebesgue",
            [&] { report += to_text(courant_lebesgue_check(u, args.r)); });

  if (args.maxprinciple) {
    guarded("max-principle", [&] {
      std::vector<BallSpec> balls = {
          {center, 0.25}, {center, 0.5}, {center, 0.75}};
      report += to_text(max_principle_check(u, balls));
    });
  }

  if (args.l2linf) report += to_text(l2_linf_check(u, args.cap));

  if (args.harnack) {
    guarded("harnack", [&] {
      ProbeReport rep;
      rep.name = "harnack";
      rep.measured["ratio"] = harnack_ratio(u);
      rep.pass = true;
      rep.margin = 0.0;
      report += to_text(rep);
    });
  }

  if (args.energy_decay_flag) {
    guarded("energy-decay", [&] {
      EnergyDecay ed = energy_decay(u);
      ProbeReport rep;
      rep.name = "energy-decay";
      rep.measured["exponent"] = ed.exponent;
      rep.pass = true;
      rep.margin = 0.0;
      if (ed.constant) rep.note = "constant";
      report += to_text(rep);
      std::string csv = "r,dirichlet\n";
      for (std::size_t i = 0; i < ed.radii.size(); ++i)
        csv += fmt_full(ed.radii[i]) + "," + fmt_full(ed.integrals[i]) + "\n";
      write_text(out / "tables" / "energy_decay.csv", csv);
    });
  }

  if (args.cloud || !args.chop_line.empty() || !args.chop_circle.empty()) {
    GradientCloud c = gradient_cloud(u, center, args.r);
    write_text(out / "tables" / "cloud.csv", cloud_to_csv(c));

    double pad = 0.2 * std::max(1e-6, c.diameter);
    SvgPlot plot(c.bbox_lo[0] - pad, c.bbox_lo[1] - pad, c.bbox_hi[0] + pad,
                 c.bbox_hi[1] + pad);
    plot.axes();
    plot.scatter(c.points, 0, 1, "#1f6fb2");

    ProbeReport rep;
    rep.name = "gradient-cloud";
    rep.measured["points"] = double(c.points.size());
    rep.measured["diameter"] = c.diameter;
    rep.pass = true;
    rep.margin = 0.0;
    report += to_text(rep);

    if (!args.chop_line.empty()) {
      auto v = parse_list(args.chop_line);
      if (v.size() < 3)
        throw Error(ErrorKind::invalid_parameter,
                    "--chop-line needs ex,ey,a[,gap]");
      Vec e{v[0], v[1]};
      double a = v[2];
      double gap = v.size() > 3 ? v[3] : 2.0 * u.grid->h();
      LineChop res = chop_halfplane(c, e, a, gap);
      ProbeReport cr;
      cr.name = "chop-line";
      cr.measured["a"] = a;
      cr.measured["gap"] = gap;
      cr.pass = true;
      cr.margin = 0.0;
      cr.note = to_string(res);
      report += to_text(cr);
      // draw the strip edges
      Vec dir = normalized(e);
      Vec ortho{-dir[1], dir[0]};
      for (double level : {a, a + gap}) {
        Vec p0 = dir * level + ortho * -10.0;
        Vec p1 = dir * level + ortho * 10.0;
        plot.line(p0[0], p0[1], p1[0], p1[1], "#c23b22");
      }
    }
    if (!args.chop_circle.empty()) {
      auto v = parse_list(args.chop_circle);
      if (v.size() != 4)
        throw Error(ErrorKind::invalid_parameter,
                    "--chop-circle needs qx,qy,rin,rout");
      Vec q{v[0], v[1]};
      CircleChop res = chop_circle(c, q, v[2], v[3]);
      ProbeReport cr;
      cr.name = "chop-circle";
      cr.measured["r_in"] = v[2];
      cr.measured["r_out"] = v[3];
      cr.pass = true;
      cr.margin = 0.0;
      cr.note = to_string(res);
      report += to_text(cr);
      plot.circle(q[0], q[1], v[2], "#c23b22");
      plot.circle(q[0], q[1], v[3], "#e08f62");
    }
    plot.write((out / "plots" / "cloud.svg").string());
  }

  write_text(out / "report.txt", report);
  std::cout << "probe done\n";
  return 0;
}

// ------------------------------------------------------------- degiorgi

int run_seq1(double C, double delta, double a0, long kmax,
             const std::string& outdir) {
  IterationTrace tr = seq_lemma_geometric(C, delta, a0, kmax);
  fs::path out(outdir);
  fs::create_directories(out);
  write_text(out / "trace.csv", tr.to_csv());
  std::string rep = "name=seq-geometric\nverdict=" + to_string(tr.verdict) +
                    "\nthreshold_a0=" + fmt_full(tr.threshold_a0) + "\n";
  write_text(out / "report.txt", rep);
  std::cout << to_string(tr.verdict) << " threshold_a0=" << fmt_short(tr.threshold_a0)
            << "\n";
  return 0;
}

int run_seq2(double c, double a0, long kmax, const std::string& outdir) {
  IterationTrace tr = seq_lemma_quadratic(c, a0, kmax);
  fs::path out(outdir);
  fs::create_directories(out);
  write_text(out / "trace.csv", tr.to_csv());
  write_text(out / "report.txt",
             "name=seq-quadratic\nverdict=" + to_string(tr.verdict) + "\n");
  std::cout << to_string(tr.verdict) << "\n";
  return 0;
}

// threshold bisections over a (C, delta) grid, emitted as a CSV matrix
int run_sweep(const std::string& c_list, const std::string& delta_list,
              long kmax, const std::string& outdir) {
  std::vector<double> cs = parse_list(c_list);
  std::vector<double> deltas = parse_list(delta_list);
  if (cs.empty() || deltas.empty())
    throw Error(ErrorKind::invalid_parameter, "empty sweep axis");
  std::string csv = "C\\delta";
  for (double d : deltas) csv += "," + fmt_full(d);
  csv += "\n";
  for (double C : cs) {
    csv += fmt_full(C);
    for (double d : deltas)
      csv += "," + fmt_full(seq_geometric_threshold(C, d, kmax));
    csv += "\n";
  }
  fs::path out(outdir);
  fs::create_directories(out);
  write_text(out / "sweep.csv", csv);
  std::cout << "sweep done (" << cs.size() << "x" << deltas.size() << ")\n";
  return 0;
}

int run_profile(const std::string& in, const std::string& form,
                const std::string& heights_flag, double drop,
                const std::string& outdir) {
  ScalarField v = read_field(in);
  std::vector<double> heights = heights_flag.empty()
                                    ? std::vector<double>()
                                    : parse_list(heights_flag);
  if (heights.empty())
    for (int i = 0; i <= 20; ++i) heights.push_back(i / 20.0);

  fs::path out(outdir);
  fs::create_directories(out);
  std::string report;
  if (form == "v") {
    LevelProfile p = v_profile(v, heights);
    write_text(out / "profile.csv", profile_to_csv(p));
    report += to_text(scaling_class_audit(p, v.grid->dim()));
  } else if (form == "w") {
    MeasureLemma ml = measure_profile(v, heights);
    write_text(out / "profile.csv", profile_to_csv(ml.profile));
    ProbeReport rep;
    rep.name = "measure-profile";
    rep.measured["largest_c"] = ml.largest_c;
    rep.pass = true;
    rep.margin = 0.0;
    report += to_text(rep);
  } else {
    throw Error(ErrorKind::invalid_parameter, "--form must be v or w");
  }
  if (drop > 0.0) report += to_text(oscillation_drop(v, drop));
  write_text(out / "report.txt", report);
  std::cout << "profile done\n";
  return 0;
}

// ------------------------------------------------------------- hedgehog

int run_fourd(int samples, unsigned long seed, double cap, double torus_margin,
              const std::string& proj, const std::string& outdir) {
  HomogeneousFunction u = fourD_example();
  auto away_from_torus = [torus_margin](const Vec& x) {
    double a = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    double b = std::sqrt(x[2] * x[2] + x[3] * x[3]);
    return std::abs(a - b) >= torus_margin;
  };
  auto pts = sphere_samples(4, samples, seed, away_from_torus);
  HedgehogCloud cloud = hedgehog_cloud(u, pts);

  fs::path out(outdir);
  fs::create_directories(out);
  write_text(out / "cloud.csv", cloud.to_csv());

  int px = 0, py = 2;
  {
    auto v = parse_list(proj);
    if (v.size() == 2) {
      px = int(v[0]);
      py = int(v[1]);
    }
  }
  double lo = 1e30, hi = -1e30;
  for (const Vec& p : cloud.images) {
    lo = std::min({lo, p[px], p[py]});
    hi = std::max({hi, p[px], p[py]});
  }
  SvgPlot plot(lo, lo, hi, hi);
  plot.axes();
  std::vector<Vec> regular, flagged;
  for (std::size_t i = 0; i < cloud.images.size(); ++i)
    (cloud.singular[i] ? flagged : regular).push_back(cloud.images[i]);
  plot.scatter(regular, px, py, "#1f6fb2");
  plot.scatter(flagged, px, py, "#c23b22");
  plot.write((out / "cloud.svg").string());

  std::string report;
  report += to_text(normal_correspondence_check(cloud));
  report += to_text(elliptic_solvability_check(u, pts, cap));

  Vec spectrum = hessian_spectrum(u, Vec{1.0, 0.0, 0.0, 0.0});
  ProbeReport sp;
  sp.name = "spectrum-e1";
  for (int i = 0; i < 4; ++i)
    sp.measured["lambda_" + std::to_string(i)] = spectrum[i];
  sp.pass = true;
  sp.margin = 0.0;
  report += to_text(sp);

  ProbeReport comp;
  comp.name = "cloud-components";
  comp.measured["components"] = double(cloud.components);
  comp.pass = true;
  comp.margin = 0.0;
  report += to_text(comp);

  write_text(out / "report.txt", report);
  std::cout << "fourd done\n";
  return 0;
}

int run_radial(double alpha, int k, int n, const std::string& outdir) {
  RadialSolution sol = radial_homogeneous_solution(alpha, k, n);
  fs::path out(outdir);
  fs::create_directories(out);
  write_text(out / "report.txt", to_text(sol.report));
  std::cout << "mu=" << fmt_short(sol.mu) << " "
            << (sol.report.pass ? "pass" : "fail") << "\n";
  return 0;
}

int run_zerohom(int res, const std::string& outdir) {
  ZeroHomogeneous z = zero_homogeneous_counterexample(res);
  fs::path out(outdir);
  fs::create_directories(out);
  write_field(z.field, (out / "v.csv").string());
  write_text(out / "report.txt", to_text(z.report));
  std::cout << (z.report.pass ? "pass" : "fail") << "\n";
  return 0;
}

int run_norm_fixture(int n, int samples, unsigned long seed,
                     const std::string& outdir) {
  HomogeneousFunction u = norm_function(n);
  HedgehogCloud cloud = hedgehog_cloud(u, samples, seed);
  fs::path out(outdir);
  fs::create_directories(out);
  write_text(out / "cloud.csv", cloud.to_csv());
  write_text(out / "report.txt", to_text(normal_correspondence_check(cloud)));
  std::cout << "norm fixture done\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational minimizers and their regularity diagnostics"};
  app.require_subcommand(1);

  // solve
  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "minimize an integrand over the grid");
  solve->add_option("--lagrangian", sa.lagrangian, "integrand spec");
  solve->add_option("--bc", sa.bc, "boundary expression")->required();
  solve->add_option("--res", sa.res, "grid resolution (odd)");
  solve->add_option("--domain", sa.domain, "square|ball");
  solve->add_option("--p", sa.p, "p-laplace exponent");
  solve->add_option("--pvec", sa.pvec, "anisotropic exponents a,b");
  solve->add_option("--method", sa.method, "newton|gd");
  solve->add_option("--max-iters", sa.max_iters, "iteration budget");
  solve->add_option("--tol-residual", sa.tol_residual, "gradient stopping tol");
  solve->add_option("--tol-energy", sa.tol_energy, "relative energy tol");
  solve->add_option("--smoothing-eps", sa.smoothing_eps,
                    "initial smoothing (-1 = auto)");
  solve->add_option("--out", sa.out, "output directory");
  solve->add_option("--seed", sa.seed, "sampling seed");

  // probe
  ProbeArgs pa;
  auto* probe = app.add_subcommand("probe", "run diagnostics on a field file");
  probe->add_option("--in", pa.in, "input field CSV")->required();
  probe->add_option("--lagrangian", pa.lagrangian, "integrand spec");
  probe->add_option("--p", pa.p, "p-laplace exponent");
  probe->add_option("--pvec", pa.pvec, "anisotropic exponents");
  probe->add_option("--out", pa.out, "output directory");
  probe->add_option("--radii", pa.radii, "dyadic:K or list");
  probe->add_option("--center", pa.center, "probe center x,y");
  probe->add_option("--r", pa.r, "probe radius");
  probe->add_option("--rin", pa.rin, "cutoff inner radius");
  probe->add_option("--rout", pa.rout, "cutoff outer radius");
  probe->add_option("--cap", pa.cap, "l2linf ratio cap");
  probe->add_option("--seed", pa.seed, "sampling seed");
  probe->add_flag("--osc", pa.osc, "oscillation table");
  probe->add_flag("--holder", pa.holder, "oscillation-decay exponent fit");
  probe->add_flag("--caccioppoli", pa.caccioppoli, "energy bound audit");
  probe->add_flag("--courant-lebesgue", pa.courant, "circle oscillation bound");
  probe->add_flag("--maxprinciple", pa.maxprinciple, "interior maxima check");
  probe->add_flag("--l2linf", pa.l2linf, "sup vs L2 ratio");
  probe->add_flag("--harnack", pa.harnack, "sup/inf ratio on B_1/4");
  probe->add_flag("--energy-decay", pa.energy_decay_flag, "dyadic energy decay");
  probe->add_flag("--cloud", pa.cloud, "gradient image cloud");
  probe->add_option("--chop-line", pa.chop_line, "ex,ey,a[,gap]");
  probe->add_option("--chop-circle", pa.chop_circle, "qx,qy,rin,rout");

  // degiorgi
  auto* dg = app.add_subcommand("degiorgi", "iteration lemmas and profiles");
  dg->require_subcommand(1);
  double g_C = 2.0, g_delta = 1.0, g_a0 = 0.5;
  long g_k = 2000;
  std::string g_out = ".";
  auto* seq1 = dg->add_subcommand("seq1", "a_{k+1} = C^k a_k^{1+delta}");
  seq1->add_option("--C", g_C, "growth base")->required();
  seq1->add_option("--delta", g_delta, "superlinear exponent")->required();
  seq1->add_option("--a0", g_a0, "initial value")->required();
  seq1->add_option("--k", g_k, "horizon");
  seq1->add_option("--out", g_out, "output directory");

  double q_c = 0.1, q_a0 = 1.0;
  long q_k = 10000;
  std::string q_out = ".";
  auto* seq2 = dg->add_subcommand("seq2", "a_{k+1} = a_k - c a_k^2");
  seq2->add_option("--c", q_c, "quadratic damping")->required();
  seq2->add_option("--a0", q_a0, "initial value");
  seq2->add_option("--k", q_k, "horizon");
  seq2->add_option("--out", q_out, "output directory");

  std::string sw_c = "1.5,2,3", sw_delta = "0.5,1,2", sw_out = ".";
  long sw_k = 2000;
  auto* sweep = dg->add_subcommand("sweep", "threshold matrix over (C, delta)");
  sweep->add_option("--C-list", sw_c, "comma list of C values");
  sweep->add_option("--delta-list", sw_delta, "comma list of delta values");
  sweep->add_option("--k", sw_k, "horizon");
  sweep->add_option("--out", sw_out, "output directory");

  std::string pr_in, pr_form = "v", pr_heights, pr_out = ".";
  double pr_drop = 0.0;
  auto* prof = dg->add_subcommand("profile", "V/W level profiles of a field");
  prof->add_option("--in", pr_in, "input field CSV")->required();
  prof->add_option("--form", pr_form, "v|w");
  prof->add_option("--heights", pr_heights, "height list");
  prof->add_option("--drop", pr_drop, "oscillation-drop zero fraction");
  prof->add_option("--out", pr_out, "output directory");

  // hedgehog
  auto* hh = app.add_subcommand("hedgehog", "homogeneous-function fixtures");
  hh->require_subcommand(1);
  int h_samples = 2000, h_n = 2, h_k = 2, h_res = 65;
  unsigned long h_seed = 1;
  double h_cap = 1e6, h_alpha = 0.5, h_margin = 0.05;
  std::string h_proj = "0,2", h_out = ".";
  auto* fourd = hh->add_subcommand("fourd", "the 4d singular fixture");
  fourd->add_option("--samples", h_samples, "sphere sample count");
  fourd->add_option("--seed", h_seed, "sampling seed");
  fourd->add_option("--cap", h_cap, "eigenvalue ratio cap");
  fourd->add_option("--torus-margin", h_margin, "excluded |z1|-|z2| margin");
  fourd->add_option("--proj", h_proj, "projection coordinate pair i,j");
  fourd->add_option("--out", h_out, "output directory");

  auto* radial = hh->add_subcommand("radial", "|x|^alpha g divergence solutions");
  radial->add_option("--alpha", h_alpha, "homogeneity degree")->required();
  radial->add_option("--k", h_k, "sphere eigenfunction index")->required();
  radial->add_option("--n", h_n, "dimension (2 or 3)");
  radial->add_option("--out", h_out, "output directory");

  auto* zerohom = hh->add_subcommand("zerohom", "discontinuous H^1 fixture");
  zerohom->add_option("--res", h_res, "lattice resolution");
  zerohom->add_option("--out", h_out, "output directory");

  auto* norm_cmd = hh->add_subcommand("norm", "u = |x| fixture cloud");
  norm_cmd->add_option("--n", h_n, "dimension");
  norm_cmd->add_option("--samples", h_samples, "sphere sample count");
  norm_cmd->add_option("--seed", h_seed, "sampling seed");
  norm_cmd->add_option("--out", h_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(sa);
    if (*probe) return run_probe(pa);
    if (*seq1) return run_seq1(g_C, g_delta, g_a0, g_k, g_out);
    if (*seq2) return run_seq2(q_c, q_a0, q_k, q_out);
    if (*sweep) return run_sweep(sw_c, sw_delta, sw_k, sw_out);
    if (*prof) return run_profile(pr_in, pr_form, pr_heights, pr_drop, pr_out);
    if (*fourd) return run_fourd(h_samples, h_seed, h_cap, h_margin, h_proj, h_out);
    if (*radial) return run_radial(h_alpha, h_k, h_n, h_out);
    if (*zerohom) return run_zerohom(h_res, h_out);
    if (*norm_cmd) return run_norm_fixture(h_n, h_samples, h_seed, h_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
