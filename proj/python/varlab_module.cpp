// Python bindings for the core operations: integrand bundles, the energy
// solver, the regularity probes, the iteration lemmas and the
// homogeneous-function fixtures.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "varlab/degiorgi.hpp"
#include "varlab/expr.hpp"
#include "varlab/field.hpp"
#include "varlab/hedgehog.hpp"
#include "varlab/lagrangian.hpp"
#include "varlab/probe.hpp"
#include "varlab/solver.hpp"

namespace py = pybind11;
using namespace varlab;

namespace {

Vec to_vec(const std::vector<double>& xs) {
  if (xs.size() > (std::size_t)kMaxDim)
    throw Error(ErrorKind::invalid_parameter, "at most 4 components");
  Vec v((int)xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v[(int)i] = xs[i];
  return v;
}

std::vector<double> from_vec(const Vec& v) {
  std::vector<double> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

std::vector<std::vector<double>> from_mat(const SymMat& m) {
  std::vector<std::vector<double>> out(m.size(),
                                       std::vector<double>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) out[i][j] = m(i, j);
  return out;
}

py::dict report_dict(const ProbeReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["pass"] = r.pass;
  d["margin"] = r.margin;
  if (!r.note.empty()) d["note"] = r.note;
  py::dict m;
  for (const auto& [k, v] : r.measured) m[py::str(k)] = v;
  d["measured"] = m;
  return d;
}

Lagrangian build_lagrangian(const std::string& spec, int dim, double p,
                            const std::vector<double>& pvec) {
  BuiltinParams params;
  params.p = p;
  params.p_vec = pvec;
  return make_lagrangian(spec, dim, params);
}

}  // namespace

PYBIND11_MODULE(_varlab, m) {
  m.doc() = "variational minimizers and regularity diagnostics";

  py::register_exception<Error>(m, "VarlabError");

  // expressions
  m.def(
      "expr_eval",
      [](const std::string& src, const std::vector<double>& point) {
        return parse(src).eval(to_vec(point));
      },
      py::arg("src"), py::arg("point"));

  // integrand bundles
  py::class_<Lagrangian>(m, "Lagrangian")
      .def_readonly("dim", &Lagrangian::dim)
      .def_readonly("label", &Lagrangian::label)
      .def("value",
           [](const Lagrangian& F, const std::vector<double>& p) {
             return F.value_at(to_vec(p));
           })
      .def("grad",
           [](const Lagrangian& F, const std::vector<double>& p) {
             return from_vec(F.grad_at(to_vec(p)));
           })
      .def("hess",
           [](const Lagrangian& F, const std::vector<double>& p) {
             return from_mat(F.hess_at(to_vec(p)));
           })
      .def("degeneracy_distance",
           [](const Lagrangian& F, const std::vector<double>& p) {
             return F.degeneracy.distance_to(to_vec(p));
           });

  m.def("lagrangian", &build_lagrangian, py::arg("spec"), py::arg("dim") = 2,
        py::arg("p") = 2.0, py::arg("pvec") = std::vector<double>());

  m.def(
      "ellipticity_bounds",
      [](const Lagrangian& F, double radius, int samples, unsigned long seed) {
        EllipticityWindow w =
            ellipticity_bounds(F, {Vec::zero(F.dim), radius}, samples, seed);
        py::dict d;
        d["lambda_min"] = w.lambda_min;
        d["lambda_max"] = w.lambda_max;
        d["degenerate"] = w.degenerate;
        return d;
      },
      py::arg("F"), py::arg("radius") = 1.0, py::arg("samples") = 500,
      py::arg("seed") = 1);

  m.def(
      "legendre_1d",
      [](const std::function<double(double)>& H, double x) {
        return legendre_1d(H, x);
      },
      py::arg("H"), py::arg("x"));

  m.def(
      "convexity_audit",
      [](const Lagrangian& F, double half_width, int grid, unsigned long seed) {
        Vec lo(F.dim), hi(F.dim);
        for (int i = 0; i < F.dim; ++i) {
          lo[i] = -half_width;
          hi[i] = half_width;
        }
        return report_dict(convexity_audit(F, {lo, hi}, grid, seed));
      },
      py::arg("F"), py::arg("half_width") = 2.0, py::arg("grid") = 9,
      py::arg("seed") = 1);

  // fields
  py::class_<ScalarField>(m, "Field")
      .def_property_readonly(
          "res", [](const ScalarField& f) { return f.grid->res(); })
      .def_property_readonly(
          "dim", [](const ScalarField& f) { return f.grid->dim(); })
      .def_property_readonly("values",
                             [](const ScalarField& f) { return f.values; })
      .def("to_csv", [](const ScalarField& f) { return to_csv(f); });

  m.def(
      "field_sample",
      [](const std::string& expr_src, int res, const std::string& mask) {
        Expression e = parse(expr_src);
        GridPtr g =
            make_grid(2, res, mask == "ball" ? Mask::ball : Mask::square);
        return ScalarField::sample(
            g, [&e](const Vec& x) { return e.eval(x); });
      },
      py::arg("expr"), py::arg("res") = 65, py::arg("mask") = "square");

  m.def("field_from_csv", &field_from_csv, py::arg("text"));

  // solver
  m.def(
      "solve",
      [](const Lagrangian& F, const std::string& bc, int res,
         const std::string& domain, const std::string& method,
         double tol_residual, long max_iters, double smoothing_eps) {
        GridPtr grid =
            make_grid(2, res, domain == "ball" ? Mask::ball : Mask::square);
        BoundaryValues bv = trace_boundary(grid, parse(bc));
        SolveOptions opts;
        opts.tol_residual = tol_residual;
        opts.max_iters = max_iters;
        opts.smoothing_eps = smoothing_eps;
        opts.method = method == "gd" ? SolveMethod::gradient_descent
                                     : SolveMethod::newton_damped;
        auto [u, rep] = minimize(F, grid, bv, opts);
        py::dict d;
        d["converged"] = rep.converged;
        d["energy"] = rep.energy;
        d["residual"] = rep.residual;
        d["iterations"] = rep.iterations;
        return py::make_tuple(u, d);
      },
      py::arg("F"), py::arg("bc"), py::arg("res") = 65,
      py::arg("domain") = "square", py::arg("method") = "newton",
      py::arg("tol_residual") = 1e-8, py::arg("max_iters") = 200000,
      py::arg("smoothing_eps") = -1.0);

  m.def("energy", &energy, py::arg("F"), py::arg("u"));
  m.def("weak_residual", &weak_residual, py::arg("F"), py::arg("u"),
        py::arg("psi"));

  // probes
  m.def(
      "oscillation",
      [](const ScalarField& v, const std::vector<double>& center, double r) {
        return oscillation(v, to_vec(center), r);
      },
      py::arg("v"), py::arg("center"), py::arg("r"));

  m.def(
      "holder_fit",
      [](const ScalarField& v, int dyadic) {
        HolderFit fit =
            holder_fit(v, Vec::zero(v.grid->dim()), dyadic_radii(dyadic));
        py::dict d;
        d["alpha"] = fit.alpha;
        d["residual"] = fit.residual;
        d["constant"] = fit.constant;
        return d;
      },
      py::arg("v"), py::arg("dyadic") = 4);

  m.def(
      "caccioppoli",
      [](const Lagrangian& F, const ScalarField& u, double rin, double rout,
         int axis) {
        CoefficientField a = coefficient_field(F, u);
        VectorField gu = gradient(u);
        ScalarField v(u.grid);
        for (long idx = 0; idx < u.grid->node_count(); ++idx)
          v[idx] = u.grid->is_exterior(idx)
                       ? std::numeric_limits<double>::quiet_NaN()
                       : gu.at(idx)[axis];
        return report_dict(caccioppoli_audit(a, v, rin, rout));
      },
      py::arg("F"), py::arg("u"), py::arg("rin") = 0.5, py::arg("rout") = 1.0,
      py::arg("axis") = 0);

  m.def(
      "courant_lebesgue",
      [](const ScalarField& w, double r) {
        return report_dict(courant_lebesgue_check(w, r));
      },
      py::arg("w"), py::arg("r") = 0.125);

  m.def(
      "l2linf",
      [](const ScalarField& v, double cap) {
        return report_dict(l2_linf_check(v, cap));
      },
      py::arg("v"), py::arg("cap") = 10.0);

  m.def("harnack_ratio", &harnack_ratio, py::arg("v"));

  m.def(
      "gradient_cloud",
      [](const ScalarField& u, const std::vector<double>& center, double r) {
        GradientCloud c = gradient_cloud(u, to_vec(center), r);
        py::dict d;
        std::vector<std::vector<double>> pts;
        for (const Vec& p : c.points) pts.push_back(from_vec(p));
        d["points"] = pts;
        d["diameter"] = c.diameter;
        return d;
      },
      py::arg("u"), py::arg("center"), py::arg("r"));

  m.def(
      "chop_line",
      [](const std::vector<std::vector<double>>& pts,
         const std::vector<double>& e, double a, double gap) {
        std::vector<Vec> vp;
        for (const auto& p : pts) vp.push_back(to_vec(p));
        return to_string(chop_halfplane(cloud_from_points(vp), to_vec(e), a, gap));
      },
      py::arg("points"), py::arg("e"), py::arg("a"), py::arg("gap"));

  m.def(
      "chop_circle",
      [](const std::vector<std::vector<double>>& pts,
         const std::vector<double>& q, double rin, double rout) {
        std::vector<Vec> vp;
        for (const auto& p : pts) vp.push_back(to_vec(p));
        return to_string(chop_circle(cloud_from_points(vp), to_vec(q), rin, rout));
      },
      py::arg("points"), py::arg("q"), py::arg("rin"), py::arg("rout"));

  m.def(
      "eta_audit",
      [](double M, double rho0, int n) {
        return report_dict(eta_subsolution_audit(M, rho0, n));
      },
      py::arg("M"), py::arg("rho0") = 0.25, py::arg("n") = 2);

  // iteration lemmas and profiles
  m.def(
      "seq_geometric",
      [](double C, double delta, double a0, long kmax) {
        IterationTrace tr = seq_lemma_geometric(C, delta, a0, kmax);
        py::dict d;
        d["verdict"] = to_string(tr.verdict);
        d["threshold_a0"] = tr.threshold_a0;
        d["trace"] = tr.a;
        return d;
      },
      py::arg("C"), py::arg("delta"), py::arg("a0"), py::arg("kmax") = 2000);

  m.def(
      "seq_quadratic",
      [](double c, double a0, long kmax) {
        IterationTrace tr = seq_lemma_quadratic(c, a0, kmax);
        py::dict d;
        d["verdict"] = to_string(tr.verdict);
        d["trace_tail"] = tr.a.back();
        return d;
      },
      py::arg("c"), py::arg("a0") = 1.0, py::arg("kmax") = 10000);

  m.def(
      "v_profile",
      [](const ScalarField& v, const std::vector<double>& s, int n) {
        LevelProfile p = v_profile(v, s);
        py::dict d;
        d["heights"] = p.heights;
        d["values"] = p.values;
        d["audit"] = report_dict(scaling_class_audit(p, n));
        return d;
      },
      py::arg("v"), py::arg("s"), py::arg("n") = 2);

  m.def(
      "w_profile",
      [](const ScalarField& v, const std::vector<double>& s) {
        MeasureLemma ml = measure_profile(v, s);
        py::dict d;
        d["heights"] = ml.profile.heights;
        d["values"] = ml.profile.values;
        d["largest_c"] = ml.largest_c;
        return d;
      },
      py::arg("v"), py::arg("s"));

  m.def(
      "oscillation_drop",
      [](const ScalarField& v, double delta_frac) {
        return report_dict(oscillation_drop(v, delta_frac));
      },
      py::arg("v"), py::arg("delta_frac"));

  m.def("truncate_plus", &truncate_plus, py::arg("v"), py::arg("kappa"));

  // homogeneous fixtures
  m.def("fourd_value", [](const std::vector<double>& x) {
    return fourD_example()(to_vec(x));
  });
  m.def("fourd_spectrum", [](const std::vector<double>& x) {
    return from_vec(hessian_spectrum(fourD_example(), to_vec(x)));
  });
  m.def(
      "fourd_normal_correspondence",
      [](int samples, unsigned long seed, double margin) {
        HomogeneousFunction u = fourD_example();
        auto keep = [margin](const Vec& x) {
          double a = std::sqrt(x[0] * x[0] + x[1] * x[1]);
          double b = std::sqrt(x[2] * x[2] + x[3] * x[3]);
          return std::abs(a - b) >= margin;
        };
        HedgehogCloud cloud =
            hedgehog_cloud(u, sphere_samples(4, samples, seed, keep));
        return report_dict(normal_correspondence_check(cloud));
      },
      py::arg("samples") = 2000, py::arg("seed") = 1, py::arg("margin") = 0.05);

  m.def(
      "radial_solution",
      [](double alpha, int k, int n) {
        RadialSolution sol = radial_homogeneous_solution(alpha, k, n);
        py::dict d;
        d["mu"] = sol.mu;
        d["lambda_g"] = sol.lambda_g;
        d["report"] = report_dict(sol.report);
        return d;
      },
      py::arg("alpha"), py::arg("k"), py::arg("n") = 2);

  m.def(
      "zero_homogeneous",
      [](int res) {
        ZeroHomogeneous z = zero_homogeneous_counterexample(res);
        return report_dict(z.report);
      },
      py::arg("res") = 65);
}
