#include "varlab/degiorgi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varlab/numfmt.hpp"

namespace varlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLnTiny = -690.77552789821368;  // ln 1e-300
constexpr double kLnHuge = 690.77552789821368;   // ln 1e300
}  // namespace

ScalarField truncate_plus(const ScalarField& v, double kappa) {
  ScalarField out = v;
  for (long idx = 0; idx < v.grid->node_count(); ++idx)
    if (!v.grid->is_exterior(idx))
      out[idx] = std::max(v[idx] - kappa, 0.0);
  return out;
}

LevelProfile v_profile(const ScalarField& v, const std::vector<double>& s) {
  const Grid& g = *v.grid;
  const double cell = std::pow(2.0 * g.h(), g.dim());  // radius-2 reading
  LevelProfile p;
  p.form = 'V';
  for (double height : s) {
    if (height < 0.0 || height > 1.0)
      throw Error(ErrorKind::invalid_parameter, "heights must lie in [0,1]");
    double grid_radius = (2.0 - height) / 2.0;
    auto nodes = g.ball_nodes(Vec(g.dim()), grid_radius);
    if (nodes.size() < 25)
      throw Error(ErrorKind::insufficient_resolution, "ball not resolved");
    double total = 0.0;
    for (long idx : nodes) {
      double t = std::max(v[idx] - height, 0.0);
      total += cell * t * t;
    }
    p.heights.push_back(height);
    p.values.push_back(total);
  }
  return p;
}

ProbeReport scaling_class_audit(const LevelProfile& profile, int n) {
  ProbeReport rep;
  rep.name = "scaling-class";
  const double expo = 2.0 + 4.0 / n;
  const double power = 1.0 + 2.0 / n;

  double C = 0.0;
  bool impossible = false;
  for (std::size_t i = 0; i < profile.heights.size(); ++i) {
    for (std::size_t j = i + 1; j < profile.heights.size(); ++j) {
      double tau = profile.heights[i], kappa = profile.heights[j];
      if (!(tau < kappa)) continue;
      double vt = profile.values[i], vk = profile.values[j];
      if (vt <= 0.0) {
        if (vk > 0.0) impossible = true;  // no finite constant works
        continue;
      }
      C = std::max(C, vk * std::pow(kappa - tau, expo) / std::pow(vt, power));
    }
  }
  rep.measured["C"] = impossible ? kInf : C;
  rep.set_margin(impossible ? -1.0 : 1.0);
  if (impossible) rep.note = "V(tau)=0 with V(kappa)>0; not a subsolution profile";
  return rep;
}

MeasureLemma measure_profile(const ScalarField& v, const std::vector<double>& s) {
  const Grid& g = *v.grid;
  auto nodes = g.ball_nodes(Vec(g.dim()), 1.0);
  if (nodes.empty())
    throw Error(ErrorKind::insufficient_resolution, "empty unit ball");

  MeasureLemma out;
  out.profile.form = 'W';
  for (double height : s) {
    long count = 0;
    for (long idx : nodes)
      if (v[idx] <= height) ++count;
    out.profile.heights.push_back(height);
    out.profile.values.push_back(double(count) / double(nodes.size()));
  }

  // Largest c with W(s)(1 + c (t-s)^2/(1-s)^2 W(s)(1-W(t))^2) <= W(t)
  // across the sampled pairs; pairs with an idle bound impose nothing.
  double c = kInf;
  const auto& H = out.profile.heights;
  const auto& W = out.profile.values;
  for (std::size_t i = 0; i < H.size(); ++i)
    for (std::size_t j = i + 1; j < H.size(); ++j) {
      double sH = H[i], tH = H[j];
      if (!(sH < tH) || sH >= 1.0) continue;
      double ws = W[i], wt = W[j];
      double denom = ws * ws * (1.0 - wt) * (1.0 - wt) * (tH - sH) * (tH - sH) /
                     ((1.0 - sH) * (1.0 - sH));
      if (denom <= 0.0) continue;
      c = std::min(c, (wt - ws) / denom);
    }
  out.largest_c = c;
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::converges_to_zero: return "converges-to-zero";
    case Verdict::bound_satisfied: return "bound-satisfied";
    case Verdict::diverges: return "diverges";
  }
  return "?";
}

namespace {

// Log-domain run of the geometric recurrence; fills the trace (saturating
// exp) and returns the verdict.
Verdict run_geometric(double C, double delta, double a0, long kmax,
                      std::vector<double>* trace) {
  if (a0 < 0.0 || C <= 0.0 || delta <= 0.0)
    throw Error(ErrorKind::invalid_parameter, "need C > 0, delta > 0, a0 >= 0");
  if (trace) trace->push_back(a0);
  if (a0 == 0.0) return Verdict::converges_to_zero;

  const double lnC = std::log(C);
  double L = std::log(a0);
  double last_ratio = 0.0;
  for (long k = 0; k < kmax; ++k) {
    double next = (1.0 + delta) * L + double(k) * lnC;
    last_ratio = next - L;
    L = next;
    if (trace) trace->push_back(std::exp(std::clamp(L, -745.0, 710.0)));
    if (L <= kLnTiny) return Verdict::converges_to_zero;
    if (L >= kLnHuge) return Verdict::diverges;
  }
  // horizon: a final negative log-ratio certifies a decreasing tail
  return last_ratio < 0.0 ? Verdict::converges_to_zero : Verdict::diverges;
}

}  // namespace

IterationTrace seq_lemma_geometric(double C, double delta, double a0, long kmax) {
  if (kmax < 1)
    throw Error(ErrorKind::invalid_parameter, "kmax must be >= 1");
  IterationTrace tr;
  tr.verdict = run_geometric(C, delta, a0, kmax, &tr.a);
  tr.threshold_a0 = seq_geometric_threshold(C, delta, kmax);
  return tr;
}

double seq_geometric_threshold(double C, double delta, long kmax) {
  auto converges = [&](double a0) {
    return run_geometric(C, delta, a0, kmax, nullptr) ==
           Verdict::converges_to_zero;
  };
  double hi = 1.0;
  int expansions = 0;
  while (converges(hi)) {
    hi *= 2.0;
    if (++expansions > 80) return kInf;
  }
  double lo = 0.0;
  while (hi - lo > 1e-6 * std::max(1.0, lo)) {
    double mid = 0.5 * (lo + hi);
    (converges(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

IterationTrace seq_lemma_quadratic(double c, double a0, long kmax) {
  if (!(c > 0.0 && c <= 0.5))
    throw Error(ErrorKind::invalid_parameter, "need c in (0, 1/2]");
  if (!(a0 >= 0.0 && a0 <= 1.0))
    throw Error(ErrorKind::invalid_parameter, "need a0 in [0, 1]");
  if (kmax < 1)
    throw Error(ErrorKind::invalid_parameter, "kmax must be >= 1");

  IterationTrace tr;
  tr.verdict = Verdict::bound_satisfied;
  double a = a0;
  tr.a.push_back(a);
  for (long k = 1; k <= kmax; ++k) {
    a = a - c * a * a;
    tr.a.push_back(a);
    if (!(a <= 1.0 / (1.0 + c * double(k)))) {
      tr.verdict = Verdict::diverges;
      break;
    }
  }
  return tr;
}

ProbeReport oscillation_drop(const ScalarField& v, double delta_frac) {
  const Grid& g = *v.grid;
  auto b1 = g.ball_nodes(Vec(g.dim()), 1.0);
  if (b1.empty())
    throw Error(ErrorKind::insufficient_resolution, "empty unit ball");

  long zero_count = 0;
  double sup_plus = 0.0;
  for (long idx : b1) {
    if (v[idx] <= 0.0) ++zero_count;
    sup_plus = std::max(sup_plus, v[idx]);
  }
  double zero_frac = double(zero_count) / double(b1.size());
  if (zero_frac < delta_frac)
    throw Error(ErrorKind::not_applicable,
                "zero set covers " + fmt_short(zero_frac) +
                    " of B_1, need " + fmt_short(delta_frac));
  if (!(sup_plus > 0.0))
    throw Error(ErrorKind::not_applicable, "sup of v_+ vanishes on B_1");

  double sup_half = -kInf;
  for (long idx : g.ball_nodes(Vec(g.dim()), 0.5))
    sup_half = std::max(sup_half, v[idx]);

  double rho = sup_half / sup_plus;
  ProbeReport rep;
  rep.name = "oscillation-drop";
  rep.measured["zero_fraction"] = zero_frac;
  rep.measured["sup_b1_plus"] = sup_plus;
  rep.measured["sup_bhalf"] = sup_half;
  rep.measured["rho"] = rho;
  rep.set_margin(1.0 - 1e-3 - rho);
  return rep;
}

std::string IterationTrace::to_csv() const {
  std::string out = "k,a\n";
  for (std::size_t k = 0; k < a.size(); ++k)
    out += std::to_string(k) + "," + fmt_full(a[k]) + "\n";
  return out;
}

std::string profile_to_csv(const LevelProfile& p) {
  std::string out = std::string("s,") + (p.form == 'V' ? "V" : "W") + "\n";
  for (std::size_t i = 0; i < p.heights.size(); ++i)
    out += fmt_full(p.heights[i]) + "," + fmt_full(p.values[i]) + "\n";
  return out;
}

}  // namespace varlab
