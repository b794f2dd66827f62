#include "varlab/hedgehog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>

#include "varlab/fd.hpp"
#include "varlab/numfmt.hpp"

namespace varlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNeighbors = 12;
}  // namespace

double HomogeneousFunction::operator()(const Vec& x) const {
  if (value) return value(x);
  double r = x.norm();
  if (r == 0.0) return 0.0;
  return std::pow(r, degree) * sphere_trace(x * (1.0 / r));
}

HomogeneousJet eval_homogeneous(const HomogeneousFunction& f, const Vec& x) {
  double r = x.norm();
  if (r == 0.0)
    throw Error(ErrorKind::singular_point, "evaluation at the origin");
  auto fn = [&f](const Vec& p) { return f(p); };
  HomogeneousJet jet;
  jet.value = f(x);
  const double step = 1e-4 * r;
  jet.gradient = fd_gradient(fn, x, step);
  jet.hessian = fd_hessian(fn, x, step);
  return jet;
}

Vec homogeneous_gradient(const HomogeneousFunction& f, const Vec& x) {
  double r = x.norm();
  if (r == 0.0)
    throw Error(ErrorKind::singular_point, "evaluation at the origin");
  auto fn = [&f](const Vec& p) { return f(p); };
  return fd_gradient(fn, x, 1e-4 * r);
}

HomogeneousFunction fourD_example() {
  HomogeneousFunction f;
  f.dim = 4;
  f.degree = 1.0;
  f.label = "fourd";
  f.value = [](const Vec& x) {
    double a = x[0] * x[0] + x[1] * x[1];
    double b = x[2] * x[2] + x[3] * x[3];
    double r = std::sqrt(a + b);
    if (r == 0.0) return 0.0;
    return (a - b) / r;
  };
  f.sphere_trace = [](const Vec& x) {
    return x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
  };
  return f;
}

HomogeneousFunction norm_function(int dim) {
  HomogeneousFunction f;
  f.dim = dim;
  f.degree = 1.0;
  f.label = "norm";
  f.sphere_trace = [](const Vec&) { return 1.0; };
  f.value = [](const Vec& x) { return x.norm(); };
  return f;
}

HomogeneousFunction linear_function(const Vec& e) {
  HomogeneousFunction f;
  f.dim = e.size();
  f.degree = 1.0;
  f.label = "linear";
  Vec dir = e;
  f.sphere_trace = [dir](const Vec& x) { return dir.dot(x); };
  f.value = [dir](const Vec& x) { return dir.dot(x); };
  return f;
}

HomogeneousFunction perturbed_circle(double amp, int k) {
  HomogeneousFunction f;
  f.dim = 2;
  f.degree = 1.0;
  f.label = "perturbed-circle";
  f.sphere_trace = [amp, k](const Vec& x) {
    return 1.0 + amp * std::cos(k * std::atan2(x[1], x[0]));
  };
  return f;
}

HomogeneousFunction homogeneous_from_trace(int dim, double degree,
                                           std::function<double(const Vec&)> g,
                                           std::string label) {
  HomogeneousFunction f;
  f.dim = dim;
  f.degree = degree;
  f.label = std::move(label);
  f.sphere_trace = std::move(g);
  return f;
}

Vec hessian_spectrum(const HomogeneousFunction& f, const Vec& x) {
  return sym_eigenvalues(eval_homogeneous(f, x).hessian);
}

ProbeReport elliptic_solvability_check(const HomogeneousFunction& f,
                                       const std::vector<Vec>& samples,
                                       double ratio_cap) {
  ProbeReport rep;
  rep.name = "elliptic-solvability";
  double worst_ratio = 0.0;
  long mixed = 0;
  for (const Vec& x : samples) {
    HomogeneousJet jet = eval_homogeneous(f, x);
    Vec ev = sym_eigenvalues(jet.hessian);
    std::vector<double> vals;
    for (int i = 0; i < f.dim; ++i) vals.push_back(ev[i]);
    if (f.degree == 1.0) {
      // Euler: the radial direction is a null eigenvector; drop the
      // eigenvalue closest to zero.
      std::size_t drop = 0;
      for (std::size_t i = 1; i < vals.size(); ++i)
        if (std::abs(vals[i]) < std::abs(vals[drop])) drop = i;
      vals.erase(vals.begin() + drop);
    }
    double pos = 0.0, neg = 0.0;
    for (double v : vals) {
      if (v > 0.0) pos = std::max(pos, v);
      if (v < 0.0) neg = std::max(neg, -v);
    }
    if (pos == 0.0 || neg == 0.0) {
      rep.measured["mixed_fraction"] =
          double(mixed) / double(std::max<std::size_t>(samples.size(), 1));
      rep.measured["worst_ratio"] = kInf;
      rep.set_margin(-1.0);
      rep.note = "one-signed non-radial spectrum at a sample";
      return rep;
    }
    ++mixed;
    worst_ratio = std::max(worst_ratio, std::max(pos / neg, neg / pos));
  }
  rep.measured["mixed_fraction"] = 1.0;
  rep.measured["worst_ratio"] = worst_ratio;
  rep.measured["ratio_cap"] = ratio_cap;
  rep.set_margin(ratio_cap - worst_ratio);
  return rep;
}

std::vector<Vec> sphere_samples(int dim, int count, unsigned long seed,
                                const std::function<bool(const Vec&)>& keep) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  long guard = 0;
  while ((int)out.size() < count) {
    if (++guard > 1000L * count + 1000)
      throw Error(ErrorKind::invalid_parameter,
                  "sphere sampling filter rejects almost everything");
    Vec x(dim);
    for (int k = 0; k < dim; ++k) x[k] = gauss(rng);
    double r = x.norm();
    if (r < 1e-12) continue;
    x *= 1.0 / r;
    if (keep && !keep(x)) continue;
    out.push_back(x);
  }
  return out;
}

namespace {

std::vector<int> nearest_neighbors(const std::vector<Vec>& pts, int self,
                                   int k) {
  std::vector<std::pair<double, int>> dist;
  dist.reserve(pts.size());
  for (int j = 0; j < (int)pts.size(); ++j) {
    if (j == self) continue;
    dist.push_back({(pts[self] - pts[j]).norm2(), j});
  }
  int take = std::min<int>(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + take, dist.end());
  std::vector<int> out;
  for (int i = 0; i < take; ++i) out.push_back(dist[i].second);
  return out;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

HedgehogCloud hedgehog_cloud(const HomogeneousFunction& f,
                             const std::vector<Vec>& samples) {
  if ((int)samples.size() < 10 * f.dim * f.dim)
    throw Error(ErrorKind::invalid_parameter,
                "need at least 10 n^2 sphere samples");

  HedgehogCloud cloud;
  cloud.points = samples;
  cloud.images.reserve(samples.size());
  for (const Vec& x : samples)
    cloud.images.push_back(homogeneous_gradient(f, x));

  const int m = (int)samples.size();
  cloud.normals.assign(m, Vec(f.dim));
  cloud.singular.assign(m, 0);
  std::vector<double> residual(m, 0.0);
  std::vector<std::vector<int>> nbrs(m);

  // Singularity is judged on the 12 nearest *cloud* neighbors: where the
  // surface folds (sheets meeting), the neighborhood goes thick and the
  // plane-fit residual jumps past the 10x-median flag. The normal itself
  // is fitted on a locally generated image patch of radius 1e-2, because
  // the 12th global neighbor sits at distance ~0.3 on clouds of a few
  // thousand samples and no plane fit at that patch size on a
  // curvature-one surface resolves the normal to the 1e-3 alignment
  // scale.
  const double patch_radius = 1e-2;
  for (int i = 0; i < m; ++i) {
    nbrs[i] = nearest_neighbors(cloud.images, i, kNeighbors);

    // fold detector on the global neighborhood
    {
      Vec mean(f.dim);
      for (int j : nbrs[i]) mean += cloud.images[j];
      mean *= 1.0 / double(nbrs[i].size());
      double spread = 0.0;
      SymMat cov(f.dim);
      for (int j : nbrs[i]) {
        Vec d = cloud.images[j] - mean;
        spread = std::max(spread, d.norm());
        for (int a = 0; a < f.dim; ++a)
          for (int b = a; b < f.dim; ++b) cov(a, b) += d[a] * d[b];
      }
      if (spread < 1e-9 * (1.0 + cloud.images[i].norm())) {
        cloud.singular[i] = 1;  // collapsed neighborhood, no tangent plane
        residual[i] = kInf;
        continue;
      }
      Vec ev = sym_eigenvalues(cov);
      double total = 0.0;
      for (int a = 0; a < f.dim; ++a) total += std::max(ev[a], 0.0);
      residual[i] =
          total > 0.0 ? std::sqrt(std::max(ev[0], 0.0) / total) : kInf;
    }

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (std::uint64_t)i);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Vec> patch;
    patch.reserve(kNeighbors);
    for (int j = 0; j < kNeighbors; ++j) {
      Vec t(f.dim);
      for (int a = 0; a < f.dim; ++a) t[a] = unit(rng) * patch_radius;
      t -= samples[i] * t.dot(samples[i]);  // tangent to the sphere
      patch.push_back(homogeneous_gradient(f, normalized(samples[i] + t)));
    }

    Vec mean(f.dim);
    for (const Vec& p : patch) mean += p;
    mean *= 1.0 / double(patch.size());

    double spread = 0.0;
    SymMat cov(f.dim);
    for (const Vec& p : patch) {
      Vec d = p - mean;
      spread = std::max(spread, d.norm());
      for (int a = 0; a < f.dim; ++a)
        for (int b = a; b < f.dim; ++b) cov(a, b) += d[a] * d[b];
    }
    if (spread < 1e-9 * (1.0 + cloud.images[i].norm())) {
      cloud.singular[i] = 1;  // collapsed patch, no tangent plane
      residual[i] = kInf;
      continue;
    }
    EigenSystem es = sym_eigensystem(cov);
    cloud.normals[i] = es.vectors[0];

    // absorb the linear term of a quadratic height fit; this removes the
    // curvature tilt the raw plane fit picks up from patch asymmetry
    const int nt = f.dim - 1;
    const int cols = nt + nt * (nt + 1) / 2;
    if ((int)patch.size() >= cols + 1) {
      std::vector<Vec> frame;
      for (int axis = 0; axis < f.dim && (int)frame.size() < nt; ++axis) {
        Vec t(f.dim);
        t[axis] = 1.0;
        t -= cloud.normals[i] * t.dot(cloud.normals[i]);
        for (const Vec& q : frame) t -= q * t.dot(q);
        if (t.norm() > 1e-8) frame.push_back(normalized(t));
      }
      if ((int)frame.size() == nt) {
        std::vector<double> ata(cols * cols, 0.0), atb(cols, 0.0);
        for (const Vec& p : patch) {
          Vec d = p - cloud.images[i];
          double height = d.dot(cloud.normals[i]);
          std::vector<double> xi(nt);
          for (int a = 0; a < nt; ++a) xi[a] = d.dot(frame[a]);
          std::vector<double> row(cols, 0.0);
          for (int a = 0; a < nt; ++a) row[a] = xi[a];
          int c = nt;
          for (int a = 0; a < nt; ++a)
            for (int b = a; b < nt; ++b)
              row[c++] = (a == b ? 0.5 : 1.0) * xi[a] * xi[b];
          for (int r = 0; r < cols; ++r) {
            atb[r] += row[r] * height;
            for (int cidx = 0; cidx < cols; ++cidx)
              ata[r * cols + cidx] += row[r] * row[cidx];
          }
        }
        try {
          std::vector<double> sol = solve_dense(ata, atb, cols);
          Vec corrected = cloud.normals[i];
          for (int a = 0; a < nt; ++a) corrected -= sol[a] * frame[a];
          cloud.normals[i] = normalized(corrected);
        } catch (const Error&) {
          // singular fit; keep the plain plane normal
        }
      }
    }
  }

  std::vector<double> finite;
  for (double r : residual)
    if (std::isfinite(r)) finite.push_back(r);
  if (!finite.empty()) {
    std::nth_element(finite.begin(), finite.begin() + finite.size() / 2,
                     finite.end());
    double median = finite[finite.size() / 2];
    for (int i = 0; i < m; ++i)
      if (!std::isfinite(residual[i]) || residual[i] > 10.0 * median)
        cloud.singular[i] = 1;
  }

  // connected components of the k-NN graph over the regular points
  DisjointSet ds(m);
  for (int i = 0; i < m; ++i) {
    if (cloud.singular[i]) continue;
    for (int j : nbrs[i])
      if (!cloud.singular[j]) ds.unite(i, j);
  }
  std::vector<int> roots;
  for (int i = 0; i < m; ++i) {
    if (cloud.singular[i]) continue;
    int r = ds.find(i);
    if (std::find(roots.begin(), roots.end(), r) == roots.end())
      roots.push_back(r);
  }
  cloud.components = (int)roots.size();
  return cloud;
}

HedgehogCloud hedgehog_cloud(const HomogeneousFunction& f, int sample_count,
                             unsigned long seed) {
  return hedgehog_cloud(f, sphere_samples(f.dim, sample_count, seed));
}

ProbeReport normal_correspondence_check(const HedgehogCloud& cloud) {
  std::vector<int> regular;
  for (int i = 0; i < (int)cloud.points.size(); ++i)
    if (!cloud.singular[i]) regular.push_back(i);
  if (regular.size() < 100)
    throw Error(ErrorKind::not_applicable,
                "fewer than 100 regular points in the cloud");

  // normals from the tangent fit are sign-ambiguous; a majority vote per
  // cloud fixes the orientation before scoring
  double vote = 0.0;
  for (int i : regular) vote += cloud.normals[i].dot(cloud.points[i]);
  double sign = vote >= 0.0 ? 1.0 : -1.0;

  long passing = 0;
  double worst = 1.0;
  for (int i : regular) {
    double score = sign * cloud.normals[i].dot(cloud.points[i]);
    score = std::abs(score);
    worst = std::min(worst, score);
    if (score >= 1.0 - 1e-3) ++passing;
  }
  double fraction = double(passing) / double(regular.size());

  ProbeReport rep;
  rep.name = "normal-correspondence";
  rep.measured["regular_points"] = double(regular.size());
  rep.measured["fraction_aligned"] = fraction;
  rep.measured["worst_alignment"] = worst;
  rep.set_margin(fraction - 0.99);
  return rep;
}

ProbeReport second_form_check(const HomogeneousFunction& f, const Vec& x) {
  const int n = f.dim;
  HomogeneousJet jet = eval_homogeneous(f, normalized(x));
  EigenSystem es = sym_eigensystem(jet.hessian);

  // tangential pseudo-inverse: drop the radial null eigenvalue, invert
  // the rest; all of them must clear 1e-4
  Vec xhat = normalized(x);
  int radial = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double align = std::abs(es.vectors[i].dot(xhat));
    if (align > best) {
      best = align;
      radial = i;
    }
  }
  for (int i = 0; i < n; ++i)
    if (i != radial && std::abs(es.values[i]) < 1e-4)
      throw Error(ErrorKind::not_applicable,
                  "degenerate non-radial Hessian spectrum");

  // orthonormal tangent frame at x
  std::vector<Vec> frame;
  for (int axis = 0; axis < n && (int)frame.size() < n - 1; ++axis) {
    Vec t(n);
    t[axis] = 1.0;
    t -= xhat * t.dot(xhat);
    for (const Vec& u : frame) t -= u * t.dot(u);
    if (t.norm() > 1e-8) frame.push_back(normalized(t));
  }

  // sample the image patch over tangent offsets of size <= 1e-2
  const double rho = 1e-2;
  Vec p0 = homogeneous_gradient(f, xhat);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int m = 30 * n;

  // unknowns: linear terms b (n-1) then packed upper-triangle Q
  const int nt = n - 1;
  const int nq = nt * (nt + 1) / 2;
  const int cols = nt + nq;
  std::vector<double> ata(cols * cols, 0.0), atb(cols, 0.0);

  for (int s = 0; s < m; ++s) {
    Vec t(n);
    for (int a = 0; a < nt; ++a) {
      double c = unit(rng) * rho;
      t += frame[a] * c;
    }
    Vec xs = normalized(xhat + t);
    Vec ps = homogeneous_gradient(f, xs);
    Vec d = ps - p0;
    double height = d.dot(xhat);
    std::vector<double> xi(nt);
    for (int a = 0; a < nt; ++a) xi[a] = d.dot(frame[a]);

    std::vector<double> row(cols, 0.0);
    for (int a = 0; a < nt; ++a) row[a] = xi[a];
    int c = nt;
    for (int a = 0; a < nt; ++a)
      for (int b = a; b < nt; ++b)
        row[c++] = (a == b ? 0.5 : 1.0) * xi[a] * xi[b];
    for (int i = 0; i < cols; ++i) {
      atb[i] += row[i] * height;
      for (int j = 0; j < cols; ++j) ata[i * cols + j] += row[i] * row[j];
    }
  }
  std::vector<double> sol = solve_dense(ata, atb, cols);

  // measured second form: height = -1/2 xi^T II xi along +x
  SymMat II(nt);
  {
    int c = nt;
    for (int a = 0; a < nt; ++a)
      for (int b = a; b < nt; ++b) II(a, b) = -sol[c++];
  }

  // reference: tangential pseudo-inverse of D^2 u in the same frame
  SymMat ref(nt);
  for (int a = 0; a < nt; ++a)
    for (int b = a; b < nt; ++b) {
      double s = 0.0;
      for (int e = 0; e < n; ++e) {
        if (e == radial) continue;
        s += es.vectors[e].dot(frame[a]) * es.vectors[e].dot(frame[b]) /
             es.values[e];
      }
      ref(a, b) = s;
    }

  double err = 0.0, scale = ref.frobenius();
  {
    SymMat diff = II;
    diff += -1.0 * ref;
    err = diff.frobenius();
  }
  double rel = scale > 0.0 ? err / scale : kInf;

  ProbeReport rep;
  rep.name = "second-form";
  rep.measured["rel_error"] = rel;
  rep.measured["ref_norm"] = scale;
  rep.measured["fit_norm"] = II.frobenius();
  rep.set_margin(0.05 - rel);
  return rep;
}

namespace {

// Legendre polynomial P_k
double legendre_poly(int k, double t) {
  if (k == 0) return 1.0;
  if (k == 1) return t;
  double pm = 1.0, p = t;
  for (int i = 2; i <= k; ++i) {
    double next = ((2.0 * i - 1.0) * t * p - (i - 1.0) * pm) / double(i);
    pm = p;
    p = next;
  }
  return p;
}

}  // namespace

RadialSolution radial_homogeneous_solution(double alpha, int k, int n,
                                           unsigned long seed) {
  if (!(alpha > 0.0))
    throw Error(ErrorKind::invalid_parameter, "alpha must be > 0");
  if (k < 1)
    throw Error(ErrorKind::invalid_parameter, "k must be >= 1");
  if (n != 2 && n != 3)
    throw Error(ErrorKind::invalid_parameter, "builtins cover n = 2 and n = 3");
  double denom = alpha * (alpha + n - 2.0);
  if (denom == 0.0)
    throw Error(ErrorKind::invalid_parameter, "alpha(alpha+n-2) must not vanish");

  RadialSolution out;
  out.lambda_g = (n == 2) ? double(k) * k : double(k) * (k + 1.0);
  out.mu = out.lambda_g / denom - 1.0;
  if (out.mu <= -1.0)
    throw Error(ErrorKind::not_elliptic, "mu <= -1");

  std::function<double(const Vec&)> trace;
  if (n == 2) {
    trace = [k](const Vec& x) { return std::cos(k * std::atan2(x[1], x[0])); };
  } else {
    trace = [k](const Vec& x) { return legendre_poly(k, x[2]); };
  }
  out.u = homogeneous_from_trace(n, alpha, trace, "radial");

  // flux-form residual div(a grad u) at seeded annulus samples; the
  // outer difference uses step 1e-3 |x| on G = a grad u, the gradient
  // inside uses the household 1e-4 |x| step
  const double mu = out.mu;
  const HomogeneousFunction& u = out.u;
  auto flux = [&u, mu, n](const Vec& x) {
    Vec g = homogeneous_gradient(u, x);
    Vec xhat = normalized(x);
    return g + xhat * (mu * xhat.dot(g));
  };

  double worst = 0.0;
  double scale = 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int samples = 200;
  for (int s = 0; s < samples; ++s) {
    double r = 0.25 + 0.5 * u01(rng);
    Vec dir(n);
    for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
    dir = normalized(dir);
    Vec x = r * dir;

    double h = 1e-3 * r;
    double div = 0.0;
    for (int axis = 0; axis < n; ++axis) {
      Vec xp = x, xm = x;
      xp[axis] += h;
      xm[axis] -= h;
      div += (flux(xp)[axis] - flux(xm)[axis]) / (2.0 * h);
    }
    worst = std::max(worst, std::abs(div));

    SymMat hess = eval_homogeneous(u, x).hessian;
    scale = std::max(scale, (1.0 + std::abs(mu)) * hess.frobenius());
  }
  double rel = worst / scale;

  ProbeReport rep;
  rep.name = "radial-homogeneous";
  rep.measured["alpha"] = alpha;
  rep.measured["k"] = double(k);
  rep.measured["lambda_g"] = out.lambda_g;
  rep.measured["mu"] = out.mu;
  rep.measured["eig_lo"] = 1.0;
  rep.measured["eig_hi"] = 1.0 + out.mu;
  rep.measured["residual_rel"] = rel;
  rep.set_margin(1e-3 - rel);
  out.report = rep;
  return out;
}

ZeroHomogeneous zero_homogeneous_counterexample(int resolution) {
  GridPtr grid = make_grid(3, resolution, Mask::square);
  ScalarField v = ScalarField::sample(grid, [](const Vec& x) {
    double r = x.norm();
    return r == 0.0 ? 0.0 : x[2] / r;
  });

  ZeroHomogeneous out{v, {}};
  ProbeReport& rep = out.report;
  rep.name = "zero-homogeneous";

  // oscillation over discrete spheres: the full range [-1,1] at every radius
  const Grid& g = *grid;
  const double h = g.h();
  double worst_osc_gap = 0.0;
  for (double r : {0.25, 0.5, 0.75}) {
    double lo = kInf, hi = -kInf;
    for (long idx = 0; idx < g.node_count(); ++idx) {
      double d = g.coord(idx).norm();
      if (d > r - h && d <= r + h) {
        lo = std::min(lo, v[idx]);
        hi = std::max(hi, v[idx]);
      }
    }
    rep.measured["osc_r" + fmt("%.2f", r)] = hi - lo;
    worst_osc_gap = std::max(worst_osc_gap, std::abs((hi - lo) - 2.0));
  }

  // Dirichlet energy over 0.01 <= |x| <= 1 against the closed form
  // (1 - 0.01) * (8 pi / 3) from the radial integral
  VectorField gv = gradient(v);
  const double cell = h * h * h;
  double energy = 0.0;
  for (long idx = 0; idx < g.node_count(); ++idx) {
    double d = g.coord(idx).norm();
    if (d >= 0.01 && d <= 1.0) energy += cell * gv.at(idx).norm2();
  }
  double closed = (1.0 - 0.01) * 8.0 * M_PI / 3.0;
  double energy_rel = std::abs(energy - closed) / closed;
  rep.measured["dirichlet_energy"] = energy;
  rep.measured["dirichlet_closed_form"] = closed;
  rep.measured["energy_rel_err"] = energy_rel;

  // discontinuity at the origin: the oscillation over shrinking balls
  // does not decay
  double osc_small = 0.0;
  {
    double lo = kInf, hi = -kInf;
    for (long idx : g.ball_nodes(Vec(3), 4.0 * h)) {
      if (g.coord(idx).norm() == 0.0) continue;
      lo = std::min(lo, v[idx]);
      hi = std::max(hi, v[idx]);
    }
    osc_small = hi - lo;
  }
  rep.measured["osc_near_origin"] = osc_small;

  double margin = std::min({0.05 - worst_osc_gap, 0.10 - energy_rel,
                            osc_small - 1.9});
  rep.set_margin(margin);
  return out;
}

std::string HedgehogCloud::to_csv() const {
  std::string out;
  const int n = points.empty() ? 0 : points[0].size();
  out += "# columns: x[0.." + std::to_string(n - 1) + "], image, normal, singular\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::string row;
    for (int k = 0; k < n; ++k) row += (row.empty() ? "" : ",") + fmt_full(points[i][k]);
    for (int k = 0; k < n; ++k) row += "," + fmt_full(images[i][k]);
    for (int k = 0; k < n; ++k) row += "," + fmt_full(normals[i][k]);
    row += std::string(",") + (singular[i] ? "1" : "0");
    out += row + "\n";
  }
  return out;
}

}  // namespace varlab
