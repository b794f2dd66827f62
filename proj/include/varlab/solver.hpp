#pragma once

#include <string>
#include <utility>
#include <vector>

#include "varlab/field.hpp"
#include "varlab/lagrangian.hpp"

namespace varlab {

enum class SolveMethod { newton_damped, gradient_descent };

struct SolveOptions {
  double tol_rel_energy = 1e-10;
  double tol_residual = 1e-8;
  long max_iters = 200000;
  // < 0 means auto: 0 for integrands with empty degeneracy set, 1e-3 with
  // tenfold continuation otherwise.
  double smoothing_eps = -1.0;
  SolveMethod method = SolveMethod::newton_damped;
  bool audit_convexity = true;
};

struct ConvergenceReport {
  long iterations = 0;
  double energy = 0.0;
  double residual = 0.0;  // max_i |dJ/du_i| / h^n at the returned iterate
  std::vector<double> smoothing_schedule;
  double wall_seconds = 0.0;
  bool converged = false;

  std::string to_text() const;
};

/// Discrete energy: each grid cell carries two right triangles on which
/// the field is linear; the energy sums triangle-area times F(gradient).
/// Convex in the node values whenever F is convex.
double energy(const Lagrangian& F, const ScalarField& u);

/// Discrete pairing of the flux with a test function:
/// sum over cells of h^n grad F(grad u) . grad psi. psi must vanish on the
/// boundary ring and outside it.
double weak_residual(const Lagrangian& F, const ScalarField& u,
                     const ScalarField& psi);

/// Minimize the discrete energy over interior values with the boundary
/// fixed. Degenerate integrands are smoothed by F + eps|p|^2 and continued
/// eps -> eps/10 down to 1e-9 (warm started), then polished at eps = 0.
/// Convergence certificate: max interior |dJ/du| <= tol_residual * h^n.
std::pair<ScalarField, ConvergenceReport> minimize(const Lagrangian& F,
                                                   GridPtr grid,
                                                   const BoundaryValues& boundary,
                                                   const SolveOptions& opts = {});

/// Frozen-coefficient field a_ij(x) = F_ij(grad u(x)) at nodes, with its
/// eigenvalue window over live nodes.
struct CoefficientField {
  GridPtr grid;
  std::vector<SymMat> a;
  double eig_min = 0.0;
  double eig_max = 0.0;

  static CoefficientField identity(GridPtr grid);
};

CoefficientField coefficient_field(const Lagrangian& F, const ScalarField& u);

}  // namespace varlab
