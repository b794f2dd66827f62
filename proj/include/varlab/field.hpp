#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "varlab/errors.hpp"
#include "varlab/expr.hpp"
#include "varlab/linalg.hpp"

namespace varlab {

enum class Mask { ball, square };
enum class NodeKind : unsigned char { interior, boundary, exterior };

/// Uniform grid over [-1,1]^dim with odd resolution (a node sits at the
/// origin) and spacing h = 2/(res-1). The ball mask marks nodes with
/// |x| < 1 interior; masked-out nodes face-adjacent to an interior node
/// form the boundary ring, everything else is exterior. The square mask
/// has the rim as boundary and no exterior.
class Grid {
 public:
  Grid(int dim, int resolution, Mask mask);

  int dim() const { return dim_; }
  int res() const { return res_; }
  double h() const { return h_; }
  Mask mask() const { return mask_; }
  long node_count() const { return count_; }

  NodeKind kind(long idx) const { return kind_[idx]; }
  bool is_exterior(long idx) const { return kind_[idx] == NodeKind::exterior; }

  Vec coord(long idx) const;
  std::array<int, kMaxDim> multi(long idx) const;
  long index(const std::array<int, kMaxDim>& mi) const;
  /// Face neighbor along `axis` in direction `dir` (+1/-1); -1 off-grid.
  long neighbor(long idx, int axis, int dir) const;

  const std::vector<long>& interior_nodes() const { return interior_; }
  const std::vector<long>& boundary_nodes() const { return boundary_; }

  /// Indices of non-exterior nodes with |x - center| <= r.
  std::vector<long> ball_nodes(const Vec& center, double r) const;

 private:
  int dim_, res_;
  double h_;
  Mask mask_;
  long count_;
  std::vector<NodeKind> kind_;
  std::vector<long> interior_, boundary_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int resolution, Mask mask);

struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(GridPtr g)
      : grid(std::move(g)), values(grid->node_count(), 0.0) {}

  double operator[](long idx) const { return values[idx]; }
  double& operator[](long idx) { return values[idx]; }

  static ScalarField sample(GridPtr g, const std::function<double(const Vec&)>& f);
};

struct VectorField {
  GridPtr grid;
  std::vector<double> comps;  // node-major, dim entries per node

  explicit VectorField(GridPtr g)
      : grid(std::move(g)), comps(grid->node_count() * grid->dim(), 0.0) {}

  Vec at(long idx) const {
    Vec v(grid->dim());
    for (int k = 0; k < grid->dim(); ++k) v[k] = comps[idx * grid->dim() + k];
    return v;
  }
  void set(long idx, const Vec& v) {
    for (int k = 0; k < grid->dim(); ++k) comps[idx * grid->dim() + k] = v[k];
  }
};

/// Centered differences at nodes with two usable neighbors, second-order
/// one-sided stencils next to the mask edge; exact on affine and quadratic
/// fields. Exterior nodes get NaN.
VectorField gradient(const ScalarField& f);

/// Divergence of a vector field with the same stencil rules.
ScalarField divergence(const VectorField& g);

/// h^dim-weighted node sum over the closed ball; the ball must fit inside
/// the domain. `measure_scale` multiplies coordinates (and hence h), used
/// by the probes that reinterpret the grid as radius-2.
double integrate(const ScalarField& f, const Vec& center, double r,
                 double measure_scale = 1.0);

/// Radial cutoff: 1 on B_{r_in}, 0 outside B_{r_out}, linear in between.
ScalarField cutoff(GridPtr grid, double r_in, double r_out);

struct BoundaryValues {
  std::vector<long> nodes;
  std::vector<double> values;
};

/// Evaluate an expression at the boundary nodes. Ball-mask nodes are
/// projected to the sphere before evaluation.
BoundaryValues trace_boundary(GridPtr grid, const Expression& expr);

// --- ScalarField file format -------------------------------------------
// line 1: "# dim=<n> res=<r> mask=<ball|square>"
// then res^n values in row-major order (x fastest), one row per grid
// line, comma separated, "nan" for exterior nodes.
std::string to_csv(const ScalarField& f);
ScalarField field_from_csv(const std::string& text);
void write_field(const ScalarField& f, const std::string& path);
ScalarField read_field(const std::string& path);

}  // namespace varlab
