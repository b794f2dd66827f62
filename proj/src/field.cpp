#include "varlab/field.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "varlab/numfmt.hpp"

namespace varlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}
}  // namespace

Grid::Grid(int dim, int resolution, Mask mask)
    : dim_(dim), res_(resolution), mask_(mask) {
  if (dim < 1 || dim > kMaxDim)
    throw Error(ErrorKind::invalid_parameter, "dim must be in [1,4]");
  if (resolution < 9 || resolution % 2 == 0)
    throw Error(ErrorKind::invalid_parameter, "resolution must be odd and >= 9");
  h_ = 2.0 / (resolution - 1);
  count_ = ipow(resolution, dim);
  kind_.assign(count_, NodeKind::interior);

  if (mask_ == Mask::square) {
    for (long idx = 0; idx < count_; ++idx) {
      auto mi = multi(idx);
      for (int k = 0; k < dim_; ++k)
        if (mi[k] == 0 || mi[k] == res_ - 1) {
          kind_[idx] = NodeKind::boundary;
          break;
        }
    }
  } else {
    for (long idx = 0; idx < count_; ++idx)
      if (coord(idx).norm2() >= 1.0) kind_[idx] = NodeKind::exterior;
    // the boundary ring: masked-out nodes face-adjacent to the interior
    for (long idx = 0; idx < count_; ++idx) {
      if (kind_[idx] != NodeKind::exterior) continue;
      for (int k = 0; k < dim_ && kind_[idx] == NodeKind::exterior; ++k)
        for (int dir = -1; dir <= 1; dir += 2) {
          long nb = neighbor(idx, k, dir);
          if (nb >= 0 && kind_[nb] == NodeKind::interior) {
            kind_[idx] = NodeKind::boundary;
            break;
          }
        }
    }
  }

  for (long idx = 0; idx < count_; ++idx) {
    if (kind_[idx] == NodeKind::interior) interior_.push_back(idx);
    if (kind_[idx] == NodeKind::boundary) boundary_.push_back(idx);
  }
}

Vec Grid::coord(long idx) const {
  auto mi = multi(idx);
  Vec x(dim_);
  for (int k = 0; k < dim_; ++k) x[k] = -1.0 + mi[k] * h_;
  return x;
}

std::array<int, kMaxDim> Grid::multi(long idx) const {
  std::array<int, kMaxDim> mi{};
  for (int k = 0; k < dim_; ++k) {
    mi[k] = static_cast<int>(idx % res_);
    idx /= res_;
  }
  return mi;
}

long Grid::index(const std::array<int, kMaxDim>& mi) const {
  long idx = 0;
  for (int k = dim_ - 1; k >= 0; --k) idx = idx * res_ + mi[k];
  return idx;
}

long Grid::neighbor(long idx, int axis, int dir) const {
  auto mi = multi(idx);
  mi[axis] += dir;
  if (mi[axis] < 0 || mi[axis] >= res_) return -1;
  return index(mi);
}

std::vector<long> Grid::ball_nodes(const Vec& center, double r) const {
  std::vector<long> out;
  const double r2 = r * r;
  for (long idx = 0; idx < count_; ++idx) {
    if (kind_[idx] == NodeKind::exterior) continue;
    if ((coord(idx) - center).norm2() <= r2) out.push_back(idx);
  }
  return out;
}

GridPtr make_grid(int dim, int resolution, Mask mask) {
  return std::make_shared<Grid>(dim, resolution, mask);
}

ScalarField ScalarField::sample(GridPtr g,
                                const std::function<double(const Vec&)>& f) {
  ScalarField out(g);
  for (long idx = 0; idx < g->node_count(); ++idx)
    out.values[idx] =
        g->is_exterior(idx) ? kNaN : f(g->coord(idx));
  return out;
}

namespace {

// One-dimensional derivative at a node, preferring the centered stencil,
// falling back to second-order one-sided where a neighbor is unusable.
double axis_derivative(const ScalarField& f, long idx, int axis) {
  const Grid& g = *f.grid;
  const double h = g.h();
  auto usable = [&](long nb) { return nb >= 0 && !g.is_exterior(nb); };

  long plus = g.neighbor(idx, axis, +1);
  long minus = g.neighbor(idx, axis, -1);
  bool up = usable(plus), um = usable(minus);
  if (up && um) return (f[plus] - f[minus]) / (2.0 * h);
  if (up) {
    long plus2 = g.neighbor(plus, axis, +1);
    if (usable(plus2))
      return (-3.0 * f[idx] + 4.0 * f[plus] - f[plus2]) / (2.0 * h);
    return (f[plus] - f[idx]) / h;
  }
  if (um) {
    long minus2 = g.neighbor(minus, axis, -1);
    if (usable(minus2))
      return (3.0 * f[idx] - 4.0 * f[minus] + f[minus2]) / (2.0 * h);
    return (f[idx] - f[minus]) / h;
  }
  return 0.0;
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  VectorField out(f.grid);
  const Grid& g = *f.grid;
  for (long idx = 0; idx < g.node_count(); ++idx) {
    if (g.is_exterior(idx)) {
      Vec nanv(g.dim());
      for (int k = 0; k < g.dim(); ++k) nanv[k] = kNaN;
      out.set(idx, nanv);
      continue;
    }
    Vec grad(g.dim());
    for (int k = 0; k < g.dim(); ++k) grad[k] = axis_derivative(f, idx, k);
    out.set(idx, grad);
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = *v.grid;
  ScalarField out(v.grid);
  for (int k = 0; k < g.dim(); ++k) {
    ScalarField comp(v.grid);
    for (long idx = 0; idx < g.node_count(); ++idx)
      comp[idx] = v.comps[idx * g.dim() + k];
    for (long idx = 0; idx < g.node_count(); ++idx)
      if (!g.is_exterior(idx)) out[idx] += axis_derivative(comp, idx, k);
  }
  for (long idx = 0; idx < g.node_count(); ++idx)
    if (g.is_exterior(idx)) out[idx] = kNaN;
  return out;
}

double integrate(const ScalarField& f, const Vec& center, double r,
                 double measure_scale) {
  const Grid& g = *f.grid;
  double reach = 0.0;
  for (int k = 0; k < g.dim(); ++k) reach = std::max(reach, std::abs(center[k]));
  if (g.mask() == Mask::ball) {
    if (center.norm() + r > 1.0 + 1e-12)
      throw Error(ErrorKind::out_of_domain, "ball exits the unit ball");
  } else if (reach + r > 1.0 + 1e-12) {
    throw Error(ErrorKind::out_of_domain, "ball exits the square");
  }
  double cell = std::pow(g.h() * measure_scale, g.dim());
  double sum = 0.0;
  for (long idx : g.ball_nodes(center, r)) sum += f[idx] * cell;
  return sum;
}

ScalarField cutoff(GridPtr grid, double r_in, double r_out) {
  if (!(0.0 < r_in && r_in < r_out && r_out <= 1.0))
    throw Error(ErrorKind::invalid_parameter,
                "cutoff requires 0 < r_in < r_out <= 1");
  return ScalarField::sample(grid, [=](const Vec& x) {
    double r = x.norm();
    if (r <= r_in) return 1.0;
    if (r >= r_out) return 0.0;
    return (r_out - r) / (r_out - r_in);
  });
}

BoundaryValues trace_boundary(GridPtr grid, const Expression& expr) {
  if (expr.arity() > grid->dim())
    throw Error(ErrorKind::boundary_evaluation_failure,
                "expression uses more variables than the grid has dimensions");
  BoundaryValues bv;
  for (long idx : grid->boundary_nodes()) {
    Vec x = grid->coord(idx);
    if (grid->mask() == Mask::ball) x = normalized(x);
    try {
      bv.nodes.push_back(idx);
      bv.values.push_back(expr.eval(x));
    } catch (const Error& e) {
      std::string where = "(";
      for (int k = 0; k < grid->dim(); ++k)
        where += (k ? "," : "") + fmt_short(x[k]);
      where += ")";
      throw Error(ErrorKind::boundary_evaluation_failure,
                  std::string(e.what()) + " at boundary node " + where);
    }
  }
  return bv;
}

std::string to_csv(const ScalarField& f) {
  const Grid& g = *f.grid;
  std::string out = "# dim=" + std::to_string(g.dim()) +
                    " res=" + std::to_string(g.res()) + " mask=" +
                    (g.mask() == Mask::ball ? "ball" : "square") + "\n";
  long rows = g.node_count() / g.res();
  for (long row = 0; row < rows; ++row) {
    for (int i = 0; i < g.res(); ++i) {
      double v = f.values[row * g.res() + i];
      out += std::isnan(v) ? std::string("nan") : fmt_full(v);
      out += (i + 1 == g.res()) ? '\n' : ',';
    }
  }
  return out;
}

ScalarField field_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  int dim = 0, res = 0;
  char maskbuf[16] = {0};
  if (std::sscanf(header.c_str(), "# dim=%d res=%d mask=%15s", &dim, &res,
                  maskbuf) != 3)
    throw Error(ErrorKind::io_error, "malformed field header");
  Mask mask;
  if (std::strcmp(maskbuf, "ball") == 0)
    mask = Mask::ball;
  else if (std::strcmp(maskbuf, "square") == 0)
    mask = Mask::square;
  else
    throw Error(ErrorKind::io_error, "unknown mask in field header");

  ScalarField f(make_grid(dim, res, mask));
  long expected = f.grid->node_count();
  long got = 0;
  std::string token;
  while (std::getline(in, token)) {
    std::istringstream line(token);
    std::string cell;
    while (std::getline(line, cell, ',')) {
      const char* s = cell.c_str();
      while (*s == ' ') ++s;
      if (*s == '\0') continue;
      double v;
      if (std::strncmp(s, "nan", 3) == 0) {
        v = kNaN;
      } else {
        char* end = nullptr;
        v = std::strtod(s, &end);
        if (end == s)
          throw Error(ErrorKind::io_error, "malformed value '" + cell + "'");
      }
      if (got >= expected)
        throw Error(ErrorKind::io_error, "too many values in field file");
      f.values[got++] = v;
    }
  }
  if (got != expected)
    throw Error(ErrorKind::io_error,
                "field file has " + std::to_string(got) + " values, expected " +
                    std::to_string(expected));
  for (long idx = 0; idx < expected; ++idx)
    if (!f.grid->is_exterior(idx) && !std::isfinite(f.values[idx]))
      throw Error(ErrorKind::io_error, "non-finite value at live node");
  return f;
}

void write_field(const ScalarField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_error, "cannot open " + path);
  out << to_csv(f);
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return field_from_csv(ss.str());
}

}  // namespace varlab
