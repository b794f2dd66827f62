#include "varlab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "varlab/errors.hpp"

namespace varlab {

EigenSystem sym_eigensystem(const SymMat& m) {
  const int n = m.size();
  double a[kMaxDim][kMaxDim];
  double v[kMaxDim][kMaxDim];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[i][j] = m(i, j);
      v[i][j] = (i == j) ? 1.0 : 0.0;
    }

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, kMaxDim> order{};
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.begin() + n,
            [&](int i, int j) { return a[i][i] < a[j][j]; });

  EigenSystem es;
  es.values = Vec(n);
  for (int k = 0; k < n; ++k) {
    es.values[k] = a[order[k]][order[k]];
    es.vectors[k] = Vec(n);
    for (int i = 0; i < n; ++i) es.vectors[k][i] = v[i][order[k]];
  }
  return es;
}

Vec sym_eigenvalues(const SymMat& m) { return sym_eigensystem(m).values; }

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-14)
      throw Error(ErrorKind::not_applicable, "singular fit system");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / a[col * n + col];
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r];
  }
  return x;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::unknown_lagrangian: return "unknown-lagrangian";
    case ErrorKind::inversion_failure: return "inversion-failure";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::boundary_evaluation_failure:
      return "boundary-evaluation-failure";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::evaluation_error: return "evaluation-error";
    case ErrorKind::invalid_test_function: return "invalid-test-function";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::insufficient_resolution: return "insufficient-resolution";
    case ErrorKind::empty_cloud: return "empty-cloud";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::not_elliptic: return "not-elliptic";
    case ErrorKind::io_error: return "io-error";
  }
  return "error";
}

}  // namespace varlab
