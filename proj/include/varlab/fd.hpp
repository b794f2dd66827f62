#pragma once

#include <functional>

#include "varlab/linalg.hpp"

namespace varlab {

/// Central-difference gradient, error O(step^2).
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p,
                       double step) {
  Vec g(p.size());
  for (int k = 0; k < p.size(); ++k) {
    Vec a = p, b = p;
    a[k] += step;
    b[k] -= step;
    g[k] = (f(a) - f(b)) / (2.0 * step);
  }
  return g;
}

/// Central-difference Hessian, error O(step^2).
inline SymMat fd_hessian(const std::function<double(const Vec&)>& f,
                         const Vec& p, double step) {
  const int n = p.size();
  SymMat h(n);
  double f0 = f(p);
  for (int i = 0; i < n; ++i) {
    Vec a = p, b = p;
    a[i] += step;
    b[i] -= step;
    h(i, i) = (f(a) - 2.0 * f0 + f(b)) / (step * step);
    for (int j = i + 1; j < n; ++j) {
      Vec pp = p, pm = p, mp = p, mm = p;
      pp[i] += step; pp[j] += step;
      pm[i] += step; pm[j] -= step;
      mp[i] -= step; mp[j] += step;
      mm[i] -= step; mm[j] -= step;
      h(i, j) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
    }
  }
  return h;
}

}  // namespace varlab
