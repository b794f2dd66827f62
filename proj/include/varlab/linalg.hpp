#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <vector>

namespace varlab {

// Everything in this project lives in dimension n <= 4, so vectors and
// symmetric matrices are fixed-capacity value types; no heap traffic in
// the solver or sampling loops.
inline constexpr int kMaxDim = 4;

class Vec {
 public:
  Vec() = default;
  explicit Vec(int n) : n_(n) {}
  Vec(std::initializer_list<double> xs) {
    for (double x : xs) v_[n_++] = x;
  }

  static Vec zero(int n) { return Vec(n); }

  int size() const { return n_; }
  double operator[](int i) const { return v_[i]; }
  double& operator[](int i) { return v_[i]; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double c) {
    for (int i = 0; i < n_; ++i) v_[i] *= c;
    return *this;
  }

 private:
  std::array<double, kMaxDim> v_{};
  int n_ = 0;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double c, Vec a) { return a *= c; }
inline Vec operator*(Vec a, double c) { return a *= c; }

inline double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

inline Vec normalized(const Vec& a) {
  Vec r = a;
  double n = a.norm();
  if (n > 0) r *= 1.0 / n;
  return r;
}

/// Symmetric n x n matrix, n <= 4, packed upper triangle.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int n) : n_(n) {}

  static SymMat identity(int n) {
    SymMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }

  double operator()(int i, int j) const { return a_[pack(i, j)]; }
  double& operator()(int i, int j) { return a_[pack(i, j)]; }

  Vec apply(const Vec& x) const {
    Vec y(n_);
    for (int i = 0; i < n_; ++i) {
      double s = 0;
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  double quad(const Vec& x) const { return x.dot(apply(x)); }

  SymMat& operator+=(const SymMat& o) {
    for (int k = 0; k < 10; ++k) a_[k] += o.a_[k];
    return *this;
  }
  SymMat& operator*=(double c) {
    for (double& v : a_) v *= c;
    return *this;
  }

  double frobenius() const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
  }

 private:
  static int pack(int i, int j) {
    if (i > j) std::swap(i, j);
    // upper triangle of a 4x4, row by row
    static constexpr int off[4] = {0, 4, 7, 9};
    return off[i] + (j - i);
  }
  std::array<double, 10> a_{};
  int n_ = 0;
};

inline SymMat operator*(double c, SymMat m) { return m *= c; }

inline SymMat outer(const Vec& x) {
  SymMat m(x.size());
  for (int i = 0; i < x.size(); ++i)
    for (int j = i; j < x.size(); ++j) m(i, j) = x[i] * x[j];
  return m;
}

struct EigenSystem {
  Vec values;                       // ascending
  std::array<Vec, kMaxDim> vectors; // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi eigen decomposition; plenty for 4x4 symmetric input.
EigenSystem sym_eigensystem(const SymMat& m);
Vec sym_eigenvalues(const SymMat& m);

/// Dense least-squares / linear solve for the tiny systems used by the
/// quadratic-patch fits (size <= 12). Gaussian elimination with partial
/// pivoting on the normal equations.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                int n);

}  // namespace varlab
