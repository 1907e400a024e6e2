// Small dense matrices and vectors over a generic scalar ring (double, Jet2,
// std::complex<double>).  Everything here is desk-scale: dimensions stay in
// the single digits, so the implementations favour exactness and smoothness
// over asymptotics.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "phm/jet.hpp"

namespace phm {

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.value(); }
inline double abs_value(double x) { return std::fabs(x); }
inline double abs_value(const Jet2& x) { return std::fabs(x.value()); }
inline double abs_value(const std::complex<double>& x) { return std::abs(x); }

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, T(0.0)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  friend Mat operator+(const Mat& a, const Mat& b) {
    a.check_same(b);
    Mat r = a;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] + b.a_[i];
    return r;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    a.check_same(b);
    Mat r = a;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] - b.a_[i];
    return r;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_) throw ShapeError("Mat: product shape mismatch");
    Mat r(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const T& aik = a(i, k);
        for (int j = 0; j < b.c_; ++j) r(i, j) = r(i, j) + aik * b(k, j);
      }
    return r;
  }
  friend Mat operator*(const T& s, const Mat& a) {
    Mat r = a;
    for (auto& x : r.a_) x = s * x;
    return r;
  }
  Mat operator-() const { return T(-1.0) * *this; }

  Mat transposed() const {
    Mat r(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (static_cast<int>(v.size()) != c_) throw ShapeError("Mat: apply shape mismatch");
    std::vector<T> r(r_, T(0.0));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) r[i] = r[i] + (*this)(i, j) * v[j];
    return r;
  }

  // Gauss-Jordan with partial pivoting.  The inverse is a rational function of
  // the entries, so pivot choice only affects rounding, not smoothness.
  Mat inverse() const {
    if (r_ != c_) throw ShapeError("Mat: inverse of non-square matrix");
    const int n = r_;
    Mat a = *this;
    Mat inv = identity(n);
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = abs_value(a(col, col));
      for (int i = col + 1; i < n; ++i)
        if (abs_value(a(i, col)) > best) {
          best = abs_value(a(i, col));
          piv = i;
        }
      if (best == 0.0) throw DegeneracyError("Mat: singular matrix in inverse");
      if (piv != col) {
        for (int j = 0; j < n; ++j) {
          std::swap(a(piv, j), a(col, j));
          std::swap(inv(piv, j), inv(col, j));
        }
      }
      const T d = a(col, col);
      for (int j = 0; j < n; ++j) {
        a(col, j) = a(col, j) / d;
        inv(col, j) = inv(col, j) / d;
      }
      for (int i = 0; i < n; ++i) {
        if (i == col) continue;
        const T f = a(i, col);
        if (abs_value(f) == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          a(i, j) = a(i, j) - f * a(col, j);
          inv(i, j) = inv(i, j) - f * inv(col, j);
        }
      }
    }
    return inv;
  }

  T trace() const {
    if (r_ != c_) throw ShapeError("Mat: trace of non-square matrix");
    T t(0.0);
    for (int i = 0; i < r_; ++i) t = t + (*this)(i, i);
    return t;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& x : a_) {
      const double m = abs_value(x);
      s += m * m;
    }
    return std::sqrt(s);
  }

  Mat<double> values() const {
    Mat<double> r(r_, c_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) r(i, j) = value_of((*this)(i, j));
    return r;
  }

 private:
  void check_same(const Mat& b) const {
    if (r_ != b.r_ || c_ != b.c_) throw ShapeError("Mat: shape mismatch");
  }

  int r_ = 0, c_ = 0;
  std::vector<T> a_;
};

using MatD = Mat<double>;
using MatJ = Mat<Jet2>;
using VecD = std::vector<double>;
using VecJ = std::vector<Jet2>;

template <class T>
std::vector<T> vec_add(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
template <class T>
std::vector<T> vec_sub(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
template <class T, class S>
std::vector<T> vec_scale(const S& s, const std::vector<T>& a) {
  std::vector<T> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// g-inner product u^T G v.
template <class T>
T inner(const Mat<T>& G, const std::vector<T>& u, const std::vector<T>& v) {
  T s(0.0);
  for (int i = 0; i < G.rows(); ++i)
    for (int j = 0; j < G.cols(); ++j) s = s + u[i] * G(i, j) * v[j];
  return s;
}

template <class T>
double g_norm(const Mat<T>& G, const std::vector<T>& u) {
  double s = value_of(inner(G, u, u));
  return std::sqrt(std::max(0.0, s));
}

inline double vecd_norm(const VecD& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline VecD values_of(const VecJ& v) {
  VecD r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i].value();
  return r;
}

inline double sqrt_scalar(double x) { return std::sqrt(x); }
inline Jet2 sqrt_scalar(const Jet2& x) { return sqrt(x); }

struct GramSchmidtOptions {
  bool drop_degenerate = false;   // skip seeds that project to ~0 instead of throwing
  double drop_tol = 1e-10;        // residual threshold relative to the seed norm
  int want = -1;                  // stop after this many vectors (-1: use all seeds)
};

// Fixed-order modified Gram-Schmidt in the G-inner product.  No pivot search:
// the output is a smooth function of smoothly varying inputs, which lets the
// engine take Lie brackets of frame fields by differentiating through this
// construction.
template <class T>
std::vector<std::vector<T>> gram_schmidt(const Mat<T>& G, const std::vector<std::vector<T>>& seeds,
                                         const GramSchmidtOptions& opt = {}) {
  std::vector<std::vector<T>> out;
  // In drop mode the reference scale is the largest seed: a projected seed that
  // comes out numerically zero must be dropped, not normalized into noise.
  double ref = 0.0;
  for (const auto& seed : seeds)
    ref = std::max(ref, std::sqrt(std::max(0.0, value_of(inner(G, seed, seed)))));
  for (const auto& seed : seeds) {
    if (opt.want >= 0 && static_cast<int>(out.size()) >= opt.want) break;
    std::vector<T> u = seed;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : out) {
        const T c = inner(G, b, u);
        for (size_t i = 0; i < u.size(); ++i) u[i] = u[i] - c * b[i];
      }
    const T r2 = inner(G, u, u);
    const double seed_norm = std::sqrt(std::max(0.0, value_of(inner(G, seed, seed))));
    const double reference = opt.drop_degenerate ? ref : seed_norm;
    if (std::sqrt(std::max(0.0, value_of(r2))) <= opt.drop_tol * std::max(1e-300, reference)) {
      if (opt.drop_degenerate) continue;
      throw DegeneracyError("gram_schmidt: degenerate seed (residual below threshold)");
    }
    const T inv_len = T(1.0) / sqrt_scalar(r2);
    for (auto& x : u) x = inv_len * x;
    out.push_back(std::move(u));
  }
  if (opt.want >= 0 && static_cast<int>(out.size()) < opt.want)
    throw DegeneracyError("gram_schmidt: not enough independent seeds");
  return out;
}

// Frobenius norm of AB - BA; zero iff A and B commute.
template <class T>
double commutator_norm(const Mat<T>& A, const Mat<T>& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw ShapeError("commutator_norm: matrices must be square and of equal size");
  return (A * B - B * A).frobenius();
}

// Eigenvalue range of a symmetric matrix by cyclic Jacobi rotations.
inline std::pair<double, double> sym_eigen_range(MatD A) {
  const int n = A.rows();
  if (n != A.cols()) throw ShapeError("sym_eigen_range: non-square");
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
  }
  double lo = A(0, 0), hi = A(0, 0);
  for (int i = 1; i < n; ++i) {
    lo = std::min(lo, A(i, i));
    hi = std::max(hi, A(i, i));
  }
  return {lo, hi};
}

inline double smallest_eigenvalue_sym(const MatD& A) { return sym_eigen_range(A).first; }

// Determinant by LU with partial pivoting (used for orientation checks).
inline double det(MatD A) {
  const int n = A.rows();
  if (n != A.cols()) throw ShapeError("det: non-square");
  double d = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::fabs(A(i, col)) > std::fabs(A(piv, col))) piv = i;
    if (A(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
      d = -d;
    }
    d *= A(col, col);
    for (int i = col + 1; i < n; ++i) {
      const double f = A(i, col) / A(col, col);
      for (int j = col; j < n; ++j) A(i, j) -= f * A(col, j);
    }
  }
  return d;
}

}  // namespace phm
