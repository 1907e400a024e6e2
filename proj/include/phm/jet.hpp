// Second-order forward-mode jets: value, gradient and Hessian of a scalar
// quantity with respect to up to kMaxVars active variables.
//
// Every field evaluation in the engine happens in Jet2 arithmetic, so any
// derived quantity carries exact first and second partial derivatives as long
// as the total derivative order stays within two.  Quantities built from
// extracted derivatives (see dpart) drop one order; the `order` tag tracks how
// many derivative slots are still trustworthy.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phm {

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxHess = kMaxVars * (kMaxVars + 1) / 2;

// Raised when a primitive is evaluated outside its domain (log/sqrt of a
// non-positive value, division by zero).  The offending primitive is recorded;
// callers that know the evaluation point attach it.
struct DomainError : std::runtime_error {
  std::string primitive;
  explicit DomainError(const std::string& prim, const std::string& detail)
      : std::runtime_error("domain error in '" + prim + "': " + detail), primitive(prim) {}
};

class Jet2 {
 public:
  Jet2() = default;
  Jet2(double value) : v_(value) {}  // NOLINT: implicit by design, constants promote

  // Seeds an active variable: d(x_i)/d(x_j) = delta_ij.
  static Jet2 variable(double value, int index, int nvars) {
    if (nvars < 1 || nvars > kMaxVars) throw std::invalid_argument("Jet2: nvars out of range");
    if (index < 0 || index >= nvars) throw std::invalid_argument("Jet2: variable index out of range");
    Jet2 j(value);
    j.n_ = nvars;
    j.g_[index] = 1.0;
    return j;
  }

  static Jet2 constant(double value, int nvars) {
    Jet2 j(value);
    j.n_ = nvars;
    return j;
  }

  double value() const { return v_; }
  int nvars() const { return n_; }
  int order() const { return ord_; }

  double deriv(int i) const {
    require_order(1, "gradient");
    return i < n_ ? g_[i] : 0.0;
  }
  double second(int i, int j) const {
    require_order(2, "hessian");
    if (i >= n_ || j >= n_) return 0.0;
    return h_[pack(i, j)];
  }

  // Derivative extraction: the jet of d(this)/dx_i.  Value and gradient of the
  // result are exact; its Hessian slot is gone, hence order drops by one.
  Jet2 dpart(int i) const {
    require_order(1, "gradient");
    Jet2 r;
    r.n_ = n_;
    r.ord_ = ord_ - 1;
    r.v_ = i < n_ ? g_[i] : 0.0;
    if (ord_ >= 2 && i < n_)
      for (int j = 0; j < n_; ++j) r.g_[j] = h_[pack(i, j)];
    return r;
  }

  Jet2 operator-() const {
    Jet2 r = *this;
    r.v_ = -r.v_;
    for (int i = 0; i < n_; ++i) r.g_[i] = -r.g_[i];
    for (int i = 0; i < hsize(); ++i) r.h_[i] = -r.h_[i];
    return r;
  }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) {
    const Jet2 shape = promote(a, b);
    Jet2 r = like(a, shape);
    const Jet2 bb = like(b, shape);
    r.v_ += bb.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] += bb.g_[i];
    for (int i = 0; i < r.hsize(); ++i) r.h_[i] += bb.h_[i];
    r.ord_ = std::min(a.ord_, b.ord_);
    r.clamp();
    return r;
  }
  friend Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r = promote(a, b);
    const Jet2 aa = like(a, r), bb = like(b, r);
    r.v_ = aa.v_ * bb.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = aa.v_ * bb.g_[i] + bb.v_ * aa.g_[i];
    for (int i = 0; i < r.n_; ++i)
      for (int j = 0; j <= i; ++j)
        r.h_[pack(i, j)] = aa.v_ * bb.h_[pack(i, j)] + bb.v_ * aa.h_[pack(i, j)] +
                           aa.g_[i] * bb.g_[j] + aa.g_[j] * bb.g_[i];
    r.ord_ = std::min(a.ord_, b.ord_);
    r.clamp();
    return r;
  }

  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.v_ == 0.0) throw DomainError("divide", "division by zero");
    const double iv = 1.0 / b.v_;
    return a * compose1(b, iv, -iv * iv, 2.0 * iv * iv * iv);
  }

  Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
  Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
  Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

  // Chain rule for a unary primitive with f(a.v)=f0, f'(a.v)=f1, f''(a.v)=f2.
  static Jet2 compose1(const Jet2& a, double f0, double f1, double f2) {
    Jet2 r;
    r.n_ = a.n_;
    r.ord_ = a.ord_;
    r.v_ = f0;
    for (int i = 0; i < a.n_; ++i) r.g_[i] = f1 * a.g_[i];
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j <= i; ++j)
        r.h_[pack(i, j)] = f1 * a.h_[pack(i, j)] + f2 * a.g_[i] * a.g_[j];
    r.clamp();
    return r;
  }

 private:
  static int pack(int i, int j) { return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i; }
  int hsize() const { return n_ * (n_ + 1) / 2; }

  void require_order(int k, const char* slot) const {
    if (ord_ < k)
      throw std::logic_error(std::string("Jet2: reading ") + slot +
                             " of a jet that only carries order " + std::to_string(ord_));
  }

  // Zeroes the slots above the validity order so stale data can never leak.
  void clamp() {
    if (ord_ <= 1)
      for (int i = 0; i < hsize(); ++i) h_[i] = 0.0;
    if (ord_ <= 0)
      for (int i = 0; i < n_; ++i) g_[i] = 0.0;
  }

  static Jet2 promote(const Jet2& a, const Jet2& b) {
    if (a.n_ != 0 && b.n_ != 0 && a.n_ != b.n_)
      throw std::logic_error("Jet2: mixing jets with different active variable counts");
    Jet2 r = a.n_ >= b.n_ ? a : b;
    return r;
  }
  static Jet2 like(const Jet2& x, const Jet2& shape) {
    if (x.n_ == shape.n_) return x;
    Jet2 r = x;
    r.n_ = shape.n_;
    return r;
  }

  double v_ = 0.0;
  int n_ = 0;    // 0 means "constant": broadcasts against any variable count
  int ord_ = 2;  // how many derivative levels are valid
  std::array<double, kMaxVars> g_{};
  std::array<double, kMaxHess> h_{};

  friend Jet2 pow_int(const Jet2&, int);
};

inline Jet2 operator+(double a, const Jet2& b) { return Jet2(a) + b; }
inline Jet2 operator-(double a, const Jet2& b) { return Jet2(a) - b; }
inline Jet2 operator*(double a, const Jet2& b) { return Jet2(a) * b; }
inline Jet2 operator/(double a, const Jet2& b) { return Jet2(a) / b; }

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet2::compose1(a, s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet2::compose1(a, c, -s, -c);
}
inline Jet2 tan(const Jet2& a) {
  const double t = std::tan(a.value()), d = 1.0 + t * t;
  return Jet2::compose1(a, t, d, 2.0 * t * d);
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return Jet2::compose1(a, e, e, e);
}
inline Jet2 log(const Jet2& a) {
  if (a.value() <= 0.0) throw DomainError("log", "argument " + std::to_string(a.value()) + " <= 0");
  const double iv = 1.0 / a.value();
  return Jet2::compose1(a, std::log(a.value()), iv, -iv * iv);
}
inline Jet2 sqrt(const Jet2& a) {
  if (a.value() <= 0.0)
    throw DomainError("sqrt", "argument " + std::to_string(a.value()) + " <= 0");
  const double s = std::sqrt(a.value());
  return Jet2::compose1(a, s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet2::compose1(a, s, c, s);
}
inline Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet2::compose1(a, c, s, c);
}
inline Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.value()), d = 1.0 - t * t;
  return Jet2::compose1(a, t, d, -2.0 * t * d);
}
inline Jet2 atan(const Jet2& a) {
  const double x = a.value(), d = 1.0 / (1.0 + x * x);
  return Jet2::compose1(a, std::atan(x), d, -2.0 * x * d * d);
}

inline Jet2 pow_int(const Jet2& a, int k) {
  const double x = a.value();
  if (k == 0) return Jet2::compose1(a, 1.0, 0.0, 0.0);
  if (x == 0.0 && k < 0) throw DomainError("pow", "zero base with negative exponent");
  const double f0 = std::pow(x, k);
  const double f1 = (k == 0) ? 0.0 : k * std::pow(x, k - 1);
  const double kk = static_cast<double>(k) * (k - 1);
  const double f2 = (kk == 0.0) ? 0.0 : kk * std::pow(x, k - 2);
  return Jet2::compose1(a, f0, f1, f2);
}

// Complex scalar whose real and imaginary parts are jets.  Used for the
// holomorphic test battery and for complex Laplacians.
struct CJet {
  Jet2 re, im;

  CJet() = default;
  CJet(Jet2 r, Jet2 i) : re(std::move(r)), im(std::move(i)) {}
  explicit CJet(double r) : re(r), im(0.0) {}

  friend CJet operator+(const CJet& a, const CJet& b) { return {a.re + b.re, a.im + b.im}; }
  friend CJet operator-(const CJet& a, const CJet& b) { return {a.re - b.re, a.im - b.im}; }
  friend CJet operator*(const CJet& a, const CJet& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

inline CJet exp(const CJet& z) {
  const Jet2 m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

}  // namespace phm
