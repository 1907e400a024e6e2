// Charts, the Levi-Civita connection and the differential operators every
// other module consumes.  All evaluation happens per point: coordinates are
// seeded as Jet2 variables and every derived component carries its own
// derivatives, so brackets, covariant and Lie derivatives, exterior
// derivatives and Laplacians are read off derivative slots.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phm/expr.hpp"
#include "phm/linalg.hpp"

namespace phm {

struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Box {
  std::vector<std::pair<double, double>> range;  // per-coordinate closed interval
  int dim() const { return static_cast<int>(range.size()); }
};

struct RiemannianChart {
  std::string label;
  std::vector<std::string> coords;
  std::vector<std::vector<Expr>> metric;  // m x m, numerically symmetric
  Box box;

  int dim() const { return static_cast<int>(coords.size()); }
};

// Everything the connection gives us at one point.
struct ChartFrame {
  const RiemannianChart* chart = nullptr;
  VecD x;
  VecJ xj;                 // seeded coordinates, order 2
  MatJ G, Ginv;            // metric and inverse, order 2
  std::vector<MatJ> Gam;   // Gam[k](i,j) = Gamma^k_ij, order 1

  int dim() const { return static_cast<int>(x.size()); }
};

VecJ seed_point(const VecD& x);

// Evaluates metric and Christoffel symbols; checks SPD (smallest eigenvalue
// above 1e-10) and throws MetricError otherwise.
ChartFrame make_chart_frame(const RiemannianChart& chart, const VecD& x);

// Christoffel symbols from arbitrary metric jets (used for computed metrics).
std::vector<MatJ> christoffel(const MatJ& G, const MatJ& Ginv);

// Full g-orthonormal frame from coordinate seeds in fixed order.
std::vector<VecJ> orthonormal_frame(const ChartFrame& cf);

// [X,Y]^k = X^j d_j Y^k - Y^j d_j X^k.  Components lose one derivative order.
VecJ lie_bracket(const VecJ& X, const VecJ& Y);

// Levi-Civita covariant derivatives along X (X enters only through its value).
VecJ cov_deriv_vec(const ChartFrame& cf, const VecJ& X, const VecJ& Y);
MatJ cov_deriv_t11(const ChartFrame& cf, const VecJ& X, const MatJ& T);
VecJ cov_deriv_form1(const ChartFrame& cf, const VecJ& X, const VecJ& omega);
MatJ cov_deriv_form2(const ChartFrame& cf, const VecJ& X, const MatJ& Phi);

// Lie derivatives (value level).
MatJ lie_deriv_t11(const VecJ& V, const MatJ& T);
MatJ lie_deriv_metric(const MatJ& G, const VecJ& V);
VecJ lie_deriv_form1(const VecJ& V, const VecJ& omega);

// Differential forms with components over strictly increasing index tuples.
struct FormJ {
  int m = 0, p = 0;
  std::vector<Jet2> c;

  FormJ() = default;
  FormJ(int dim, int degree);

  Jet2& at(std::initializer_list<int> idx);
  const Jet2& at(std::initializer_list<int> idx) const;

  // Applies the form to 1..3 vectors (p must match).
  Jet2 operator()(const VecJ& u) const;
  Jet2 operator()(const VecJ& u, const VecJ& v) const;
  Jet2 operator()(const VecJ& u, const VecJ& v, const VecJ& w) const;
};

int binom(int n, int k);
FormJ ext_deriv(const FormJ& omega);
FormJ wedge_1_2(const VecJ& eta, const FormJ& phi);
FormJ form_from_matrix_antisym(const MatJ& A);  // Phi_ij from a (0,2) matrix
double form_g_norm(const FormJ& omega, const std::vector<VecJ>& frame);

// Laplace-Beltrami of a computed scalar: Delta f = g^ij (f_,ij - Gamma^k_ij f_,k).
double laplace_beltrami(const ChartFrame& cf, const Jet2& f);

// Codifferential, sign convention delta = -trace of nabla omega.
double codifferential_1(const ChartFrame& cf, const VecJ& omega, const std::vector<VecJ>& frame);
VecJ codifferential_2(const ChartFrame& cf, const FormJ& omega, const std::vector<VecJ>& frame);

// Nijenhuis tensor [F,F](X,Y) = F^2[X,Y] + [FX,FY] - F[FX,Y] - F[X,FY].
VecJ nijenhuis_bracket(const MatJ& F, const VecJ& X, const VecJ& Y);

// Directional derivative of a computed scalar along X (value of X . grad s).
Jet2 dirderiv(const VecJ& X, const Jet2& s);

// g(X,Y) as a jet-valued scalar.
Jet2 metric_pair(const MatJ& G, const VecJ& X, const VecJ& Y);

}  // namespace phm
