#include "phm/geometry.hpp"

#include <algorithm>

namespace phm {

VecJ seed_point(const VecD& x) {
  const int m = static_cast<int>(x.size());
  VecJ xj(m);
  for (int i = 0; i < m; ++i) xj[i] = Jet2::variable(x[i], i, m);
  return xj;
}

std::vector<MatJ> christoffel(const MatJ& G, const MatJ& Ginv) {
  const int m = G.rows();
  std::vector<MatJ> Gam(m, MatJ(m, m));
  // dG[l](i,j) = d_l g_ij as an order-1 jet
  std::vector<MatJ> dG(m, MatJ(m, m));
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dG[l](i, j) = G(i, j).dpart(l);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        Jet2 s(0.0);
        for (int l = 0; l < m; ++l)
          s = s + Ginv(k, l) * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
        s = 0.5 * s;
        Gam[k](i, j) = s;
        Gam[k](j, i) = s;
      }
  return Gam;
}

ChartFrame make_chart_frame(const RiemannianChart& chart, const VecD& x) {
  if (static_cast<int>(x.size()) != chart.dim())
    throw ShapeError("make_chart_frame: point dimension mismatch for chart " + chart.label);
  ChartFrame cf;
  cf.chart = &chart;
  cf.x = x;
  cf.xj = seed_point(x);
  const int m = chart.dim();
  cf.G = MatJ(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cf.G(i, j) = chart.metric[i][j].eval_j(cf.xj);
  // symmetrize to guard against textual asymmetry in user input
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      const Jet2 s = 0.5 * (cf.G(i, j) + cf.G(j, i));
      cf.G(i, j) = s;
      cf.G(j, i) = s;
    }
  if (smallest_eigenvalue_sym(cf.G.values()) <= 1e-10)
    throw MetricError("metric degenerate on chart '" + chart.label + "'");
  cf.Ginv = cf.G.inverse();
  cf.Gam = christoffel(cf.G, cf.Ginv);
  return cf;
}

std::vector<VecJ> orthonormal_frame(const ChartFrame& cf) {
  const int m = cf.dim();
  std::vector<VecJ> seeds(m, VecJ(m, Jet2(0.0)));
  for (int i = 0; i < m; ++i) seeds[i][i] = Jet2(1.0);
  return gram_schmidt(cf.G, seeds);
}

VecJ lie_bracket(const VecJ& X, const VecJ& Y) {
  const int m = static_cast<int>(X.size());
  if (Y.size() != X.size()) throw ShapeError("lie_bracket: dimension mismatch");
  VecJ r(m, Jet2(0.0));
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) r[k] = r[k] + X[j] * Y[k].dpart(j) - Y[j] * X[k].dpart(j);
  return r;
}

VecJ cov_deriv_vec(const ChartFrame& cf, const VecJ& X, const VecJ& Y) {
  const int m = cf.dim();
  VecJ r(m, Jet2(0.0));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      Jet2 t = Y[k].dpart(i);
      for (int l = 0; l < m; ++l) t = t + cf.Gam[k](i, l) * Y[l];
      r[k] = r[k] + X[i] * t;
    }
  return r;
}

MatJ cov_deriv_t11(const ChartFrame& cf, const VecJ& X, const MatJ& T) {
  const int m = cf.dim();
  MatJ r(m, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) {
      Jet2 s(0.0);
      for (int i = 0; i < m; ++i) {
        Jet2 t = T(k, j).dpart(i);
        for (int l = 0; l < m; ++l)
          t = t + cf.Gam[k](i, l) * T(l, j) - cf.Gam[l](i, j) * T(k, l);
        s = s + X[i] * t;
      }
      r(k, j) = s;
    }
  return r;
}

VecJ cov_deriv_form1(const ChartFrame& cf, const VecJ& X, const VecJ& omega) {
  const int m = cf.dim();
  VecJ r(m, Jet2(0.0));
  for (int j = 0; j < m; ++j) {
    Jet2 s(0.0);
    for (int i = 0; i < m; ++i) {
      Jet2 t = omega[j].dpart(i);
      for (int l = 0; l < m; ++l) t = t - cf.Gam[l](i, j) * omega[l];
      s = s + X[i] * t;
    }
    r[j] = s;
  }
  return r;
}

MatJ cov_deriv_form2(const ChartFrame& cf, const VecJ& X, const MatJ& Phi) {
  const int m = cf.dim();
  MatJ r(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      Jet2 s(0.0);
      for (int i = 0; i < m; ++i) {
        Jet2 t = Phi(j, k).dpart(i);
        for (int l = 0; l < m; ++l)
          t = t - cf.Gam[l](i, j) * Phi(l, k) - cf.Gam[l](i, k) * Phi(j, l);
        s = s + X[i] * t;
      }
      r(j, k) = s;
    }
  return r;
}

MatJ lie_deriv_t11(const VecJ& V, const MatJ& T) {
  const int m = static_cast<int>(V.size());
  MatJ r(m, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) {
      Jet2 s(0.0);
      for (int i = 0; i < m; ++i)
        s = s + V[i] * T(k, j).dpart(i) - V[k].dpart(i) * T(i, j) + V[i].dpart(j) * T(k, i);
      r(k, j) = s;
    }
  return r;
}

MatJ lie_deriv_metric(const MatJ& G, const VecJ& V) {
  const int m = static_cast<int>(V.size());
  MatJ r(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet2 s(0.0);
      for (int k = 0; k < m; ++k)
        s = s + V[k] * G(i, j).dpart(k) + V[k].dpart(i) * G(k, j) + V[k].dpart(j) * G(i, k);
      r(i, j) = s;
    }
  return r;
}

VecJ lie_deriv_form1(const VecJ& V, const VecJ& omega) {
  const int m = static_cast<int>(V.size());
  VecJ r(m, Jet2(0.0));
  for (int j = 0; j < m; ++j) {
    Jet2 s(0.0);
    for (int i = 0; i < m; ++i)
      s = s + V[i] * omega[j].dpart(i) + V[i].dpart(j) * omega[i];
    r[j] = s;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Differential forms

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

namespace {
// Rank of a strictly increasing tuple in lexicographic enumeration.
int tuple_rank(int m, int p, const int* idx) {
  int rank = 0, prev = -1;
  for (int a = 0; a < p; ++a) {
    for (int v = prev + 1; v < idx[a]; ++v) rank += binom(m - 1 - v, p - 1 - a);
    prev = idx[a];
  }
  return rank;
}
// Advances an increasing tuple; returns false when exhausted.
bool next_tuple(int m, int p, int* idx) {
  for (int a = p - 1; a >= 0; --a) {
    if (idx[a] < m - p + a) {
      ++idx[a];
      for (int b = a + 1; b < p; ++b) idx[b] = idx[b - 1] + 1;
      return true;
    }
  }
  return false;
}
void first_tuple(int p, int* idx) {
  for (int a = 0; a < p; ++a) idx[a] = a;
}
}  // namespace

FormJ::FormJ(int dim, int degree) : m(dim), p(degree), c(binom(dim, degree), Jet2(0.0)) {}

Jet2& FormJ::at(std::initializer_list<int> idx) {
  std::vector<int> v(idx);
  return c[tuple_rank(m, p, v.data())];
}
const Jet2& FormJ::at(std::initializer_list<int> idx) const {
  std::vector<int> v(idx);
  return c[tuple_rank(m, p, v.data())];
}

Jet2 FormJ::operator()(const VecJ& u) const {
  Jet2 s(0.0);
  for (int i = 0; i < m; ++i) s = s + c[i] * u[i];
  return s;
}
Jet2 FormJ::operator()(const VecJ& u, const VecJ& v) const {
  Jet2 s(0.0);
  int idx[2];
  first_tuple(2, idx);
  if (p != 2) throw ShapeError("FormJ: arity mismatch");
  if (m < 2) return s;
  do {
    const int i = idx[0], j = idx[1];
    s = s + at({i, j}) * (u[i] * v[j] - u[j] * v[i]);
  } while (next_tuple(m, 2, idx));
  return s;
}
Jet2 FormJ::operator()(const VecJ& u, const VecJ& v, const VecJ& w) const {
  if (p != 3) throw ShapeError("FormJ: arity mismatch");
  Jet2 s(0.0);
  int idx[3];
  first_tuple(3, idx);
  if (m < 3) return s;
  do {
    const int i = idx[0], j = idx[1], k = idx[2];
    const Jet2 det = u[i] * (v[j] * w[k] - v[k] * w[j]) - u[j] * (v[i] * w[k] - v[k] * w[i]) +
                     u[k] * (v[i] * w[j] - v[j] * w[i]);
    s = s + at({i, j, k}) * det;
  } while (next_tuple(m, 3, idx));
  return s;
}

FormJ ext_deriv(const FormJ& omega) {
  FormJ d(omega.m, omega.p + 1);
  if (omega.p + 1 > omega.m) return d;
  std::vector<int> idx(omega.p + 1);
  first_tuple(omega.p + 1, idx.data());
  std::vector<int> sub(std::max(1, omega.p));
  int rank = 0;
  do {
    Jet2 s(0.0);
    for (int a = 0; a <= omega.p; ++a) {
      int sp = 0;
      for (int b = 0; b <= omega.p; ++b)
        if (b != a) sub[sp++] = idx[b];
      const Jet2& comp = omega.c[tuple_rank(omega.m, omega.p, sub.data())];
      const Jet2 term = comp.dpart(idx[a]);
      s = (a % 2 == 0) ? s + term : s - term;
    }
    d.c[rank++] = s;
  } while (next_tuple(omega.m, omega.p + 1, idx.data()));
  return d;
}

FormJ wedge_1_2(const VecJ& eta, const FormJ& phi) {
  const int m = phi.m;
  FormJ w(m, 3);
  int idx[3];
  first_tuple(3, idx);
  if (binom(m, 3) == 0) return w;
  do {
    const int i = idx[0], j = idx[1], k = idx[2];
    w.at({i, j, k}) = eta[i] * phi.at({j, k}) - eta[j] * phi.at({i, k}) + eta[k] * phi.at({i, j});
  } while (next_tuple(m, 3, idx));
  return w;
}

FormJ form_from_matrix_antisym(const MatJ& A) {
  const int m = A.rows();
  FormJ f(m, 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) f.at({i, j}) = 0.5 * (A(i, j) - A(j, i));
  return f;
}

double form_g_norm(const FormJ& omega, const std::vector<VecJ>& frame) {
  double s = 0.0;
  const int m = static_cast<int>(frame.size());
  if (omega.p == 1) {
    for (int a = 0; a < m; ++a) {
      const double v = omega(frame[a]).value();
      s += v * v;
    }
  } else if (omega.p == 2) {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const double v = omega(frame[a], frame[b]).value();
        s += v * v;
      }
  } else if (omega.p == 3) {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        for (int d = b + 1; d < m; ++d) {
          const double v = omega(frame[a], frame[b], frame[d]).value();
          s += v * v;
        }
  } else {
    throw ShapeError("form_g_norm: unsupported degree");
  }
  return std::sqrt(s);
}

double laplace_beltrami(const ChartFrame& cf, const Jet2& f) {
  const int m = cf.dim();
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double t = f.second(i, j);
      for (int k = 0; k < m; ++k) t -= cf.Gam[k](i, j).value() * f.deriv(k);
      s += cf.Ginv(i, j).value() * t;
    }
  return s;
}

double codifferential_1(const ChartFrame& cf, const VecJ& omega, const std::vector<VecJ>& frame) {
  double s = 0.0;
  for (const auto& e : frame) {
    const VecJ nabla = cov_deriv_form1(cf, e, omega);
    Jet2 t(0.0);
    for (int j = 0; j < cf.dim(); ++j) t = t + nabla[j] * e[j];
    s += t.value();
  }
  return -s;
}

VecJ codifferential_2(const ChartFrame& cf, const FormJ& omega, const std::vector<VecJ>& frame) {
  const int m = cf.dim();
  MatJ M(m, m);
  int idx[2] = {0, 1};
  if (omega.p != 2) throw ShapeError("codifferential_2: degree must be 2");
  VecJ r(m, Jet2(0.0));
  if (m < 2) return r;
  first_tuple(2, idx);
  do {
    M(idx[0], idx[1]) = omega.c[tuple_rank(m, 2, idx)];
    M(idx[1], idx[0]) = -omega.c[tuple_rank(m, 2, idx)];
  } while (next_tuple(m, 2, idx));
  for (const auto& e : frame) {
    const MatJ nabla = cov_deriv_form2(cf, e, M);
    for (int j = 0; j < m; ++j) {
      Jet2 t(0.0);
      for (int i = 0; i < m; ++i) t = t + e[i] * nabla(i, j);
      r[j] = r[j] - t;
    }
  }
  return r;
}

VecJ nijenhuis_bracket(const MatJ& F, const VecJ& X, const VecJ& Y) {
  const VecJ FX = F.apply(X), FY = F.apply(Y);
  const VecJ t1 = F.apply(F.apply(lie_bracket(X, Y)));
  const VecJ t2 = lie_bracket(FX, FY);
  const VecJ t3 = F.apply(lie_bracket(FX, Y));
  const VecJ t4 = F.apply(lie_bracket(X, FY));
  return vec_sub(vec_sub(vec_add(t1, t2), t3), t4);
}

Jet2 dirderiv(const VecJ& X, const Jet2& s) {
  Jet2 r(0.0);
  for (size_t i = 0; i < X.size(); ++i) r = r + X[i] * s.dpart(static_cast<int>(i));
  return r;
}

Jet2 metric_pair(const MatJ& G, const VecJ& X, const VecJ& Y) { return inner(G, X, Y); }

}  // namespace phm
