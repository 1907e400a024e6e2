#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phm/catalog.hpp"
#include "phm/geometry.hpp"
#include "phm/rng.hpp"

using namespace phm;

namespace {

RiemannianChart euclidean(int n) {
  RiemannianChart c;
  c.label = "euclid";
  for (int i = 0; i < n; ++i) c.coords.push_back("e" + std::to_string(i));
  c.metric.assign(n, std::vector<Expr>(n, Expr::number(0.0)));
  for (int i = 0; i < n; ++i) c.metric[i][i] = Expr::number(1.0);
  for (int i = 0; i < n; ++i) c.box.range.push_back({-1.0, 1.0});
  return c;
}

VecJ coord_field(const ChartFrame& cf, int k) {
  VecJ e(cf.dim(), Jet2(0.0));
  e[k] = Jet2(1.0);
  return e;
}

// Vector field with polynomial components, deterministic coefficients.
VecJ poly_field(const ChartFrame& cf, uint64_t key) {
  const int m = cf.dim();
  VecJ v(m, Jet2(0.0));
  for (int k = 0; k < m; ++k) {
    Jet2 s(rng_sym(key, k, 0));
    for (int i = 0; i < m; ++i)
      s = s + rng_sym(key, k, i + 1) * cf.xj[i] +
          rng_sym(key, k, i + 11) * cf.xj[i] * cf.xj[(i + 1) % m];
    v[k] = s;
  }
  return v;
}

}  // namespace

TEST_CASE("christoffel: euclidean metric vanishes") {
  const RiemannianChart c = euclidean(3);
  const ChartFrame cf = make_chart_frame(c, {0.3, -0.2, 0.9});
  for (int k = 0; k < 3; ++k) CHECK(cf.Gam[k].values().frobenius() == 0.0);
}

TEST_CASE("christoffel: kenmotsu warped product closed form") {
  const Scenario s = catalog_lookup("kenmotsu", {}, false);
  // chart coords (t,x,y), g = dt^2 + e^{2t}(dx^2 + dy^2)
  const ChartFrame cf = make_chart_frame(s.source, {0.0, 0.2, -0.1});
  CHECK(cf.Gam[0](1, 1).value() == doctest::Approx(-1.0).epsilon(1e-14));  // Gamma^t_xx = -e^{2t}
  CHECK(cf.Gam[1](0, 1).value() == doctest::Approx(1.0).epsilon(1e-14));   // Gamma^x_tx = 1
  CHECK(cf.Gam[0](1, 2).value() == doctest::Approx(0.0));                  // Gamma^t_xy = 0
  const ChartFrame cg = make_chart_frame(s.source, {0.37, 0.2, -0.1});
  CHECK(cg.Gam[0](1, 1).value() == doctest::Approx(-std::exp(2 * 0.37)).epsilon(1e-13));
}

TEST_CASE("christoffel: finite-difference oracle on sasakian_r3") {
  const Scenario s = catalog_lookup("sasakian_r3", {}, false);
  const double h = 1e-4;
  for (int trial = 0; trial < 50; ++trial) {
    const VecD x = sample_box(s.source.box, 77, trial);
    const ChartFrame cf = make_chart_frame(s.source, x);
    const int m = 3;
    // dG[l](i,j) by central differences of the metric expressions
    std::vector<MatD> dG(m, MatD(m, m));
    for (int l = 0; l < m; ++l) {
      VecD xp = x, xm = x;
      xp[l] += h;
      xm[l] -= h;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          dG[l](i, j) =
              (s.source.metric[i][j].eval_d(xp) - s.source.metric[i][j].eval_d(xm)) / (2 * h);
    }
    const MatD Gi = cf.Ginv.values();
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double want = 0;
          for (int l = 0; l < m; ++l)
            want += 0.5 * Gi(k, l) * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
          CHECK(cf.Gam[k](i, j).value() == doctest::Approx(want).epsilon(1e-6));
        }
  }
}

TEST_CASE("lie bracket: coordinate fields commute; x d_y vs d_x") {
  const RiemannianChart c = euclidean(2);
  const ChartFrame cf = make_chart_frame(c, {0.4, 0.6});
  const VecJ b = lie_bracket(coord_field(cf, 0), coord_field(cf, 1));
  CHECK(b[0].value() == 0.0);
  CHECK(b[1].value() == 0.0);
  // X = x d_y, Y = d_x: [X, Y] = -d_y
  VecJ X(2, Jet2(0.0));
  X[1] = cf.xj[0];
  const VecJ r = lie_bracket(X, coord_field(cf, 0));
  CHECK(r[0].value() == 0.0);
  CHECK(r[1].value() == -1.0);
}

TEST_CASE("lie bracket: sasakian frame [e1, e2] = 4 d_z") {
  const Scenario s = catalog_lookup("sasakian_r3", {}, false);
  const ChartFrame cf = make_chart_frame(s.source, {0.1, -0.5, 0.3});
  VecJ e1(3, Jet2(0.0)), e2(3, Jet2(0.0));
  e1[1] = Jet2(2.0);                  // 2 d_y
  e2[0] = Jet2(2.0);                  // 2(d_x + y d_z)
  e2[2] = 2.0 * cf.xj[1];
  const VecJ b = lie_bracket(e1, e2);
  CHECK(b[0].value() == doctest::Approx(0.0));
  CHECK(b[1].value() == doctest::Approx(0.0));
  CHECK(b[2].value() == doctest::Approx(4.0));
}

TEST_CASE("covariant derivative: constant tensor on flat chart") {
  const RiemannianChart c = euclidean(3);
  const ChartFrame cf = make_chart_frame(c, {0.0, 0.1, 0.2});
  MatJ T(3, 3);
  T(0, 1) = Jet2(2.0);
  T(2, 0) = Jet2(-1.0);
  const MatJ n = cov_deriv_t11(cf, poly_field(cf, 5), T);
  CHECK(n.values().frobenius() == 0.0);
}

TEST_CASE("covariant derivative: nabla_xi phi vanishes on sasakian, not on skewed") {
  {
    const Scenario s = catalog_lookup("sasakian_r3", {}, false);
    for (int trial = 0; trial < 10; ++trial) {
      const VecD x = sample_box(s.source.box, 31, trial);
      const ChartFrame cf = make_chart_frame(s.source, x);
      const AcsFrame acs = make_acs_frame(cf, *s.acs);
      const MatJ n = cov_deriv_t11(cf, acs.xi, acs.phi);
      CHECK(n.values().frobenius() < 1e-9);
    }
  }
  {
    const Scenario s = catalog_lookup("skewed_fibration", {}, false);
    const VecD x = sample_box(s.source.box, 31, 0);
    const ChartFrame cf = make_chart_frame(s.source, x);
    const AcsFrame acs = make_acs_frame(cf, *s.acs);
    const MatJ n = cov_deriv_t11(cf, acs.xi, acs.phi);
    double worst = 0;
    for (const auto& e : orthonormal_frame(cf)) worst = std::max(worst, g_norm(cf.G, n.apply(e)));
    CHECK(worst > 0.1);
    CHECK(worst == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("lie derivative: flow invariance and the contact field") {
  // V = coordinate field, tensor constant in that coordinate.
  const RiemannianChart c = euclidean(2);
  const ChartFrame cf = make_chart_frame(c, {0.3, 0.8});
  MatJ T(2, 2);
  T(0, 0) = sin(cf.xj[1]);
  T(1, 0) = cf.xj[1] * cf.xj[1];
  const MatJ lt = lie_deriv_t11(coord_field(cf, 0), T);
  CHECK(lt.values().frobenius() == 0.0);

  // L_xi eta = 0 on sasakian_r3.
  const Scenario s = catalog_lookup("sasakian_r3", {}, false);
  const ChartFrame sf = make_chart_frame(s.source, {0.2, -0.7, 0.4});
  const AcsFrame acs = make_acs_frame(sf, *s.acs);
  const VecJ le = lie_deriv_form1(acs.xi, acs.eta);
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(le[i].value()) < 1e-10);

  // (L_xi eta)(d_x) = -1 on skewed_fibration.
  const Scenario sk = catalog_lookup("skewed_fibration", {}, false);
  const ChartFrame kf = make_chart_frame(sk.source, {0.1, -0.2, 0.1});
  const AcsFrame ka = make_acs_frame(kf, *sk.acs);
  const VecJ kle = lie_deriv_form1(ka.xi, ka.eta);
  CHECK(kle[1].value() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("exterior derivative: d(df) = 0 and the catalog one-forms") {
  const Scenario s = catalog_lookup("sasakian_r3", {}, false);
  const ChartFrame cf = make_chart_frame(s.source, {0.3, 0.5, -0.2});
  // omega = df for f = x^2 y + sin(z)
  const Jet2 f = cf.xj[0] * cf.xj[0] * cf.xj[1] + sin(cf.xj[2]);
  FormJ df(3, 1);
  for (int i = 0; i < 3; ++i) df.c[i] = f.dpart(i);
  const FormJ ddf = ext_deriv(df);
  for (const auto& comp : ddf.c) CHECK(std::fabs(comp.value()) < 1e-9);

  // eta = (dz - y dx)/2 has d eta = (1/2) dx ^ dy
  const AcsFrame acs = make_acs_frame(cf, *s.acs);
  FormJ eta(3, 1);
  for (int i = 0; i < 3; ++i) eta.c[i] = acs.eta[i];
  const FormJ deta = ext_deriv(eta);
  CHECK(deta.at({0, 1}).value() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(deta.at({0, 2}).value() == doctest::Approx(0.0));
  CHECK(deta.at({1, 2}).value() == doctest::Approx(0.0));

  // eta = e^x dt on skewed has d eta = e^x dx ^ dt with norm 1 at x = 0.
  const Scenario sk = catalog_lookup("skewed_fibration", {}, false);
  const ChartFrame kf = make_chart_frame(sk.source, {0.2, 0.0, 0.1});
  const AcsFrame ka = make_acs_frame(kf, *sk.acs);
  FormJ keta(3, 1);
  for (int i = 0; i < 3; ++i) keta.c[i] = ka.eta[i];
  const FormJ kd = ext_deriv(keta);
  CHECK(kd.at({0, 1}).value() == doctest::Approx(-1.0).epsilon(1e-12));  // (d eta)_{tx} = -e^x
  CHECK(form_g_norm(kd, orthonormal_frame(kf)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("laplace-beltrami: flat affine, skewed holomorphic pullback, flat battery") {
  const RiemannianChart c = euclidean(3);
  const ChartFrame cf = make_chart_frame(c, {0.2, 0.4, -0.3});
  const Jet2 affine = 2.0 * cf.xj[0] - 3.0 * cf.xj[2] + 1.0;
  CHECK(laplace_beltrami(cf, affine) == doctest::Approx(0.0));

  const Scenario sk = catalog_lookup("skewed_fibration", {}, false);
  for (int trial = 0; trial < 5; ++trial) {
    const ChartFrame kf = make_chart_frame(sk.source, sample_box(sk.source.box, 13, trial));
    CHECK(laplace_beltrami(kf, kf.xj[1]) == doctest::Approx(1.0).epsilon(1e-12));  // Re part
    CHECK(laplace_beltrami(kf, kf.xj[2]) == doctest::Approx(0.0));                 // Im part
  }

  // Holomorphic battery members on flat C^2 are harmonic.
  const RiemannianChart c4 = euclidean(4);
  const ChartFrame f4 = make_chart_frame(c4, {0.3, -0.2, 0.5, 0.1});
  const CJet z1{f4.xj[0], f4.xj[1]}, z2{f4.xj[2], f4.xj[3]};
  for (const CJet& f : {z1, z2, z1 * z1, z1 * z2, exp(z1)}) {
    CHECK(std::fabs(laplace_beltrami(f4, f.re)) < 1e-10);
    CHECK(std::fabs(laplace_beltrami(f4, f.im)) < 1e-10);
  }
}

TEST_CASE("codifferential: flat constant form, sasakian delta eta, kenmotsu delta dt") {
  const RiemannianChart c = euclidean(3);
  const ChartFrame cf = make_chart_frame(c, {0.1, 0.2, 0.3});
  VecJ omega(3, Jet2(0.0));
  omega[0] = Jet2(3.0);
  omega[2] = Jet2(-2.0);
  CHECK(codifferential_1(cf, omega, orthonormal_frame(cf)) == doctest::Approx(0.0));

  const Scenario s = catalog_lookup("sasakian_r3", {}, false);
  for (int trial = 0; trial < 5; ++trial) {
    const ChartFrame sf = make_chart_frame(s.source, sample_box(s.source.box, 47, trial));
    const AcsFrame acs = make_acs_frame(sf, *s.acs);
    CHECK(std::fabs(codifferential_1(sf, acs.eta, orthonormal_frame(sf))) < 1e-9);
  }

  // delta(dt) on the kenmotsu chart at t = 0: the trace of nabla dt over the
  // unit frame is +2, so delta = -trace = -2 (sign fixed by the stated
  // convention; the magnitude is the warped-product value).
  const Scenario k = catalog_lookup("kenmotsu", {}, false);
  const ChartFrame kf = make_chart_frame(k.source, {0.0, 0.3, -0.2});
  VecJ dt(3, Jet2(0.0));
  dt[0] = Jet2(1.0);
  const double delta = codifferential_1(kf, dt, orthonormal_frame(kf));
  CHECK(delta == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::fabs(delta) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("invariants: torsion freeness and metric compatibility") {
  const Scenario s = catalog_lookup("sasakian_r3", {}, false);
  for (int trial = 0; trial < 20; ++trial) {
    const ChartFrame cf = make_chart_frame(s.source, sample_box(s.source.box, 99, trial));
    const VecJ X = poly_field(cf, 1000 + trial), Y = poly_field(cf, 2000 + trial);
    const VecJ Z = poly_field(cf, 3000 + trial);
    // nabla_X Y - nabla_Y X - [X, Y] = 0
    const VecJ torsion =
        vec_sub(vec_sub(cov_deriv_vec(cf, X, Y), cov_deriv_vec(cf, Y, X)), lie_bracket(X, Y));
    for (const auto& t : torsion) CHECK(std::fabs(t.value()) < 1e-9);
    // X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)
    const Jet2 gyz = metric_pair(cf.G, Y, Z);
    const double lhs = dirderiv(X, gyz).value();
    const double rhs = value_of(inner(cf.G, cov_deriv_vec(cf, X, Y), Z)) +
                       value_of(inner(cf.G, Y, cov_deriv_vec(cf, X, Z)));
    CHECK(std::fabs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("invariants: d^2 = 0 on random 1- and 2-forms") {
  const Scenario s = catalog_lookup("kenmotsu", {}, false);
  for (int trial = 0; trial < 10; ++trial) {
    const ChartFrame cf = make_chart_frame(s.source, sample_box(s.source.box, 55, trial));
    FormJ omega(3, 1);
    const VecJ w = poly_field(cf, 4000 + trial);
    for (int i = 0; i < 3; ++i) omega.c[i] = w[i];
    const FormJ dd = ext_deriv(ext_deriv(omega));
    for (const auto& comp : dd.c) CHECK(std::fabs(comp.value()) < 1e-9);
  }
}

TEST_CASE("invariants: covariant derivative is tensorial in the direction") {
  const Scenario s = catalog_lookup("sasakian_r3", {}, false);
  const ChartFrame cf = make_chart_frame(s.source, {0.4, 0.1, -0.6});
  const AcsFrame acs = make_acs_frame(cf, *s.acs);
  const VecJ X = poly_field(cf, 61);
  const Jet2 f = sin(cf.xj[0]) + cf.xj[1] * cf.xj[2];
  VecJ fX(3);
  for (int i = 0; i < 3; ++i) fX[i] = f * X[i];
  const MatJ a = cov_deriv_t11(cf, fX, acs.phi);
  const MatJ b = cov_deriv_t11(cf, X, acs.phi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(a(i, j).value() == doctest::Approx(f.value() * b(i, j).value()).epsilon(1e-12));
}
