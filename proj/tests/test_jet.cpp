#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "phm/jet.hpp"
#include "phm/rng.hpp"

using namespace phm;

namespace {

// Central finite-difference oracle for gradients and Hessians (step 1e-4).
struct FdOracle {
  std::function<double(const std::vector<double>&)> f;
  double step = 1e-4;

  double grad(const std::vector<double>& x, int i) const {
    auto xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    return (f(xp) - f(xm)) / (2 * step);
  }
  double hess(const std::vector<double>& x, int i, int j) const {
    if (i == j) {
      auto xp = x, xm = x;
      xp[i] += step;
      xm[i] -= step;
      return (f(xp) - 2 * f(x) + f(xm)) / (step * step);
    }
    auto xpp = x, xpm = x, xmp = x, xmm = x;
    xpp[i] += step;
    xpp[j] += step;
    xpm[i] += step;
    xpm[j] -= step;
    xmp[i] -= step;
    xmp[j] += step;
    xmm[i] -= step;
    xmm[j] -= step;
    return (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4 * step * step);
  }
};

std::vector<Jet2> seed(const std::vector<double>& x) {
  std::vector<Jet2> r;
  for (size_t i = 0; i < x.size(); ++i)
    r.push_back(Jet2::variable(x[i], static_cast<int>(i), static_cast<int>(x.size())));
  return r;
}

double relerr(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace

TEST_CASE("square function jet at x = 3") {
  const Jet2 x = Jet2::variable(3.0, 0, 1);
  const Jet2 y = x * x;
  CHECK(y.value() == 9.0);
  CHECK(y.deriv(0) == 6.0);
  CHECK(y.second(0, 0) == 2.0);
}

TEST_CASE("exp(2x)*y jet at (0,1)") {
  const Jet2 x = Jet2::variable(0.0, 0, 2);
  const Jet2 y = Jet2::variable(1.0, 1, 2);
  const Jet2 f = exp(2.0 * x) * y;
  CHECK(f.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.deriv(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.deriv(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.second(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(f.second(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.second(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("chain rule matches finite differences on a primitive battery") {
  using Fn = std::pair<std::function<double(const std::vector<double>&)>,
                       std::function<Jet2(const std::vector<Jet2>&)>>;
  const std::vector<Fn> battery = {
      {[](const std::vector<double>& x) { return std::sin(x[0]) * std::cos(x[1]) + x[2]; },
       [](const std::vector<Jet2>& x) { return sin(x[0]) * cos(x[1]) + x[2]; }},
      {[](const std::vector<double>& x) { return std::exp(x[0] * x[1]) / (2.0 + std::sin(x[2])); },
       [](const std::vector<Jet2>& x) { return exp(x[0] * x[1]) / (2.0 + sin(x[2])); }},
      {[](const std::vector<double>& x) {
         return std::log(2.0 + x[0]) * std::sqrt(3.0 + x[1]) + std::tanh(x[2]);
       },
       [](const std::vector<Jet2>& x) { return log(2.0 + x[0]) * sqrt(3.0 + x[1]) + tanh(x[2]); }},
      {[](const std::vector<double>& x) {
         return std::pow(1.0 + x[0] * x[0], 3) + std::atan(x[1] * x[2]);
       },
       [](const std::vector<Jet2>& x) { return pow_int(1.0 + x[0] * x[0], 3) + atan(x[1] * x[2]); }},
      {[](const std::vector<double>& x) {
         return std::sinh(x[0]) * std::cosh(x[1]) - std::tan(0.3 * x[2]);
       },
       [](const std::vector<Jet2>& x) { return sinh(x[0]) * cosh(x[1]) - tan(0.3 * x[2]); }},
  };
  for (size_t b = 0; b < battery.size(); ++b) {
    FdOracle oracle{battery[b].first};
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(3);
      for (int i = 0; i < 3; ++i) x[i] = rng_sym(17, trial + 100 * b, i);
      const Jet2 j = battery[b].second(seed(x));
      CHECK(relerr(j.value(), battery[b].first(x)) < 1e-12);
      for (int i = 0; i < 3; ++i) CHECK(relerr(j.deriv(i), oracle.grad(x, i)) < 1e-6);
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k <= i; ++k) CHECK(relerr(j.second(i, k), oracle.hess(x, i, k)) < 1e-6);
    }
  }
}

TEST_CASE("product rule is exact, not just approximate") {
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> x = {rng_sym(3, trial, 0), rng_sym(3, trial, 1)};
    const auto s = seed(x);
    const Jet2 f = sin(s[0]) + s[1] * s[1];
    const Jet2 g = exp(s[1]) - s[0];
    const Jet2 fg = f * g;
    for (int i = 0; i < 2; ++i)
      CHECK(fg.deriv(i) ==
            doctest::Approx(f.deriv(i) * g.value() + f.value() * g.deriv(i)).epsilon(1e-15));
  }
}

TEST_CASE("hessian is stored symmetric") {
  const auto s = seed({0.3, -0.7, 0.2});
  const Jet2 f = exp(s[0] * s[1]) * sin(s[2]) + pow_int(s[1], 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(f.second(i, j) == f.second(j, i));
}

TEST_CASE("integer powers handle edge cases") {
  const Jet2 x0 = Jet2::variable(0.0, 0, 1);
  CHECK(pow_int(x0, 1).deriv(0) == 1.0);
  CHECK(pow_int(x0, 2).second(0, 0) == 2.0);
  CHECK(pow_int(x0, 0).value() == 1.0);
  const Jet2 xn = Jet2::variable(-2.0, 0, 1);
  CHECK(pow_int(xn, 3).value() == -8.0);
  CHECK(pow_int(xn, 3).deriv(0) == 12.0);
  CHECK(pow_int(xn, -1).value() == -0.5);
  CHECK_THROWS_AS(pow_int(x0, -2), DomainError);
}

TEST_CASE("domain errors name the primitive") {
  const Jet2 x = Jet2::variable(-1.0, 0, 1);
  try {
    (void)log(x);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.primitive == "log");
  }
  CHECK_THROWS_AS(sqrt(x), DomainError);
  CHECK_THROWS_AS(Jet2(1.0) / Jet2::constant(0.0, 1), DomainError);
}

TEST_CASE("derivative extraction lowers the order and forbids stale reads") {
  const auto s = seed({0.4, 1.2});
  const Jet2 f = exp(s[0]) * s[1];
  const Jet2 fx = f.dpart(0);
  CHECK(fx.order() == 1);
  CHECK(fx.value() == doctest::Approx(std::exp(0.4) * 1.2));
  CHECK(fx.deriv(1) == doctest::Approx(std::exp(0.4)));
  CHECK_THROWS_AS(fx.second(0, 0), std::logic_error);
  const Jet2 fxy = fx.dpart(1);
  CHECK(fxy.order() == 0);
  CHECK(fxy.value() == doctest::Approx(std::exp(0.4)));
  CHECK_THROWS_AS(fxy.deriv(0), std::logic_error);
}

TEST_CASE("orders propagate through arithmetic") {
  const auto s = seed({0.4, 1.2});
  const Jet2 f = exp(s[0]) * s[1];
  const Jet2 lowered = f.dpart(0) * s[1] + s[0];
  CHECK(lowered.order() == 1);
  CHECK_THROWS_AS(lowered.second(0, 0), std::logic_error);
}

TEST_CASE("complex jets: exp and multiplication") {
  const auto s = seed({0.3, 0.5});
  const CJet z{s[0], s[1]};
  const CJet w = exp(z * z);
  // d/dx Re(exp(z^2)) at (x,y): exp(x^2-y^2) derivative checks via FD
  FdOracle re{[](const std::vector<double>& v) {
    const double a = v[0] * v[0] - v[1] * v[1], b = 2 * v[0] * v[1];
    return std::exp(a) * std::cos(b);
  }};
  CHECK(relerr(w.re.deriv(0), re.grad({0.3, 0.5}, 0)) < 1e-6);
  CHECK(relerr(w.re.second(0, 1), re.hess({0.3, 0.5}, 0, 1)) < 1e-6);
}
