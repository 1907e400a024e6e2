#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phm/linalg.hpp"
#include "phm/rng.hpp"

using namespace phm;

namespace {

MatD random_matrix(int n, uint64_t key) {
  MatD A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng_sym(key, i, j);
  return A;
}

// Well-conditioned SPD matrix: A^T A + n I.
MatD random_spd(int n, uint64_t key) {
  const MatD A = random_matrix(n, key);
  MatD S = A.transposed() * A;
  for (int i = 0; i < n; ++i) S(i, i) += n;
  return S;
}

}  // namespace

TEST_CASE("matrix identities on random well-conditioned input") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 4;
    const MatD A = random_spd(n, 100 + trial);
    const MatD B = random_matrix(n, 200 + trial);
    CHECK((A * B).transposed().frobenius() ==
          doctest::Approx((B.transposed() * A.transposed()).frobenius()).epsilon(1e-13));
    const MatD I = A * A.inverse();
    CHECK((I - MatD::identity(n)).frobenius() < 1e-12);
    CHECK(A.frobenius() == doctest::Approx(A.transposed().frobenius()).epsilon(1e-13));
  }
}

TEST_CASE("inverse differentiates correctly through jets") {
  // d/dx of (1/(1+x)) is -1/(1+x)^2; check through the generic Gauss-Jordan.
  MatJ A(1, 1);
  A(0, 0) = 1.0 + Jet2::variable(0.5, 0, 1);
  const MatJ inv = A.inverse();
  CHECK(inv(0, 0).value() == doctest::Approx(1.0 / 1.5));
  CHECK(inv(0, 0).deriv(0) == doctest::Approx(-1.0 / 2.25));
  CHECK(inv(0, 0).second(0, 0) == doctest::Approx(2.0 / 3.375));
}

TEST_CASE("commutator norm: identity commutes") {
  const MatD I = MatD::identity(3);
  const MatD B = random_matrix(3, 7);
  CHECK(commutator_norm(I, B) == 0.0);
}

TEST_CASE("commutator norm: frozen 2x2 value sqrt(10)") {
  MatD A(2, 2), B(2, 2);
  A(0, 0) = 2;
  A(0, 1) = 1;
  A(1, 0) = 1;
  A(1, 1) = 1;
  B(0, 0) = 0;
  B(0, 1) = -1;
  B(1, 0) = 1;
  B(1, 1) = 0;
  CHECK(commutator_norm(A, B) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
}

TEST_CASE("commutator norm: symmetry and self-commutation") {
  for (int trial = 0; trial < 20; ++trial) {
    const MatD A = random_matrix(3, 300 + trial);
    const MatD B = random_matrix(3, 400 + trial);
    CHECK(commutator_norm(A, B) == doctest::Approx(commutator_norm(B, A)).epsilon(1e-14));
    CHECK(commutator_norm(A, A) == 0.0);
  }
  MatD A(2, 2), B(3, 3);
  CHECK_THROWS_AS(commutator_norm(A, B), ShapeError);
}

TEST_CASE("gram-schmidt: identity gram, standard seeds") {
  const MatD I = MatD::identity(3);
  std::vector<VecD> seeds = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto out = gram_schmidt(I, seeds);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(inner(I, out[a], out[b]) == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-15));
  CHECK(out[0][0] == doctest::Approx(1.0));
}

TEST_CASE("gram-schmidt: diag(4,1) rescales and projects") {
  MatD G(2, 2);
  G(0, 0) = 4;
  G(1, 1) = 1;
  std::vector<VecD> seeds = {{1, 0}, {1, 1}};
  const auto out = gram_schmidt(G, seeds);
  CHECK(out[0][0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out[0][1] == doctest::Approx(0.0));
  CHECK(out[1][0] == doctest::Approx(0.0));
  CHECK(out[1][1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gram-schmidt: orthonormality to 1e-12 on random SPD grams") {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const MatD G = random_spd(n, 500 + trial);
    std::vector<VecD> seeds;
    for (int i = 0; i < n; ++i) {
      VecD e(n, 0.0);
      e[i] = 1.0;
      seeds.push_back(e);
    }
    const auto out = gram_schmidt(G, seeds);
    REQUIRE(out.size() == static_cast<size_t>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        CHECK(std::fabs(inner(G, out[a], out[b]) - (a == b ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("gram-schmidt: dependent seeds raise or drop") {
  const MatD I = MatD::identity(2);
  std::vector<VecD> seeds = {{1, 0}, {2, 0}};
  CHECK_THROWS_AS(gram_schmidt(I, seeds), DegeneracyError);
  GramSchmidtOptions opt;
  opt.drop_degenerate = true;
  const auto out = gram_schmidt(I, seeds, opt);
  CHECK(out.size() == 1);
}

TEST_CASE("symmetric eigenvalue range and determinant") {
  MatD D(3, 3);
  D(0, 0) = 4;
  D(1, 1) = 0.5;
  D(2, 2) = 2;
  const auto [lo, hi] = sym_eigen_range(D);
  CHECK(lo == doctest::Approx(0.5));
  CHECK(hi == doctest::Approx(4.0));
  CHECK(det(D) == doctest::Approx(4.0));
  for (int trial = 0; trial < 10; ++trial) {
    const MatD S = random_spd(4, 900 + trial);
    CHECK(smallest_eigenvalue_sym(S) > 0);
    CHECK(det(S) > 0);
  }
}
