#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hermet/hermitian.hpp"
#include "hermet/rng.hpp"

using namespace hermet;

namespace {

MatC random_matrix(Rng& rng, int r) {
  MatC m(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) m(i, j) = rng.complex_in_disc();
  return m;
}

MatC random_hpd(Rng& rng, int r) {
  const MatC m = random_matrix(rng, r);
  return m * m.adjoint() + 0.1 * MatC::Identity(r, r);
}

MatC counterexample_at(cxd z) {
  MatC h(2, 2);
  h(0, 0) = 1.0 + std::norm(z);
  h(0, 1) = z;
  h(1, 0) = std::conj(z);
  h(1, 1) = std::norm(z);
  return h;
}

}  // namespace

TEST_CASE("min eigenvalue and psd test") {
  CHECK(min_eigenvalue(MatC::Identity(2, 2)) == doctest::Approx(1.0));
  CHECK(is_psd(MatC::Identity(2, 2), 1e-9));

  MatC d = MatC::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CHECK(min_eigenvalue(d) == doctest::Approx(-1.0));
  CHECK_FALSE(is_psd(d, 1e-9));

  // 2x2 closed-form oracle: lambda_min = (tr - sqrt(tr^2 - 4 det))/2
  const MatC h = counterexample_at(cxd(0.5, 0.0));
  const double tr = 1.5;
  const double det = 0.0625;  // |z|^4 at z = 1/2
  const double oracle = 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
  CHECK(min_eigenvalue(h) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(is_psd(h));

  MatC bad = MatC::Identity(2, 2);
  bad(0, 1) = cxd(std::nan(""), 0.0);
  CHECK_THROWS_AS(min_eigenvalue(bad), std::invalid_argument);
}

TEST_CASE("adjugate closed forms") {
  MatC a(2, 2);
  a << cxd(1, 2), cxd(3, -1), cxd(0, 1), cxd(-2, 0);
  const MatC adj = adjugate(a);
  CHECK(adj(0, 0) == a(1, 1));
  CHECK(adj(0, 1) == -a(0, 1));
  CHECK(adj(1, 0) == -a(1, 0));
  CHECK(adj(1, 1) == a(0, 0));

  CHECK((adjugate(MatC::Identity(3, 3)) - MatC::Identity(3, 3)).norm() == 0.0);

  // adjugate of the counterexample is |z|^4 h^{-1} with the known entries
  const cxd z(0.3, -0.4);
  const MatC h = counterexample_at(z);
  const MatC adjh = adjugate(h);
  CHECK(std::abs(adjh(0, 0) - cxd(std::norm(z), 0)) < 1e-14);
  CHECK(std::abs(adjh(0, 1) - (-z)) < 1e-14);
  CHECK(std::abs(adjh(1, 0) - (-std::conj(z))) < 1e-14);
  CHECK(std::abs(adjh(1, 1) - cxd(1.0 + std::norm(z), 0)) < 1e-14);
}

TEST_CASE("adjugate identity on random matrices up to rank 5") {
  Rng rng(21);
  for (int r = 1; r <= 5; ++r) {
    for (int trial = 0; trial < 6; ++trial) {
      const MatC a = random_matrix(rng, r);
      const cxd det = a.determinant();
      const MatC lhs = a * adjugate(a);
      CHECK((lhs - det * MatC::Identity(r, r)).norm() < 1e-11 * (1.0 + std::abs(det)));
    }
  }
  // defined for singular input: rank-1 matrix, det = 0
  MatC s(2, 2);
  s << cxd(1, 0), cxd(2, 0), cxd(2, 0), cxd(4, 0);
  CHECK((s * adjugate(s)).norm() < 1e-14);
}

TEST_CASE("loewner order") {
  const MatC I2 = MatC::Identity(2, 2);
  CHECK(loewner_leq(I2, 2.0 * I2, 1e-12));
  CHECK_FALSE(loewner_leq(2.0 * I2, I2, 1e-12));

  MatC a = MatC::Zero(2, 2), b = MatC::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 3;
  b(0, 0) = 2;
  b(1, 1) = 2;
  CHECK_FALSE(loewner_leq(a, b, 1e-12));  // eigenvalues of b-a are +-1
  CHECK_FALSE(loewner_leq(b, a, 1e-12));

  // reflexive at tol >= 0; antisymmetry up to 2 tol
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const MatC m = random_hpd(rng, 3);
    CHECK(loewner_leq(m, m, 0.0));
    const double tol = 1e-9;
    MatC mp = m + 0.5 * tol * MatC::Identity(3, 3);
    if (loewner_leq(m, mp, tol) && loewner_leq(mp, m, tol))
      CHECK(max_eigenvalue(mp - m) <= 2.0 * tol);
  }

  CHECK_THROWS_AS(loewner_leq(MatC::Identity(2, 2), MatC::Identity(3, 3), 0.0),
                  std::invalid_argument);
}

TEST_CASE("dual matrix") {
  CHECK((dual_matrix(MatC::Identity(3, 3), 0.5) - MatC::Identity(3, 3)).norm() < 1e-14);

  MatC d = MatC::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 1;
  const MatC dd = dual_matrix(d, 1e-6);
  CHECK(dd(0, 0) == doctest::Approx(0.25));
  CHECK(dd(1, 1) == doctest::Approx(1.0));

  // counterexample at z = 1/2: transpose of 16 [[0.25, -0.5], [-0.5, 1.25]]
  const MatC h = counterexample_at(cxd(0.5, 0.0));
  const MatC dh = dual_matrix(h, 1e-3);
  CHECK(std::abs(dh(0, 0) - cxd(4.0, 0)) < 1e-12);
  CHECK(std::abs(dh(0, 1) - cxd(-8.0, 0)) < 1e-12);
  CHECK(std::abs(dh(1, 0) - cxd(-8.0, 0)) < 1e-12);
  CHECK(std::abs(dh(1, 1) - cxd(20.0, 0)) < 1e-12);

  // below the floor: singular-metric error
  CHECK_THROWS_AS(dual_matrix(h, 0.1), std::domain_error);
}

TEST_CASE("dual involution and sharpness") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int r = 2 + trial % 3;
    const MatC a = random_hpd(rng, r);
    const MatC da = dual_matrix(a, 1e-12);
    CHECK((dual_matrix(da, 1e-12) - a).norm() < 1e-10 * a.norm());

    // |xi(s)|^2 <= ||xi||^2_dual ||s||^2_a with equality at s = a^{-1} xi^*
    Eigen::VectorXcd xi = rng.unit_vector(r);
    Eigen::VectorXcd v = xi.conjugate();
    const double dual_norm = std::real(v.dot(da * v));
    const Eigen::VectorXcd s_star = a.inverse() * xi.conjugate();
    const cxd pairing = (xi.transpose() * s_star)(0, 0);
    const double s_norm = std::real(s_star.dot(a * s_star));
    CHECK(std::norm(pairing) / s_norm == doctest::Approx(dual_norm).epsilon(1e-8));
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXcd s = rng.unit_vector(r);
      const cxd pr = (xi.transpose() * s)(0, 0);
      const double sn = std::real(s.dot(a * s));
      CHECK(std::norm(pr) <= dual_norm * sn * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("hermitian wrapper symmetrizes and records the defect") {
  MatC a(2, 2);
  a << cxd(1, 0), cxd(2, 1e-14), cxd(2, -3e-14), cxd(4, 0);
  const HermitianMatrix hm(a);
  CHECK(hm.herm_defect > 0.0);
  CHECK((hm.m - hm.m.adjoint()).norm() == 0.0);

  MatC bad(2, 2);
  bad << cxd(1, 0), cxd(2, 0), cxd(5, 0), cxd(4, 0);
  CHECK_THROWS_AS(HermitianMatrix(bad), std::invalid_argument);
}

TEST_CASE("default psd tolerance is scale invariant") {
  const MatC big = 1e6 * MatC::Identity(2, 2);
  CHECK(default_psd_tol(big) > 1e-4);
  CHECK(default_psd_tol(MatC::Identity(2, 2)) == doctest::Approx(3e-9));
}
