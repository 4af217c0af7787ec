#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hermet/catalog.hpp"
#include "hermet/rational.hpp"
#include "hermet/rng.hpp"

using namespace hermet;
using namespace hermet::sym;

namespace {

RationalExpr random_poly_expr(Rng& rng, int n, int max_deg, int terms) {
  Poly p(2 * n);
  for (int t = 0; t < terms; ++t) {
    Expo e(2 * n, 0u);
    for (int v = 0; v < 2 * n; ++v)
      e[v] = static_cast<unsigned>(rng.uniform() * (max_deg + 1)) % (max_deg + 1);
    const long num = static_cast<long>(rng.uniform(-6.0, 7.0));
    const long den = 1 + static_cast<long>(rng.uniform(0.0, 3.0));
    p.add_term(e, GaussRat(BigRat(num, den),
                           BigRat(static_cast<long>(rng.uniform(-3.0, 4.0)))));
  }
  return RationalExpr(p);
}

}  // namespace

TEST_CASE("gauss rational arithmetic") {
  GaussRat a(BigRat(1, 2), BigRat(-3, 4));
  GaussRat b(BigRat(2), BigRat(5));
  CHECK(a * b / b == a);
  CHECK((a + b) - b == a);
  CHECK(a * a.inverse() == GaussRat(1));
  CHECK(a.conj().conj() == a);
  // exact dyadic conversion round-trips
  const double x = -0.8203125;
  CHECK(GaussRat::from_double(x).to_complex().real() == x);
}

TEST_CASE("formal wirtinger derivatives") {
  const int n = 1;
  RationalExpr z = z_var(n, 0), zb = zbar_var(n, 0);
  RationalExpr one = rat_const(n, GaussRat(1));

  CHECK(sym_d(z * zb, n, 0) == zb);
  CHECK(sym_dbar(z, n, 0) == rat_const(n, GaussRat(0)));
  CHECK(sym_dbar(z * zb, n, 0) == z);
  // quotient rule: d/dz 1/(z zb) = -1/(z^2 zb)
  CHECK(sym_d(one / (z * zb), n, 0) == -(one / (z * z * zb)));
}

TEST_CASE("derivation laws on random expressions") {
  Rng rng(11);
  const int n = 2;
  for (int trial = 0; trial < 20; ++trial) {
    RationalExpr a = random_poly_expr(rng, n, 2, 4);
    RationalExpr b = random_poly_expr(rng, n, 2, 4);
    const int j = trial % n;
    CHECK(sym_d(a * b, n, j) == sym_d(a, n, j) * b + a * sym_d(b, n, j));
    // mixed partials commute
    CHECK(sym_dbar(sym_d(a, n, j), n, (j + 1) % n) ==
          sym_d(sym_dbar(a, n, (j + 1) % n), n, j));
    // conj-duality
    const auto cm = conj_map(n);
    CHECK(sym_d(a, n, j).conj_swap(cm) == sym_dbar(a.conj_swap(cm), n, j));
  }
}

TEST_CASE("gcd canonicalization") {
  const int n = 1;
  RationalExpr z = z_var(n, 0), zb = zbar_var(n, 0);
  RationalExpr one = rat_const(n, GaussRat(1));
  RationalExpr f = one + z * zb;
  // (f * zb) / (f * f) reduces to zb / f
  CHECK((f * zb) / (f * f) == zb / f);
  // same function built along different routes canonicalizes identically
  RationalExpr a = (z * z * zb) / (z * zb * zb);
  RationalExpr b = z / zb;
  CHECK(a == b);
}

TEST_CASE("matrix inverse is exact") {
  const int n = 1;
  RationalExpr z = z_var(n, 0), zb = zbar_var(n, 0);
  RationalExpr one = rat_const(n, GaussRat(1));

  RationalMatrix id = RationalMatrix::identity(n, 3);
  CHECK(id.inverse() == id);

  RationalMatrix d(n, 2, 2);
  d.at(0, 0) = one + z * zb;
  d.at(1, 1) = one;
  RationalMatrix dinv = d.inverse();
  CHECK(dinv.at(0, 0) == one / (one + z * zb));
  CHECK(dinv.at(1, 1) == one);
  CHECK(d * dinv == RationalMatrix::identity(n, 2));

  RationalMatrix h = counterexample_metric();
  CHECK(h * h.inverse() == RationalMatrix::identity(n, 2));
  CHECK(h.adjugate() * h == [&] {
    RationalMatrix m = RationalMatrix::identity(n, 2);
    for (auto& e : m.entries) e = e * h.det();
    return m;
  }());
}

TEST_CASE("connection and curvature of catalog forms") {
  const int n = 1;
  RationalExpr z = z_var(n, 0), zb = zbar_var(n, 0);
  RationalExpr one = rat_const(n, GaussRat(1));

  // flat
  auto theta_id = sym_connection(RationalMatrix::identity(n, 2));
  CHECK(theta_id[0] == RationalMatrix(n, 2, 2));

  // fubini+: theta = zb/(1+z zb), Theta = 1/(1+z zb)^2
  RationalMatrix fp(n, 1, 1);
  fp.at(0, 0) = one + z * zb;
  CHECK(sym_connection(fp)[0].at(0, 0) == zb / (one + z * zb));
  CHECK(sym_curvature(fp)[0].at(0, 0) == one / ((one + z * zb) * (one + z * zb)));

  // defining relation h theta = dh holds exactly for rational catalog metrics
  for (const char* name : {"fubini+", "fubini-", "lelong", "paper-counterexample"}) {
    GeneratorRef gen{name, name == std::string("paper-counterexample") ? 2 : 1,
                     1, {1.0}, ""};
    auto hm = symbolic_metric(gen);
    REQUIRE(hm.has_value());
    auto theta = sym_connection(*hm);
    CHECK(*hm * theta[0] == hm->derivative(0));
  }
}

TEST_CASE("formal hermitian symmetry of curvature pairing") {
  for (const char* name : {"fubini+", "fubini-", "paper-counterexample"}) {
    GeneratorRef gen{name, name == std::string("paper-counterexample") ? 2 : 1,
                     1, {}, ""};
    auto hm = symbolic_metric(gen);
    REQUIRE(hm.has_value());
    CHECK(hm->is_formal_hermitian());
    auto curv = sym_curvature(*hm);
    RationalMatrix ht = *hm * curv[0];
    CHECK(ht == ht.conj_transpose());  // n = 1: j = k, self-adjoint pairing
  }
}

TEST_CASE("counterexample verification") {
  const CounterexampleReport rep = verify_counterexample();
  CHECK(rep.dh_matches);
  CHECK(rep.inverse_matches);
  CHECK(rep.theta_matches);
  CHECK(rep.norm_identity_matches);
  CHECK(rep.curvature_vanishes_off_origin);
  CHECK(rep.theta21_pole_degree == 2);
  CHECK(rep.non_integrability_flagged);
  CHECK(rep.ok());

  const CounterexampleReport bad = verify_counterexample(/*corrupt_fixture=*/true);
  CHECK_FALSE(bad.ok());
}

TEST_CASE("sampling is exact at dyadic nodes") {
  const int n = 1;
  GridSpec g = make_grid(1, cxd(0.0, 0.0), 1.0, 16);
  RationalExpr zb = zbar_var(n, 0);
  ScalarField s = sample(zb, g);
  for (std::size_t i = 0; i < s.values.size(); ++i)
    CHECK(s.values[i] == std::conj(g.point(i)[0]));

  // theta_21 = -1/z^2 evaluates to -4 at z = 1/2
  RationalMatrix h = counterexample_metric();
  auto theta = sym_connection(h)[0];
  std::vector<GaussRat> pt = {GaussRat(BigRat(1, 2), BigRat(0)),
                              GaussRat(BigRat(1, 2), BigRat(0))};
  CHECK(theta.at(1, 0).eval(pt).to_complex() == cxd(-4.0, 0.0));

  // identity samples to the identity field
  MatrixField idf = sample(RationalMatrix::identity(n, 2), g);
  CHECK(MatC(idf.at(0)) == MatC::Identity(2, 2));

  // poles are masked, not evaluated
  RationalExpr z = z_var(n, 0);
  ScalarField inv = sample(rat_const(n, GaussRat(1)) / z, g);
  CHECK_FALSE(inv.partial);  // cell-centered grid never hits z = 0
}

TEST_CASE("string rendering is stable") {
  RationalMatrix h = counterexample_metric();
  auto theta = sym_connection(h)[0];
  CHECK(theta.str() == "[[1/z, 0]; [-1/z^2, 1/z]]");
}
