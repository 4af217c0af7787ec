#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hermet/grid.hpp"
#include "hermet/rng.hpp"

using namespace hermet;

namespace {

cxd poly_eval(const std::vector<std::pair<std::pair<int, int>, cxd>>& terms, cxd z) {
  cxd acc(0.0, 0.0);
  for (const auto& [e, c] : terms) {
    cxd t = c;
    for (int k = 0; k < e.first; ++k) t *= z;
    for (int k = 0; k < e.second; ++k) t *= std::conj(z);
    acc += t;
  }
  return acc;
}

using PolyZZb = std::vector<std::pair<std::pair<int, int>, cxd>>;

PolyZZb random_poly(Rng& rng, int max_deg) {
  PolyZZb p;
  for (int a = 0; a <= max_deg; ++a)
    for (int b = 0; a + b <= max_deg; ++b)
      p.push_back({{a, b}, rng.complex_in_disc()});
  return p;
}

PolyZZb d_dz(const PolyZZb& p) {
  PolyZZb out;
  for (const auto& [e, c] : p)
    if (e.first > 0) out.push_back({{e.first - 1, e.second}, c * double(e.first)});
  return out;
}

double sup_err(const ScalarField& a, const std::function<cxd(cxd)>& expect) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (!a.valid_at(i)) continue;
    worst = std::max(worst, std::abs(a.values[i] - expect(a.spec.point(i)[0])));
  }
  return worst;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(1, cxd(0, 0), 1.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, cxd(0, 0), 1.0, 9), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, cxd(0, 0), -1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, cxd(0, 0), 1.0, 8, 4), std::invalid_argument);
  GridSpec g = make_grid(2, cxd(0.1, -0.2), 0.5, 16);
  g.validate();
  CHECK(g.num_nodes() == 16u * 16u * 16u * 16u);
  CHECK(g.spacing[0] == doctest::Approx(1.0 / 16.0));
  CHECK(mask_count(g, interior_mask(g)) == 12u * 12u * 12u * 12u);
}

TEST_CASE("expanded grid reproduces coordinates bit-identically") {
  GridSpec g = make_grid(1, cxd(0.3, 0.1), 0.7, 32);
  GridSpec e = expanded_grid(g, {5});
  for (int k = 0; k < 32; ++k) {
    CHECK(g.coord(0, k) == e.coord(0, k + 5));
    CHECK(g.coord(1, k) == e.coord(1, k + 5));
  }
}

TEST_CASE("wirtinger derivatives: exact on low degree") {
  GridSpec g = make_grid(1, cxd(0, 0), 0.9, 64);
  auto idf = make_scalar_field(g, [](const std::vector<cxd>& z) { return z[0]; });
  auto cjf = make_scalar_field(g, [](const std::vector<cxd>& z) { return std::conj(z[0]); });
  auto nrm = make_scalar_field(g, [](const std::vector<cxd>& z) { return cxd(std::norm(z[0]), 0); });

  CHECK(sup_err(wirtinger_d(idf, 0), [](cxd) { return cxd(1, 0); }) < 1e-13);
  CHECK(sup_err(wirtinger_d(cjf, 0), [](cxd) { return cxd(0, 0); }) < 1e-13);
  CHECK(sup_err(wirtinger_d(nrm, 0), [](cxd z) { return std::conj(z); }) < 1e-13);
  CHECK(sup_err(wirtinger_dbar(cjf, 0), [](cxd) { return cxd(1, 0); }) < 1e-13);
  CHECK(sup_err(wirtinger_dbar(idf, 0), [](cxd) { return cxd(0, 0); }) < 1e-13);
  CHECK(sup_err(wirtinger_dbar(nrm, 0), [](cxd z) { return z; }) < 1e-13);

  CHECK_THROWS_AS(wirtinger_d(idf, 1), std::invalid_argument);
}

TEST_CASE("wirtinger derivatives: linearity, Leibniz, conjugation") {
  GridSpec g = make_grid(1, cxd(0, 0), 0.8, 64);
  const double d2 = g.spacing[0] * g.spacing[0];
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const PolyZZb p = random_poly(rng, 2);
    const PolyZZb q = random_poly(rng, 2);
    auto fp = make_scalar_field(g, [&](const std::vector<cxd>& z) { return poly_eval(p, z[0]); });
    auto fq = make_scalar_field(g, [&](const std::vector<cxd>& z) { return poly_eval(q, z[0]); });
    auto fpq = make_scalar_field(g, [&](const std::vector<cxd>& z) {
      return poly_eval(p, z[0]) * poly_eval(q, z[0]);
    });

    // complex linearity is exact
    const cxd alpha(0.3, -1.2);
    auto lin = make_scalar_field(g, [&](const std::vector<cxd>& z) {
      return alpha * poly_eval(p, z[0]) + poly_eval(q, z[0]);
    });
    auto dlin = wirtinger_d(lin, 0);
    auto dp = wirtinger_d(fp, 0);
    auto dq = wirtinger_d(fq, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < dlin.values.size(); ++i) {
      if (!dlin.valid_at(i)) continue;
      worst = std::max(worst,
                       std::abs(dlin.values[i] - (alpha * dp.values[i] + dq.values[i])));
    }
    CHECK(worst < 1e-12);

    // Leibniz to O(spacing^2)
    auto dpq = wirtinger_d(fpq, 0);
    worst = 0.0;
    for (std::size_t i = 0; i < dpq.values.size(); ++i) {
      if (!dpq.valid_at(i)) continue;
      const cxd z = g.point(i)[0];
      const cxd lhs = dpq.values[i];
      const cxd rhs = dp.values[i] * poly_eval(q, z) + poly_eval(p, z) * dq.values[i];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 100.0 * d2);

    // conj(d f) = dbar(conj f) exactly (stencil symmetry)
    auto fpc = make_scalar_field(g, [&](const std::vector<cxd>& z) {
      return std::conj(poly_eval(p, z[0]));
    });
    auto dbar_conj = wirtinger_dbar(fpc, 0);
    for (std::size_t i = 0; i < dp.values.size(); ++i) {
      if (!dp.valid_at(i)) continue;
      CHECK(std::conj(dp.values[i]) == dbar_conj.values[i]);
    }
  }
}

TEST_CASE("wirtinger FD error on degree-2 exact derivative") {
  // d/dz of a z-polynomial of degree <= 2 is exact; dbar vanishes exactly.
  GridSpec g = make_grid(1, cxd(0, 0), 0.8, 32);
  auto f = make_scalar_field(g, [](const std::vector<cxd>& z) {
    return cxd(2.0, 1.0) * z[0] * z[0] + cxd(0.0, -3.0) * z[0] + cxd(5.0, 0.0);
  });
  CHECK(sup_err(wirtinger_d(f, 0), [](cxd z) { return cxd(4.0, 2.0) * z + cxd(0.0, -3.0); }) < 1e-12);
  CHECK(sup_err(wirtinger_dbar(f, 0), [](cxd) { return cxd(0, 0); }) < 1e-12);
}

TEST_CASE("integrate: areas and closed forms") {
  GridSpec g = make_grid(1, cxd(0, 0), 1.0, 256);
  auto one = make_scalar_field(g, [](const std::vector<cxd>&) { return cxd(1, 0); });

  // disc of radius 1/2: area within 2%
  const Mask disc = mask_where(g, [](const std::vector<cxd>& z) { return std::abs(z[0]) < 0.5; });
  CHECK(integrate(one, disc).real() ==
        doctest::Approx(M_PI * 0.25).epsilon(0.02));

  // full polydisc: exact staircase value (2r)^2
  CHECK(integrate(one, full_mask(g)).real() == doctest::Approx(4.0).epsilon(1e-14));

  // |z|^{-1} over an annulus: 2 pi (R - eps) by the polar closed form
  const double eps = 0.25, R = 0.75;
  auto f = make_scalar_field(g, [](const std::vector<cxd>& z) {
    return cxd(1.0 / std::abs(z[0]), 0.0);
  });
  const Mask ann = mask_where(g, [&](const std::vector<cxd>& z) {
    const double r = std::abs(z[0]);
    return r > eps && r < R;
  });
  CHECK(integrate(f, ann).real() ==
        doctest::Approx(2.0 * M_PI * (R - eps)).epsilon(0.02));

  const Mask empty(g.num_nodes(), 0);
  CHECK_THROWS_AS(integrate(one, empty), std::invalid_argument);
}

TEST_CASE("integrate rejects invalid nodes in the region") {
  GridSpec g = make_grid(1, cxd(0, 0), 1.0, 16);
  auto f = make_scalar_field(g, [](const std::vector<cxd>&) { return cxd(1, 0); });
  f.partial = true;
  f.mask = full_mask(g);
  f.mask[5] = 0;
  Mask region = full_mask(g);
  CHECK_THROWS_AS(integrate(f, region), std::invalid_argument);
  region[5] = 0;
  CHECK_NOTHROW(integrate(f, region));
}

TEST_CASE("pair_with_test basics") {
  GridSpec g = make_grid(1, cxd(0, 0), 1.0, 64);
  auto one = make_scalar_field(g, [](const std::vector<cxd>&) { return cxd(1, 0); });
  auto zero = make_scalar_field(g, [](const std::vector<cxd>&) { return cxd(0, 0); });

  ScalarField phi = radial_bump(g, {cxd(0, 0)}, 0.5);
  const double mass = integrate(phi, support_mask(phi)).real();
  for (auto& v : phi.values) v /= mass;  // normalize to unit mass

  CHECK(pair_with_test(one, phi).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(pair_with_test(zero, phi)) == 0.0);

  // support touching the halo is rejected
  ScalarField wide = radial_bump(g, {cxd(0, 0)}, 1.5);
  CHECK_THROWS_AS(pair_with_test(one, wide), std::invalid_argument);
}

TEST_CASE("pair_with_test picks up the log singularity mass") {
  // f = density of the i ddbar form of log|z|^2 (factor 2 from i dz^dzb);
  // the total mass is 2 pi and phi(0) = 1 weights it.
  GridSpec g = make_grid(1, cxd(0, 0), 1.0, 256);
  auto lg = make_scalar_field(g, [](const std::vector<cxd>& z) {
    return cxd(std::log(std::norm(z[0])), 0.0);
  });
  ScalarField hess = wirtinger_dbar(wirtinger_d(lg, 0), 0);
  for (auto& v : hess.values) v *= 2.0;
  ScalarField phi = radial_bump(g, {cxd(0, 0)}, 0.6);
  CHECK(pair_with_test(hess, phi).real() ==
        doctest::Approx(2.0 * M_PI).epsilon(0.05));
}

TEST_CASE("pairwise sum is deterministic and accurate") {
  Rng rng(99);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = rng.uniform(-1.0, 1.0);
  const double a = pairwise_sum(xs.data(), xs.size());
  const double b = pairwise_sum(xs.data(), xs.size());
  CHECK(a == b);
  long double ref = 0.0L;
  for (double x : xs) ref += static_cast<long double>(x);
  CHECK(std::abs(a - static_cast<double>(ref)) < 1e-9);
}

TEST_CASE("mask erosion") {
  GridSpec g = make_grid(1, cxd(0, 0), 1.0, 16);
  Mask m = full_mask(g);
  const Mask e1 = erode_mask(g, m, 1);
  CHECK(mask_count(g, e1) == 14u * 14u);
  const Mask e2 = erode_mask(g, e1, 1);
  CHECK(mask_count(g, e2) == 12u * 12u);
  // axis-restricted erosion only shrinks that complex axis
  GridSpec g2 = make_grid(2, cxd(0, 0), 1.0, 8);
  const Mask e3 = erode_mask(g2, full_mask(g2), 1, 0);
  CHECK(mask_count(g2, e3) == 6u * 6u * 8u * 8u);
}
