#include <catch_amalgamated.hpp>

#include <dynamo/perturbation.hpp>

#include <random>

using namespace dynamo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Fourier coupling selection rule", "[perturbation]") {
  const auto k2 = AlphaProfile::single_cosine(0.0, 1.0, 2);
  CHECK_THAT(fourier_coupling(k2, 1, 3, -1, 1), WithinAbs(0.5, 1e-14));
  CHECK_THAT(fourier_coupling(k2, 1, 2, 1, 1), WithinAbs(0.0, 1e-14));
  const auto k1 = AlphaProfile::single_cosine(0.0, 1.0, 1);
  CHECK_THAT(fourier_coupling(k1, 1, 1, -1, 1), WithinAbs(0.5, 1e-14));
  CHECK_THAT(fourier_coupling_quadrature(k1, 1, 1, -1, 1), WithinAbs(0.5, 1e-12));
}

TEST_CASE("closed-form and quadrature couplings agree", "[perturbation][property]") {
  const AlphaProfile p(0.0, 1.0, {{1, 0.7}, {2, -1.2}, {3, 0.4}});
  for (int n = 1; n <= 6; ++n)
    for (int np = 1; np <= 6; ++np)
      for (int e : {1, -1})
        for (int d : {1, -1})
          CHECK_THAT(fourier_coupling(p, e, n, d, np), WithinAbs(fourier_coupling_quadrature(p, e, n, d, np), 1e-9));

  // tabulated path
  std::vector<double> r, v;
  for (int i = 0; i <= 400; ++i) {
    r.push_back(i / 400.0);
    v.push_back(std::cos(4 * pi * r.back()));
  }
  const auto tab = AlphaProfile(0.0, 1.0).with_samples(r, v);
  CHECK_THAT(fourier_coupling(tab, 1, 3, -1, 1), WithinAbs(0.5, 1e-6));
  CHECK_THAT(fourier_coupling(tab, 1, 2, 1, 1), WithinAbs(0.0, 1e-6));
}

TEST_CASE("unfolding at the crossing", "[perturbation]") {
  const auto dp = make_crossing(0, 1, 1, 3, 1);
  auto u = unfold_eigenvalues(dp, 0.5, dp.alpha0, 0.0, 0.0);
  CHECK(u.discriminant == 0.0);
  CHECK_THAT(u.lambda_plus.real(), WithinRel(dp.lambda, 1e-14));
  CHECK_THAT(u.lambda_minus.real(), WithinRel(dp.lambda, 1e-14));

  // Hand-evaluated: D = 0.36 pi^2, pair {3 pi^2, 2.4 pi^2}
  u = unfold_eigenvalues(dp, 0.5, 4 * pi, 0.1, 0.0);
  CHECK_THAT(u.discriminant, WithinRel(0.36 * pi * pi, 1e-12));
  CHECK_THAT(u.lambda_plus.real(), WithinRel(3 * pi * pi, 1e-12));
  CHECK_THAT(u.lambda_minus.real(), WithinRel(2.4 * pi * pi, 1e-12));

  // Equal signatures at beta = 0 split real: 3 pi^2 +- (pi sqrt 3 / 2) gamma
  const double g = 0.01;
  u = unfold_eigenvalues(dp, 0.5, 4 * pi, 0.0, g);
  CHECK_THAT(u.discriminant, WithinRel(3 * g * g, 1e-12));
  CHECK_THAT(u.lambda_plus.real(), WithinRel(3 * pi * pi + pi * std::sqrt(3.0) / 2 * g, 1e-12));
  CHECK(u.lambda_plus.imag() == 0.0);
}

TEST_CASE("discriminant examples", "[perturbation]") {
  const auto same = make_crossing(0, 1, 1, 1, -1);
  CHECK_THAT(same.alpha0, WithinAbs(0.0, 1e-14));
  CHECK_THAT(same.lambda, WithinRel(-pi * pi, 1e-14));
  for (double g : {0.1, 1.0, -2.0}) CHECK_THAT(discriminant(same, 0.5, 0.0, 0.0, g), WithinRel(-g * g, 1e-12));
  CHECK(discriminant(make_crossing(0, 2, 1, 5, -1), 0.5, make_crossing(0, 2, 1, 5, -1).alpha0, 0.0, 0.0) == 0.0);
  CHECK(classify_discriminant(-1e-3) == Stability::oscillatory);
  CHECK(classify_discriminant(1e-10) == Stability::boundary);
  CHECK(classify_discriminant(1.0) == Stability::real);
}

TEST_CASE("discriminant invariants", "[perturbation][property]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& dp : dp_catalog(0, 6, {}, {}, true)) {
    const auto cone = unfolding_cone(dp, 0.5);
    CHECK(cone.discriminant_at(dp.alpha0, 0.0, 0.0) == 0.0);
    for (int i = 0; i < 100; ++i) {
      const double a = dp.alpha0 + 4 * u(rng), b = std::abs(u(rng)), g = 3 * u(rng);
      const double d = discriminant(dp, 0.5, a, b, g);
      // D >= 0 without the perturbation
      CHECK(discriminant(dp, 0.5, a, b, 0.0) >= -1e-10);
      CHECK_THAT(cone.discriminant_at(a, b, g), WithinAbs(d, 1e-12 * (1 + std::abs(d))));
      // reality dichotomy
      const auto un = unfold_eigenvalues(dp, 0.5, a, b, g);
      CHECK((d < 0) == (std::abs(un.lambda_plus.imag()) > 0));
      if (d < 0) {
        CHECK(un.lambda_plus == std::conj(un.lambda_minus));
        CHECK_THAT(un.lambda_plus.real(),
                   WithinAbs(dp.lambda * (1 - b) + dp.alpha0 * (a - dp.alpha0) / 2, 1e-10 * (1 + std::abs(dp.lambda))));
      }
      // gamma -> -gamma at beta = 0 for mixed signatures
      if (dp.sigma < 0) CHECK_THAT(discriminant(dp, 0.5, a, 0.0, g), WithinAbs(discriminant(dp, 0.5, a, 0.0, -g), 1e-10));
    }
  }
}

TEST_CASE("one eigenvalue stays at the crossing", "[perturbation][property]") {
  for (const auto& dp : dp_catalog(0, 5))
    for (double b : {0.0, 0.2, 0.5, 1.0}) {
      const auto u = unfold_eigenvalues(dp, 0.5, dp.alpha0, b, 0.0);
      const double hi = std::max(u.lambda_plus.real(), u.lambda_minus.real());
      const double lo = std::min(u.lambda_plus.real(), u.lambda_minus.real());
      const double fixed = dp.lambda, moving = dp.lambda * (1 - 2 * b);
      CHECK_THAT(hi, WithinAbs(std::max(fixed, moving), 1e-9 * std::abs(dp.lambda)));
      CHECK_THAT(lo, WithinAbs(std::min(fixed, moving), 1e-9 * std::abs(dp.lambda)));
    }
}

TEST_CASE("primary tongues", "[perturbation]") {
  auto hit = primary_tongue_membership(2, 0.0, 1.0);
  CHECK(hit.inside);
  CHECK(*hit.n == 2);
  hit = primary_tongue_membership(2, 2 * pi, 0.5);
  CHECK(hit.inside);
  CHECK(*hit.n == 1);
  CHECK_FALSE(primary_tongue_membership(1, 0.0, 0.0).inside);
  // 4 a^2 < g^2 and 16 (a +- 2 pi)^2 < 3 g^2
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> a(-9, 9), g(-6, 6);
  for (int i = 0; i < 2000; ++i) {
    const double x = a(rng), y = g(rng);
    const bool want = 4 * x * x < y * y || 16 * (x - 2 * pi) * (x - 2 * pi) < 3 * y * y ||
                      16 * (x + 2 * pi) * (x + 2 * pi) < 3 * y * y;
    CHECK(primary_tongue_membership(2, x, y).inside == want);
  }
}

TEST_CASE("cross sections", "[perturbation]") {
  const auto crossings = resonant_crossings(2, 6);
  int wedges = 0, points = 0;
  for (const auto& dp : crossings) {
    CHECK(dp.parabola_index() == 4);
    const auto s0 = cone_cross_section(dp, 2, 0.0);
    if (dp.sigma < 0) {
      ++wedges;
      CHECK(s0.kind == ConicKind::wedge);
      // matches the primary tongue test on either side of the apex
      for (double dx : {-0.3, 0.1, 0.25})
        for (double y : {-1.0, 0.4, 2.0}) {
          const double x = dp.alpha0 + dx;
          const auto hit = primary_tongue_membership(2, x, y);
          if (s0.inside(x, y)) CHECK(hit.inside);
        }
    } else {
      ++points;
      CHECK(s0.kind == ConicKind::point);
      CHECK_FALSE(s0.inside(dp.alpha0, 0.0));
      CHECK_FALSE(s0.inside(dp.alpha0 + 0.1, 0.3));
      const auto s1 = cone_cross_section(dp, 2, 0.1);
      CHECK(s1.kind == ConicKind::ellipse);
    }
  }
  CHECK(wedges == 3);
  CHECK(points >= 2);

  // n = 1 ellipse at beta = 0.1: centre offset 2 pi (n + |k|) beta = 0.6 pi
  const auto e = make_crossing(0, 1, 1, 5, 1);
  REQUIRE(e.alpha0 == Catch::Approx(6 * pi));
  const auto s = cone_cross_section(e, 2, 0.1);
  CHECK(s.mode == 1);
  CHECK_THAT(std::abs(s.centre_gamma), WithinRel(0.6 * pi, 1e-12));
  CHECK_THAT(s.rhs, WithinRel(5.0 * 4 * pi * pi * 0.01 * 4, 1e-12));
  CHECK(s.gamma_coeff == 5.0);
  CHECK(s.alpha_coeff == 16.0);
  CHECK(s.inside(s.centre_alpha0, s.centre_gamma));
  // ellipses sit between the stripe lines
  CHECK(s.stripe[0].at(s.centre_alpha0) < s.centre_gamma);
  CHECK(s.centre_gamma < s.stripe[1].at(s.centre_alpha0));

  CHECK_THROWS_WITH(cone_cross_section(make_crossing(0, 1, 1, 3, 1), 2, 0.1),
                    Catch::Matchers::ContainsSubstring("selection-rule mismatch"));
}

TEST_CASE("conic sections agree with the discriminant", "[perturbation][property]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k : {1, 2, 3})
    for (const auto& dp : resonant_crossings(k, 6))
      for (double beta : {0.05, 0.2}) {
        const auto s = cone_cross_section(dp, k, beta);
        int disagree = 0;
        for (int i = 0; i < 10000; ++i) {
          const double a = dp.alpha0 + 3 * u(rng), g = s.centre_gamma + 5 * u(rng);
          const double margin = s.lhs(a, g) - s.rhs;
          if (std::abs(margin) < 1e-6) continue;
          disagree += (margin < 0) != (discriminant(dp, 0.5, a, beta, g) < 0);
        }
        CHECK(disagree == 0);
      }
}
