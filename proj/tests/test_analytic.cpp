#include <catch_amalgamated.hpp>

#include <dynamo/analytic.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <random>

using namespace dynamo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Bessel zero squares", "[analytic]") {
  const auto r0 = bessel_zero_squares(0, 3);
  CHECK_THAT(r0[0], WithinRel(pi * pi, 1e-15));
  CHECK_THAT(r0[1], WithinRel(4 * pi * pi, 1e-15));
  CHECK_THAT(r0[2], WithinRel(9 * pi * pi, 1e-15));
  // first root of tan x = x
  CHECK_THAT(bessel_zero_squares(1, 1)[0], WithinRel(20.19072855642663, 1e-10));
  for (int l = 0; l <= 4; ++l) {
    const auto r = bessel_zero_squares(l, 30);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
  }
}

TEST_CASE("mesh lines", "[analytic]") {
  CHECK_THAT(mesh_eigenvalue(ModeBranch::make(0, 1, 1), pi), WithinAbs(0.0, 1e-13));
  CHECK_THAT(mesh_eigenvalue(ModeBranch::make(0, 2, -1), 0.0), WithinRel(-4 * pi * pi, 1e-14));
  CHECK_THAT(mesh_eigenvalue(ModeBranch::make(0, 1, 1), 4 * pi), WithinRel(3 * pi * pi, 1e-14));
  CHECK(ModeBranch::make(0, 3, -1).slope() == Catch::Approx(-3 * pi));
}

TEST_CASE("mesh lines are mirror symmetric", "[analytic][property]") {
  for (int l : {0, 1, 3})
    for (int n = 1; n <= 8; ++n)
      for (double a : {-13.0, -1.0, 0.0, 2.5, 17.0})
        CHECK_THAT(mesh_eigenvalue(ModeBranch::make(l, n, 1), a),
                   WithinAbs(mesh_eigenvalue(ModeBranch::make(l, n, -1), -a), 1e-11));
}

TEST_CASE("mesh eigenfunctions", "[analytic]") {
  CHECK_THAT(mesh_eigenfunction(0, 1, 0.5), WithinRel(std::sqrt(2.0), 1e-14));
  for (int n = 1; n <= 4; ++n) CHECK_THAT(mesh_eigenfunction(0, n, 1e-12), WithinAbs(0.0, 1e-10));
  using boost::math::quadrature::gauss_kronrod;
  for (int l : {0, 1})
    for (int n = 1; n <= 5; ++n) {
      const double norm = gauss_kronrod<double, 61>::integrate(
          [&](double r) { return std::pow(mesh_eigenfunction(l, n, r), 2); }, 0.0, 1.0, 10, 1e-13);
      CHECK_THAT(norm, WithinAbs(1.0, 1e-10));
    }
  // l = 0 fast path agrees with the Bessel form at l = 0 via sin
  for (double r : {0.1, 0.33, 0.9}) CHECK_THAT(mesh_eigenfunction(0, 3, r), WithinAbs(std::sqrt(2.0) * std::sin(3 * pi * r), 1e-14));
}

TEST_CASE("Krein products", "[analytic]") {
  CHECK_THAT(krein_product(0, 1, 1, 1, 1), WithinAbs(2 * pi, 1e-8));
  CHECK_THAT(krein_product(0, 1, 1, 1, -1), WithinAbs(0.0, 1e-8));
  CHECK_THAT(krein_product(0, 1, 1, 2, 1), WithinAbs(0.0, 1e-8));
  CHECK_THAT(krein_product(0, 2, -1, 2, -1), WithinAbs(-4 * pi, 1e-8));
  const double rho1 = bessel_zero_squares(1, 2)[1];
  CHECK_THAT(krein_product(1, 2, 1, 2, 1), WithinAbs(2 * std::sqrt(rho1), 1e-8));
}

TEST_CASE("crossing construction", "[analytic]") {
  const auto a = make_crossing(0, 1, 1, 3, 1);
  CHECK_THAT(a.alpha0, WithinRel(4 * pi, 1e-14));
  CHECK_THAT(a.lambda, WithinRel(3 * pi * pi, 1e-14));
  CHECK(a.sigma == 1);
  CHECK(*a.j == 2);

  const auto b = make_crossing(0, 1, 1, 3, -1);
  CHECK_THAT(b.alpha0, WithinRel(-2 * pi, 1e-14));
  CHECK_THAT(b.lambda, WithinRel(-3 * pi * pi, 1e-14));
  CHECK(b.sigma == -1);

  CHECK_THROWS_AS(make_crossing(0, 1, 1, 1, 1), ValidationError);
  CHECK_FALSE(make_crossing(1, 1, 1, 2, 1).j.has_value());
}

TEST_CASE("crossing catalog", "[analytic]") {
  const auto dps = dp_catalog(0, 6);
  // 6 choose 2 pairs times 4 signature combinations
  CHECK(dps.size() == 60);
  for (const auto& dp : dps) CHECK(dp.n != dp.n_prime);
  CHECK(std::any_of(dps.begin(), dps.end(), [](const DiabolicalPoint& d) {
    return d.n == 1 && d.n_prime == 3 && d.epsilon == 1 && d.delta == 1;
  }));
  for (std::size_t i = 1; i < dps.size(); ++i)
    CHECK(std::tie(dps[i - 1].alpha0, dps[i - 1].lambda) <= std::tie(dps[i].alpha0, dps[i].lambda));

  const auto windowed = dp_catalog(0, 6, {0.0, 10.0}, {-50.0, 50.0});
  for (const auto& dp : windowed) {
    CHECK(dp.alpha0 >= 0.0);
    CHECK(dp.alpha0 <= 10.0);
    CHECK(std::abs(dp.lambda) <= 50.0);
  }
  CHECK_THROWS_AS(dp_catalog(0, 1), ValidationError);

  const auto with_same = dp_catalog(0, 6, {}, {}, true);
  CHECK(with_same.size() == 66);
}

TEST_CASE("catalog laws", "[analytic][property]") {
  for (int l : {0, 1, 2})
    for (const auto& dp : dp_catalog(l, 8)) {
      CHECK((dp.lambda > 0) == (dp.sigma > 0));
      CHECK(dp.sigma == dp.epsilon * dp.delta);
      if (l == 0) {
        const int j = *dp.j;
        CHECK_THAT(dp.alpha0, WithinAbs(pi * (2 * dp.n * dp.epsilon + j), 1e-10));
        CHECK_THAT(dp.lambda, WithinAbs(pi * pi * dp.n * (dp.n + dp.epsilon * j), 1e-9));
        CHECK_THAT(dp.lambda, WithinAbs(parabola_lambda(j, dp.alpha0), 1e-10));
      }
    }
}

TEST_CASE("parabolas", "[analytic]") {
  CHECK_THAT(parabola_lambda(2, 4 * pi), WithinRel(3 * pi * pi, 1e-14));
  CHECK_THAT(parabola_lambda(2, 2 * pi), WithinAbs(0.0, 1e-13));
  CHECK_THAT(parabola_lambda(4, 0.0), WithinRel(-4 * pi * pi, 1e-14));
}

TEST_CASE("characteristic function zeros", "[analytic]") {
  for (double beta : {0.0, 0.3, 0.5, 1.0})
    CHECK(std::abs(charpoly_residual_l0(4 * pi, beta, 3 * pi * pi)) <= 1e-10);
  for (int j = 1; j <= 6; ++j)
    for (double a : {0.0, 1.3, -7.0})
      CHECK(std::abs(charpoly_residual_l0(a, 1.0, parabola_lambda(j, a))) <= 1e-10);
  CHECK(std::abs(charpoly_residual_l0(3 * pi, 0.0, 2 * pi * pi)) <= 1e-12);
}

TEST_CASE("characteristic function is odd in eta", "[analytic][property]") {
  // The zero set is branch independent even though the value flips sign.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(-12, 12), b(0, 1), x(-80, 60);
  for (int i = 0; i < 200; ++i) {
    const double alpha0 = a(rng), beta = b(rng);
    const std::complex<double> lambda(x(rng), x(rng) / 4);
    const auto eta = std::sqrt(alpha0 * alpha0 - 4.0 * lambda);
    auto f = [&](std::complex<double> e) {
      return (1.0 - beta) * e * (std::cos(e) - std::cos(alpha0)) + 2.0 * beta * lambda * std::sin(e);
    };
    const auto plus = f(eta), minus = f(-eta);
    CHECK(std::abs(plus + minus) <= 1e-9 * (1.0 + std::abs(plus)));
    CHECK(std::abs(plus - charpoly_residual_l0(alpha0, beta, lambda)) <= 1e-12 * (1.0 + std::abs(plus)));
  }
}

TEST_CASE("real form of the characteristic function", "[analytic][property]") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> a(-15, 15), b(0, 1), x(-120, 80);
  for (int i = 0; i < 1000; ++i) {
    const double alpha0 = a(rng), beta = b(rng), lambda = x(rng);
    const auto c = charpoly_reduced_l0(alpha0, beta, lambda);
    CHECK(std::abs(c.imag()) <= 1e-12 * (1.0 + std::abs(c)));
    CHECK_THAT(charpoly_reduced_real_l0(alpha0, beta, lambda), WithinAbs(c.real(), 1e-10 * (1.0 + std::abs(c))));
  }
}

TEST_CASE("real roots", "[analytic]") {
  auto has = [](const std::vector<double>& v, double x, double tol) {
    return std::any_of(v.begin(), v.end(), [&](double y) { return std::abs(x - y) <= tol; });
  };
  CHECK(has(charpoly_real_roots_l0(pi, 0.0, {-1, 1}), 0.0, 1e-9));

  const auto p = charpoly_real_roots_l0(0.0, 1.0, {-50, 0});
  REQUIRE(p.size() == 4);
  for (int j = 1; j <= 4; ++j) CHECK(has(p, parabola_lambda(j, 0.0), 1e-9));

  CHECK(has(charpoly_real_roots_l0(4 * pi, 0.5, {0, 60}), 3 * pi * pi, 1e-8));
  CHECK_THROWS_AS(charpoly_real_roots_l0(1.0, 0.5, {-INFINITY, 0}), ValidationError);
}

TEST_CASE("roots at beta = 0 are the mesh", "[analytic][property]") {
  for (double a : {0.7, 2.0, 3 * pi, 5.5, 4 * pi, -8.1}) {
    const Interval w{-150.0, 60.0};
    const auto roots = charpoly_real_roots_l0(a, 0.0, w);
    std::vector<double> mesh;
    for (int n = 1; n <= 20; ++n)
      for (int e : {1, -1}) {
        const double m = mesh_eigenvalue(ModeBranch::make(0, n, e), a);
        if (w.contains(m)) mesh.push_back(m);
      }
    std::sort(mesh.begin(), mesh.end());
    mesh.erase(std::unique(mesh.begin(), mesh.end(), [](double x, double y) { return std::abs(x - y) < 1e-9; }),
               mesh.end());
    REQUIRE(roots.size() == mesh.size());
    for (std::size_t i = 0; i < roots.size(); ++i) CHECK_THAT(roots[i], WithinAbs(mesh[i], 1e-9));
  }
}

TEST_CASE("crossings are fixed points of the homotopy", "[analytic][property]") {
  for (const auto& dp : dp_catalog(0, 6))
    for (int i = 0; i <= 10; ++i)
      CHECK(std::abs(charpoly_residual_l0(dp.alpha0, i / 10.0, dp.lambda)) <= 1e-10);
}
