#pragma once
// Invariant suite behind `dynamo verify`.  The quick suite is the analytic
// oracle set plus the cheap numerical criteria; the full suite adds every
// acceptance criterion.

#include <dynamo/acceptance.hpp>
#include <dynamo/analytic.hpp>
#include <dynamo/perturbation.hpp>

#include <boost/math/special_functions/bessel.hpp>

#include <chrono>
#include <random>
#include <string>
#include <vector>

namespace dynamo {

namespace checks {

inline CriterionResult bessel_zeros(const AcceptanceOptions&) {
  CriterionResult r{0, "Bessel zeros against Boost", true, {}, 0.0};
  double worst = 0.0;
  for (int l = 0; l <= 4; ++l) {
    const auto rho = bessel_zero_squares(l, 20);
    for (int n = 1; n <= 20; ++n) {
      const double z = boost::math::cyl_bessel_j_zero(l + 0.5, n);
      worst = std::max(worst, std::abs(rho[n - 1] - z * z) / (z * z));
    }
  }
  r.pass = worst <= 1e-12;
  r.detail = "max relative error " + acceptance::fmt(worst);
  return r;
}

inline CriterionResult catalog_laws(const AcceptanceOptions&) {
  CriterionResult r{0, "crossing signature and parabola laws", true, {}, 0.0};
  int bad = 0;
  double worst = 0.0;
  for (const auto& dp : dp_catalog(0, 10, {}, {}, true)) {
    if ((dp.lambda > 0) != (dp.sigma > 0)) ++bad;
    worst = std::max(worst, std::abs(dp.lambda - parabola_lambda(dp.parabola_index(), dp.alpha0)));
    const int j = *dp.j;
    if (std::abs(dp.alpha0 - pi * (2 * dp.n * dp.epsilon + j)) > 1e-9) ++bad;
    if (std::abs(dp.lambda - pi * pi * dp.n * (dp.n + dp.epsilon * j)) > 1e-9 * std::abs(dp.lambda)) ++bad;
  }
  for (int l : {0, 1})
    for (int n = 1; n <= 6; ++n)
      for (double a : {-7.0, 0.3, 11.0})
        if (std::abs(mesh_eigenvalue(ModeBranch::make(l, n, 1), a) - mesh_eigenvalue(ModeBranch::make(l, n, -1), -a)) >
            1e-12 * (1.0 + std::abs(a)))
          ++bad;
  r.pass = bad == 0 && worst <= 1e-10;
  r.detail = std::to_string(bad) + " violations, parabola distance " + acceptance::fmt(worst);
  return r;
}

inline CriterionResult mesh_roots(const AcceptanceOptions&) {
  CriterionResult r{0, "characteristic roots at beta = 0 equal the mesh", true, {}, 0.0};
  double worst = 0.0;
  int missing = 0;
  for (double a : {0.7, 3.0 * pi, 5.5, 4.0 * pi}) {
    const Interval w{-150.0, 60.0};
    const auto roots = charpoly_real_roots_l0(a, 0.0, w);
    std::vector<double> mesh;
    for (int n = 1; n <= 20; ++n)
      for (int e : {1, -1}) {
        const double m = mesh_eigenvalue(ModeBranch::make(0, n, e), a);
        if (w.contains(m)) mesh.push_back(m);
      }
    for (double m : mesh) {
      double best = std::numeric_limits<double>::infinity();
      for (double x : roots) best = std::min(best, std::abs(x - m));
      if (best > 1e-9) ++missing;
      worst = std::max(worst, best);
    }
    for (double x : roots) {
      double best = std::numeric_limits<double>::infinity();
      for (double m : mesh) best = std::min(best, std::abs(x - m));
      if (best > 1e-9) ++missing;
    }
  }
  r.pass = missing == 0;
  r.detail = std::to_string(missing) + " unmatched, max distance " + acceptance::fmt(worst);
  return r;
}

inline CriterionResult hyperbolic_form(const AcceptanceOptions&) {
  CriterionResult r{0, "real characteristic form against complex form", true, {}, 0.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(-15.0, 15.0), b(0.0, 1.0), l(-120.0, 80.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double alpha0 = a(rng), beta = b(rng), lambda = l(rng);
    const auto c = charpoly_reduced_l0(alpha0, beta, lambda);
    const double x = charpoly_reduced_real_l0(alpha0, beta, lambda);
    worst = std::max(worst, std::abs(c - x) / std::max(1.0, std::abs(c)));
  }
  r.pass = worst <= 1e-10;
  r.detail = "1000 points, max relative difference " + acceptance::fmt(worst);
  return r;
}

inline CriterionResult krein_products(const AcceptanceOptions&) {
  CriterionResult r{0, "Krein products", true, {}, 0.0};
  double worst = 0.0;
  for (int l : {0, 1}) {
    const auto rho = bessel_zero_squares(l, 5);
    for (int n = 1; n <= 5; ++n)
      for (int np = 1; np <= 5; ++np)
        for (int e : {1, -1})
          for (int d : {1, -1}) {
            const double want = (n == np && e == d) ? 2.0 * e * std::sqrt(rho[n - 1]) : 0.0;
            worst = std::max(worst, std::abs(krein_product(l, n, e, np, d) - want));
          }
  }
  r.pass = worst <= 1e-8;
  r.detail = "max deviation " + acceptance::fmt(worst);
  return r;
}

inline CriterionResult cone_forms(const AcceptanceOptions&) {
  CriterionResult r{0, "cone quadratic forms and conic sections", true, {}, 0.0};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double form_err = 0.0;
  int conic_bad = 0;
  for (int k : {1, 2, 3})
    for (const auto& dp : resonant_crossings(k, 5)) {
      const auto cone = unfolding_cone(dp, 0.5, k);
      for (int i = 0; i < 200; ++i) {
        const double a = dp.alpha0 + 3 * u(rng), b = std::abs(u(rng)), g = 5 * u(rng);
        const double direct = discriminant(dp, 0.5, a, b, g);
        form_err = std::max(form_err, std::abs(cone.discriminant_at(a, b, g) - direct) / std::max(1.0, std::abs(direct)));
      }
      for (double beta : {0.0, 0.1, 0.2}) {
        const auto sec = cone_cross_section(dp, k, beta);
        for (int i = 0; i < 2000; ++i) {
          const double a = dp.alpha0 + 3 * u(rng), g = 5 * u(rng);
          const double disc = discriminant(dp, 0.5, a, beta, g);
          const double margin = sec.lhs(a, g) - sec.rhs;
          if (std::abs(margin) < 1e-6 || std::abs(disc) < 1e-6) continue;
          if ((margin < 0) != (disc < 0)) ++conic_bad;
        }
      }
    }
  r.pass = form_err <= 1e-12 && conic_bad == 0;
  r.detail = "form deviation " + acceptance::fmt(form_err) + ", " + std::to_string(conic_bad) + " conic/D disagreements";
  return r;
}

}  // namespace checks

struct VerifyEntry {
  std::string label;
  CriterionFn run;
  bool quick = true;
};

inline std::vector<VerifyEntry> verify_suite() {
  std::vector<VerifyEntry> out = {
      {"bessel-zeros", checks::bessel_zeros},       {"catalog-laws", checks::catalog_laws},
      {"mesh-roots", checks::mesh_roots},           {"hyperbolic-form", checks::hyperbolic_form},
      {"krein-products", checks::krein_products},   {"cone-forms", checks::cone_forms},
  };
  const std::vector<int> quick = {1, 2, 4, 5, 10};
  const auto& all = acceptance_criteria();
  for (int id = 1; id <= static_cast<int>(all.size()); ++id) {
    const bool q = std::find(quick.begin(), quick.end(), id) != quick.end();
    out.push_back({"criterion-" + std::to_string(id), [id](const AcceptanceOptions& o) { return run_criterion(id, o); }, q});
  }
  return out;
}

inline CriterionResult run_verify_entry(const VerifyEntry& e, const AcceptanceOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = e.run(opt);
  } catch (const std::exception& ex) {
    r = {0, e.label, false, std::string("exception: ") + ex.what(), 0.0};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace dynamo
