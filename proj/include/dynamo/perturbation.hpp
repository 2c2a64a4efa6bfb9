#pragma once
// First-order unfolding of l = 0 diabolical points in (alpha0, beta, gamma)
// and the Arnold-tongue geometry it implies.
//
// Near a crossing (alpha0_nu, lambda_nu) the two eigenvalues are
//
//   lambda = lambda_nu (1 - beta) + alpha0_nu / 2 (alpha0 - alpha0_nu) +- pi/2 sqrt(D),
//
//   D = [(eps n - delta n') (alpha0 - alpha0_nu)]^2
//     + n n' [(eps + delta) gamma A - (-1)^(n+n') (n + n') beta pi]^2
//     - n n' [(eps - delta) gamma A - (-1)^(n-n') (n - n') beta pi]^2,
//
//   A = int_0^1 dalpha(r) cos((eps n - delta n') pi r) dr.
//
// D < 0 marks oscillatory (complex-conjugate) eigenvalues; D = 0 is the
// cone of exceptional points with apex at the crossing.

#include <dynamo/analytic.hpp>
#include <dynamo/error.hpp>
#include <dynamo/model.hpp>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace dynamo {

namespace detail {

// int_0^1 cos(a r) cos(b r) dr
inline double cosine_overlap(double a, double b) {
  auto half_sinc = [](double w) { return w == 0.0 ? 1.0 : std::sin(w) / w; };
  return 0.5 * (half_sinc(a - b) + half_sinc(a + b));
}

inline int parity(int m) { return (m % 2 == 0) ? 1 : -1; }

inline void require_l0(const DiabolicalPoint& dp) {
  if (dp.l != 0) throw ValidationError("first-order unfolding is available for l = 0 only");
}

}  // namespace detail

/// Fourier coupling A between dalpha and the crossing (n, eps), (n', delta).
/// Cosine terms use the closed-form overlap; tabulated samples are
/// integrated with 256-point Gauss-Legendre quadrature.
inline double fourier_coupling(const AlphaProfile& profile, int epsilon, int n, int delta, int n_prime) {
  const int m = epsilon * n - delta * n_prime;
  double a = 0.0;
  for (const auto& t : profile.cosine_terms())
    a += t.weight * detail::cosine_overlap(2.0 * pi * t.k, m * pi);
  if (const auto& spline = profile.samples()) {
    using boost::math::quadrature::gauss;
    a += gauss<double, 256>::integrate(
        [&](double r) { return spline->evaluate(r).first * std::cos(m * pi * r); }, 0.0, 1.0);
  }
  return a;
}

/// Same coupling by quadrature of the full inhomogeneity; independent of
/// the closed form above.
inline double fourier_coupling_quadrature(const AlphaProfile& profile, int epsilon, int n, int delta,
                                          int n_prime) {
  const int m = epsilon * n - delta * n_prime;
  using boost::math::quadrature::gauss;
  return gauss<double, 256>::integrate(
      [&](double r) { return profile.inhomogeneity(r).first * std::cos(m * pi * r); }, 0.0, 1.0);
}

inline double fourier_coupling(const AlphaProfile& profile, const DiabolicalPoint& dp) {
  return fourier_coupling(profile, dp.epsilon, dp.n, dp.delta, dp.n_prime);
}

/// Discriminant D of the first-order unfolding.
inline double discriminant(const DiabolicalPoint& dp, double coupling, double alpha0, double beta,
                           double gamma) {
  detail::require_l0(dp);
  const double n = dp.n, np = dp.n_prime;
  const double e = dp.epsilon, d = dp.delta;
  const double shift = (e * n - d * np) * (alpha0 - dp.alpha0);
  const double plus = (e + d) * gamma * coupling - detail::parity(dp.n + dp.n_prime) * (n + np) * beta * pi;
  const double minus = (e - d) * gamma * coupling - detail::parity(dp.n - dp.n_prime) * (n - np) * beta * pi;
  return shift * shift + n * np * plus * plus - n * np * minus * minus;
}

enum class Stability { real, oscillatory, boundary };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::real: return "real";
    case Stability::oscillatory: return "oscillatory";
    case Stability::boundary: return "boundary";
  }
  return "?";
}

/// Interiors are strict: |D| <= tolerance counts as the exceptional surface.
inline Stability classify_discriminant(double disc, double tolerance = 1e-9) {
  if (std::abs(disc) <= tolerance) return Stability::boundary;
  return disc < 0.0 ? Stability::oscillatory : Stability::real;
}

struct Unfolding {
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  double discriminant = 0.0;
};

/// First-order eigenvalue pair near the crossing.
inline Unfolding unfold_eigenvalues(const DiabolicalPoint& dp, double coupling, double alpha0, double beta,
                                    double gamma) {
  const double disc = discriminant(dp, coupling, alpha0, beta, gamma);
  const double centre = dp.lambda * (1.0 - beta) + 0.5 * dp.alpha0 * (alpha0 - dp.alpha0);
  const std::complex<double> root = 0.5 * pi * std::sqrt(std::complex<double>(disc, 0.0));
  return {centre + root, centre - root, disc};
}

/// D as a quadratic form x^T Q x in x = (alpha0 - alpha0_nu, beta, gamma).
struct UnfoldingCone {
  DiabolicalPoint dp;
  int k = 0;  // profile mode, 0 when the profile is not a single cosine
  double coupling = 0.0;
  Eigen::Matrix3d form = Eigen::Matrix3d::Zero();

  [[nodiscard]] double discriminant_at(double alpha0, double beta, double gamma) const {
    const Eigen::Vector3d x(alpha0 - dp.alpha0, beta, gamma);
    return x.dot(form * x);
  }
};

inline UnfoldingCone unfolding_cone(const DiabolicalPoint& dp, double coupling, int k = 0) {
  detail::require_l0(dp);
  const double n = dp.n, np = dp.n_prime, m = n * np;
  const double e = dp.epsilon, d = dp.delta;
  const double a1 = (e + d) * coupling;
  const double b1 = detail::parity(dp.n + dp.n_prime) * (n + np) * pi;
  const double a2 = (e - d) * coupling;
  const double b2 = detail::parity(dp.n - dp.n_prime) * (n - np) * pi;
  UnfoldingCone cone{dp, k, coupling, Eigen::Matrix3d::Zero()};
  cone.form(0, 0) = (e * n - d * np) * (e * n - d * np);
  cone.form(1, 1) = m * (b1 * b1 - b2 * b2);
  cone.form(2, 2) = m * (a1 * a1 - a2 * a2);
  cone.form(1, 2) = cone.form(2, 1) = -m * (a1 * b1 - a2 * b2);
  return cone;
}

// ---------------------------------------------------------------------------
// Cross sections for dalpha = cos(2 pi k r)

enum class ConicKind { hyperbola, ellipse, wedge, point };

inline const char* to_string(ConicKind kind) {
  switch (kind) {
    case ConicKind::hyperbola: return "hyperbola";
    case ConicKind::ellipse: return "ellipse";
    case ConicKind::wedge: return "wedge";
    case ConicKind::point: return "point";
  }
  return "?";
}

/// Line gamma = slope * alpha0 + intercept.
struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  [[nodiscard]] double at(double alpha0) const { return slope * alpha0 + intercept; }
};

/// Slice of the D < 0 cone by a plane beta = const, in (alpha0, gamma):
///
///   oscillatory  <=>  alpha_coeff (alpha0 - c_a)^2 + gamma_coeff (gamma - c_g)^2  <  rhs
///
/// Mixed-signature crossings give alpha_coeff = 4k^2, gamma_coeff = -n n',
/// a hyperbola (wedge at beta = 0); equal signatures give gamma_coeff = n n',
/// an ellipse (a point at beta = 0).
struct ConicSection {
  DiabolicalPoint dp;
  int k = 0;
  int mode = 0;  // tongue label n: 1..|k| for hyperbolas, 1, 2, ... for ellipses
  double beta = 0.0;
  ConicKind kind = ConicKind::point;
  double alpha_coeff = 0.0;
  double gamma_coeff = 0.0;
  double centre_alpha0 = 0.0;
  double centre_gamma = 0.0;
  double rhs = 0.0;
  std::array<Line, 2> stripe{};  // gamma = beta (alpha0 -+ 2 pi |k|)

  [[nodiscard]] double lhs(double alpha0, double gamma) const {
    const double x = alpha0 - centre_alpha0;
    const double y = gamma - centre_gamma;
    return alpha_coeff * x * x + gamma_coeff * y * y;
  }

  /// Strict interior of the oscillatory region.
  [[nodiscard]] bool inside(double alpha0, double gamma) const { return lhs(alpha0, gamma) < rhs; }
};

/// Crossing-section of the cone through `dp` for dalpha = cos(2 pi k r).
inline ConicSection cone_cross_section(const DiabolicalPoint& dp, int k, double beta) {
  detail::require_l0(dp);
  if (k == 0) throw ValidationError("cone_cross_section: k must be nonzero");
  const int kk = std::abs(k);
  if (dp.parabola_index() != 2 * kk)
    throw ValidationError("selection-rule mismatch: crossing lies on parabola j = " +
                          std::to_string(dp.parabola_index()) + ", not j = " + std::to_string(2 * kk));
  const double n = dp.n, np = dp.n_prime, m = n * np;
  ConicSection c;
  c.dp = dp;
  c.k = k;
  c.mode = dp.n;
  c.beta = beta;
  c.centre_alpha0 = dp.alpha0;
  c.alpha_coeff = 4.0 * kk * kk;
  c.rhs = m * 4.0 * pi * pi * beta * beta * kk * kk;
  // From D with A = 1/2: the surviving gamma term is eps (gamma - eps P beta pi s)^2.
  if (dp.sigma > 0) {
    c.gamma_coeff = m;
    c.centre_gamma = dp.epsilon * detail::parity(dp.n + dp.n_prime) * (n + np) * beta * pi;
    c.kind = beta == 0.0 ? ConicKind::point : ConicKind::ellipse;
  } else {
    c.gamma_coeff = -m;
    c.centre_gamma = dp.epsilon * detail::parity(dp.n - dp.n_prime) * (n - np) * beta * pi;
    c.kind = beta == 0.0 ? ConicKind::wedge : ConicKind::hyperbola;
    // -4k^2 x^2 + m y^2 > m 4 pi^2 beta^2 k^2  <=>  4k^2 x^2 - m y^2 < -rhs
    c.rhs = -c.rhs;
  }
  c.stripe = {Line{beta, -2.0 * pi * kk * beta}, Line{beta, 2.0 * pi * kk * beta}};
  return c;
}

struct TongueHit {
  bool inside = false;
  std::optional<int> n;
};

/// beta = 0 membership in the primary tongues
///   (alpha0 +- 2 pi (n - |k|))^2 < gamma^2 / 4 [1 - ((n - |k|) / |k|)^2],  n = 1..|k|.
/// Returns the smallest matching n.
inline TongueHit primary_tongue_membership(int k, double alpha0, double gamma) {
  if (k == 0) return {};
  const int kk = std::abs(k);
  for (int n = 1; n <= kk; ++n) {
    const double off = 2.0 * pi * (n - kk);
    const double ratio = static_cast<double>(n - kk) / kk;
    const double bound = 0.25 * gamma * gamma * (1.0 - ratio * ratio);
    for (double sign : {1.0, -1.0}) {
      const double x = alpha0 + sign * off;
      if (x * x < bound) return {true, n};
    }
  }
  return {};
}

/// Crossings on the j = 2|k| parabola whose cones carry oscillatory modes
/// for dalpha = cos(2 pi k r): all 2|k| - 1 mixed-signature ones and the
/// equal-signature ones with n, n' <= n_max.
inline std::vector<DiabolicalPoint> resonant_crossings(int k, int n_max) {
  const int j = 2 * std::abs(k);
  std::vector<DiabolicalPoint> out;
  for (const auto& dp : dp_catalog(0, std::max(n_max, j), {}, {}, true))
    if (dp.parabola_index() == j) out.push_back(dp);
  return out;
}

}  // namespace dynamo
