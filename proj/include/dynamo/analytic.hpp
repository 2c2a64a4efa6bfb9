#pragma once
// Closed-form spectrum of the idealized (beta = 0) constant-alpha problem,
// Krein signatures, diabolical crossings of its branches, and the l = 0
// characteristic function valid along the whole beta homotopy.

#include <dynamo/error.hpp>
#include <dynamo/model.hpp>

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace dynamo {

// ---------------------------------------------------------------------------
// Bessel zeros

namespace detail {

// J_{l+1/2}(x) is proportional to sqrt(x) j_l(x), so both share their
// positive zeros; the spherical function is better scaled.
inline double sph_j(int l, double x) { return std::sph_bessel(static_cast<unsigned>(l), x); }

inline double sph_j_prime(int l, double x) {
  if (l == 0) return -std::sph_bessel(1u, x);
  return sph_j(l - 1, x) - (l + 1) / x * sph_j(l, x);
}

// Root of j_l in (a, b) where j_l changes sign: bisection down to a narrow
// bracket, then safeguarded Newton.
inline double refine_zero(int l, double a, double b) {
  double fa = sph_j(l, a);
  for (int it = 0; it < 60 && (b - a) > 1e-6 * b; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = sph_j(l, mid);
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 50; ++it) {
    const double step = sph_j(l, x) / sph_j_prime(l, x);
    double next = x - step;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if ((sph_j(l, next) < 0) == (fa < 0)) a = next; else b = next;
    const bool done = std::abs(next - x) <= 1e-15 * next;
    x = next;
    if (done) break;
  }
  return x;
}

}  // namespace detail

/// rho_1 < ... < rho_count, squares of the positive zeros of J_{l+1/2}.
///
/// l = 0 is exact (rho_n = pi^2 n^2).  Higher orders are bracketed by the
/// interlacing of zeros of consecutive orders, starting from n pi.
inline std::vector<double> bessel_zero_squares(int l, int count) {
  if (l < 0) throw ValidationError("bessel_zero_squares: l must be nonnegative");
  if (count < 1) throw ValidationError("bessel_zero_squares: count must be positive");
  std::vector<double> zeros(static_cast<std::size_t>(count + l));
  for (std::size_t i = 0; i < zeros.size(); ++i) zeros[i] = pi * static_cast<double>(i + 1);
  for (int order = 1; order <= l; ++order) {
    // j_{order,k} lies in (j_{order-1,k}, j_{order-1,k+1}).
    std::vector<double> next(zeros.size() - 1);
    for (std::size_t k = 0; k < next.size(); ++k) next[k] = detail::refine_zero(order, zeros[k], zeros[k + 1]);
    zeros = std::move(next);
  }
  std::vector<double> rho(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) rho[i] = zeros[i] * zeros[i];
  return rho;
}

// ---------------------------------------------------------------------------
// Spectral mesh

/// One straight branch lambda = -rho_n + epsilon alpha0 sqrt(rho_n).
struct ModeBranch {
  int l = 0;
  int n = 1;
  int epsilon = 1;  // Krein signature
  double rho = pi * pi;

  static ModeBranch make(int l, int n, int epsilon) {
    if (n < 1) throw ValidationError("mode index n must be positive");
    if (epsilon != 1 && epsilon != -1) throw ValidationError("signature must be +1 or -1");
    return {l, n, epsilon, bessel_zero_squares(l, n).back()};
  }

  [[nodiscard]] double slope() const { return epsilon * std::sqrt(rho); }
};

inline double mesh_eigenvalue(const ModeBranch& branch, double alpha0) {
  return -branch.rho + branch.epsilon * alpha0 * std::sqrt(branch.rho);
}

/// Normalized Riccati-Bessel function sqrt(2r) J_{l+1/2}(k r) / |J_{l+3/2}(k)|,
/// k = sqrt(rho_n).  For l = 0 this is sqrt(2) sin(n pi r).
inline double mesh_eigenfunction(int l, int n, double r) {
  if (n < 1) throw ValidationError("mode index n must be positive");
  if (l == 0) return std::sqrt(2.0) * std::sin(n * pi * r);
  if (r <= 0.0) return 0.0;
  const double k = std::sqrt(bessel_zero_squares(l, n).back());
  const double nu = l + 0.5;
  return std::sqrt(2.0 * r) * std::cyl_bessel_j(nu, k * r) / std::abs(std::cyl_bessel_j(nu + 1.0, k));
}

/// Indefinite product [f_{n'}^delta, f_n^epsilon] = int g^T J f dr of the
/// mesh eigenvectors (1, eps sqrt(rho_n)) f_n, evaluated by quadrature.
inline double krein_product(int l, int n, int epsilon, int n_prime, int delta) {
  const auto rho = bessel_zero_squares(l, std::max(n, n_prime));
  const double sn = std::sqrt(rho[n - 1]);
  const double snp = std::sqrt(rho[n_prime - 1]);
  using boost::math::quadrature::gauss;
  const double overlap = gauss<double, 128>::integrate(
      [&](double r) { return mesh_eigenfunction(l, n, r) * mesh_eigenfunction(l, n_prime, r); }, 0.0, 1.0);
  // g^T J f with f = (1, eps sn), g = (1, delta snp): eps sn + delta snp.
  return (epsilon * sn + delta * snp) * overlap;
}

// ---------------------------------------------------------------------------
// Diabolical points

/// Semi-simple double eigenvalue where branches (n, epsilon) and
/// (n_prime, delta) of the mesh cross.
struct DiabolicalPoint {
  int l = 0;
  int n = 1;
  int n_prime = 2;
  int epsilon = 1;
  int delta = 1;
  double alpha0 = 0.0;   // eps sqrt(rho_n) + delta sqrt(rho_n')
  double lambda = 0.0;   // eps delta sqrt(rho_n rho_n')
  int sigma = 1;         // intersection index eps delta
  std::optional<int> j;  // l = 0 only: relative mode shift delta n' - eps n

  /// Index of the beta = 1 parabola through the point (l = 0).
  [[nodiscard]] int parabola_index() const { return j ? std::abs(*j) : 0; }
};

/// Crossing of the two given branches.  Same-index crossings (n = n') are
/// allowed only with opposite signatures, where they occur at alpha0 = 0.
inline DiabolicalPoint make_crossing(int l, int n, int epsilon, int n_prime, int delta) {
  if (n < 1 || n_prime < 1) throw ValidationError("mode indices must be positive");
  if (std::abs(epsilon) != 1 || std::abs(delta) != 1) throw ValidationError("signatures must be +1 or -1");
  if (n == n_prime && epsilon == delta) throw ValidationError("a branch does not cross itself");
  // Canonical order: smaller index first; for n = n' the positive signature first.
  if (n > n_prime || (n == n_prime && epsilon < delta)) {
    std::swap(n, n_prime);
    std::swap(epsilon, delta);
  }
  const auto rho = bessel_zero_squares(l, n_prime);
  const double a = std::sqrt(rho[n - 1]);
  const double b = std::sqrt(rho[n_prime - 1]);
  DiabolicalPoint dp;
  dp.l = l;
  dp.n = n;
  dp.n_prime = n_prime;
  dp.epsilon = epsilon;
  dp.delta = delta;
  dp.alpha0 = epsilon * a + delta * b;
  dp.sigma = epsilon * delta;
  dp.lambda = dp.sigma * a * b;
  if (l == 0) dp.j = delta * n_prime - epsilon * n;
  return dp;
}

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
};

/// All crossings with n, n' <= n_max inside the windows, sorted by alpha0
/// then lambda.  Each unordered pair {(n, eps), (n', delta)} appears once.
/// `include_same_index` adds the opposite-signature crossings n = n' at
/// alpha0 = 0.
inline std::vector<DiabolicalPoint> dp_catalog(int l, int n_max, Interval alpha0_window = {},
                                               Interval lambda_window = {}, bool include_same_index = false) {
  if (n_max < 2) throw ValidationError("dp_catalog: n_max must be at least 2");
  std::vector<DiabolicalPoint> out;
  for (int n = 1; n <= n_max; ++n) {
    for (int np = n; np <= n_max; ++np) {
      if (np == n && !include_same_index) continue;
      for (int e : {1, -1}) {
        for (int d : {1, -1}) {
          if (np == n && !(e == 1 && d == -1)) continue;
          auto dp = make_crossing(l, n, e, np, d);
          if (alpha0_window.contains(dp.alpha0) && lambda_window.contains(dp.lambda)) out.push_back(dp);
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DiabolicalPoint& a, const DiabolicalPoint& b) {
    if (a.alpha0 != b.alpha0) return a.alpha0 < b.alpha0;
    return a.lambda < b.lambda;
  });
  return out;
}

/// Beta = 1, l = 0 eigenvalue parabola (alpha0^2 - pi^2 j^2) / 4.
inline double parabola_lambda(int j, double alpha0) {
  return 0.25 * (alpha0 * alpha0 - pi * pi * static_cast<double>(j) * static_cast<double>(j));
}

// ---------------------------------------------------------------------------
// l = 0 characteristic function

/// (1 - beta) eta [cos eta - cos alpha0] + 2 beta lambda sin eta with
/// eta = sqrt(alpha0^2 - 4 lambda) on the principal branch.
///
/// The expression is odd in eta, so its zero set does not depend on the
/// branch, but it carries spurious zeros at eta = 0 and lambda = 0.
inline std::complex<double> charpoly_residual_l0(double alpha0, double beta, std::complex<double> lambda) {
  const std::complex<double> eta = std::sqrt(alpha0 * alpha0 - 4.0 * lambda);
  return (1.0 - beta) * eta * (std::cos(eta) - std::cos(alpha0)) + 2.0 * beta * lambda * std::sin(eta);
}

namespace detail {
inline std::complex<double> sinc(std::complex<double> z) {
  if (std::abs(z) < 1e-4) {
    const auto z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
  return std::sin(x) / x;
}
inline double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0 + x * x * x * x / 120.0;
  return std::sinh(x) / x;
}
}  // namespace detail

/// Residual divided by eta lambda:
///   G = (1 - beta) (cos eta - cos alpha0) / lambda + 2 beta sin(eta) / eta.
/// G is an entire function of lambda, real for real arguments, and its
/// zeros are exactly the eigenvalues of the constant-alpha l = 0 problem.
/// The first term is evaluated as 2 sinc(s) sinc(lambda / s),
/// s = (eta + |alpha0|) / 2, which is regular at lambda = 0.
inline std::complex<double> charpoly_reduced_l0(double alpha0, double beta, std::complex<double> lambda) {
  const double a = std::abs(alpha0);
  const std::complex<double> eta = std::sqrt(a * a - 4.0 * lambda);
  const std::complex<double> s = 0.5 * (eta + a);
  std::complex<double> first;
  if (std::abs(s) == 0.0) {
    first = 2.0;  // alpha0 = lambda = 0
  } else {
    first = 2.0 * detail::sinc(s) * detail::sinc(lambda / s);
  }
  return (1.0 - beta) * first + 2.0 * beta * detail::sinc(eta);
}

/// Real-arithmetic form of charpoly_reduced_l0: trigonometric below
/// lambda = alpha0^2 / 4 and hyperbolic (eta = i mu) above it.
inline double charpoly_reduced_real_l0(double alpha0, double beta, double lambda) {
  const double a = std::abs(alpha0);
  const double disc = a * a - 4.0 * lambda;
  if (disc >= 0.0) {
    const double eta = std::sqrt(disc);
    const double s = 0.5 * (eta + a);
    const double first = s == 0.0 ? 2.0 : 2.0 * detail::sinc(s) * detail::sinc(lambda / s);
    return (1.0 - beta) * first + 2.0 * beta * detail::sinc(eta);
  }
  const double mu = std::sqrt(-disc);
  // cosh(mu) - cos(a) over lambda; lambda > a^2 / 4 >= 0 here.
  double first;
  if (a == 0.0) {
    const double h = detail::sinhc(0.5 * mu);  // cosh mu - 1 = 2 sinh^2(mu/2), lambda = mu^2 / 4
    first = 2.0 * h * h;
  } else {
    first = (std::cosh(mu) - std::cos(a)) / lambda;
  }
  return (1.0 - beta) * first + 2.0 * beta * detail::sinhc(mu);
}

namespace detail {

template <class F>
double bisect(F&& f, double a, double b, double fa, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Sign-change roots of f on [lo, hi].
template <class F>
std::vector<double> sign_change_roots(F&& f, double lo, double hi, int samples, double tol) {
  std::vector<double> roots;
  double x0 = lo;
  double f0 = f(x0);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = lo + (hi - lo) * static_cast<double>(i) / samples;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
      roots.push_back(bisect(f, x0, x1, f0, tol));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) roots.push_back(x0);
  return roots;
}

}  // namespace detail

/// Real eigenvalues of the constant-alpha l = 0 problem in `window`.
///
/// Sign changes of the reduced characteristic function on a grid of
/// `samples` points are refined by bisection to 1e-11.  At beta = 0 the
/// function factors as 2 sinc(s) sinc(lambda / s) and each factor is
/// scanned separately, so the double roots at diabolical points are found.
inline std::vector<double> charpoly_real_roots_l0(double alpha0, double beta, Interval window,
                                                  int samples = 4096) {
  if (!std::isfinite(window.lo) || !std::isfinite(window.hi) || !(window.lo < window.hi))
    throw ValidationError("charpoly_real_roots_l0: window must be bounded and nonempty");
  if (samples < 2048) samples = 2048;
  constexpr double tol = 1e-11;
  const double a = std::abs(alpha0);

  auto ends_on_root = [&](auto&& f) { return f(window.lo) == 0.0 || f(window.hi) == 0.0; };
  std::vector<double> roots;
  if (beta == 0.0) {
    // Roots lie where eta is real, lambda <= alpha0^2 / 4.
    const double top = std::min(window.hi, 0.25 * a * a);
    if (window.lo <= top) {
      auto s_of = [a](double lam) { return 0.5 * (std::sqrt(std::max(0.0, a * a - 4.0 * lam)) + a); };
      auto f1 = [&](double lam) { return detail::sinc(s_of(lam)); };
      auto f2 = [&](double lam) {
        const double s = s_of(lam);
        return s == 0.0 ? 1.0 : detail::sinc(lam / s);
      };
      double lo = window.lo, hi = top;
      if (ends_on_root(f1) || ends_on_root(f2)) {
        lo -= 1e-9;
        hi += 1e-9;
      }
      for (double r : detail::sign_change_roots(f1, lo, hi, samples, tol)) roots.push_back(r);
      for (double r : detail::sign_change_roots(f2, lo, hi, samples, tol)) roots.push_back(r);
      // The top of the mesh, lambda = alpha0^2 / 4, is a root iff alpha0 / 2 is a multiple of pi.
      if (top == 0.25 * a * a && std::abs(f2(top)) < 1e-12) roots.push_back(top);
    }
  } else {
    auto g = [&](double lam) { return charpoly_reduced_real_l0(alpha0, beta, lam); };
    double lo = window.lo, hi = window.hi;
    if (ends_on_root(g)) {
      lo -= 1e-9;
      hi += 1e-9;
    }
    roots = detail::sign_change_roots(g, lo, hi, samples, tol);
  }
  std::sort(roots.begin(), roots.end());
  // Collapse duplicates reported by both factors or adjacent cells.
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || std::abs(r - unique.back()) > 1e-9 * std::max(1.0, std::abs(r))) unique.push_back(r);
  return unique;
}

}  // namespace dynamo
