#pragma once
// Domain model for the mean-field alpha^2-dynamo boundary eigenvalue problem.
//
// The radial problem for spherical-harmonic degree l couples the poloidal and
// toroidal amplitudes f = (f1, f2) on r in [0, 1]:
//
//   l0 f'' + l1 f' + l2 f = lambda f,
//
//   l0 = [[1, 0], [-alpha, 1]],   l1 = d/dr l0 = [[0, 0], [-alpha', 0]],
//   l2 = [[-q, alpha], [alpha q, -q]],   q = l(l+1)/r^2,
//
// with boundary conditions f1(0) = f2(0) = f2(1) = 0 and the homotopy row
// beta f1'(1) + (beta l + 1 - beta) f1(1) = 0.  beta = 0 is the perfectly
// conducting exterior, beta = 1 the insulating one.

#include <dynamo/error.hpp>

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dynamo {

inline constexpr double pi = std::numbers::pi;

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) throw ValidationError("spline: x and y differ in length");
    if (x_.size() < 4) throw ValidationError("insufficient profile resolution");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1])) throw ValidationError("spline: abscissae must be strictly increasing");
    solve_moments();
  }

  /// Value and first derivative at t; linear extrapolation outside the table.
  [[nodiscard]] std::pair<double, double> evaluate(double t) const {
    const std::size_t n = x_.size();
    if (t <= x_.front()) {
      const double d = derivative_at_knot(0);
      return {y_.front() + d * (t - x_.front()), d};
    }
    if (t >= x_.back()) {
      const double d = derivative_at_knot(n - 1);
      return {y_.back() + d * (t - x_.back()), d};
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    const double value = a * y_[i] + b * y_[i + 1] +
                         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    const double slope = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) * h * m_[i] / 6.0 +
                         (3.0 * b * b - 1.0) * h * m_[i + 1] / 6.0;
    return {value, slope};
  }

  [[nodiscard]] const std::vector<double>& knots() const { return x_; }
  [[nodiscard]] const std::vector<double>& values() const { return y_; }

 private:
  // Second-derivative moments, m_0 = m_{n-1} = 0 (Thomas algorithm).
  void solve_moments() {
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double diag = 2.0 * (h0 + h1);
      const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
      const double denom = diag - h0 * c[i - 1];
      c[i] = h1 / denom;
      d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  [[nodiscard]] double derivative_at_knot(std::size_t i) const {
    if (i + 1 < x_.size()) {
      const double h = x_[i + 1] - x_[i];
      return (y_[i + 1] - y_[i]) / h - h * (2.0 * m_[i] + m_[i + 1]) / 6.0;
    }
    const double h = x_[i] - x_[i - 1];
    return (y_[i] - y_[i - 1]) / h + h * (m_[i - 1] + 2.0 * m_[i]) / 6.0;
  }

  std::vector<double> x_, y_, m_;
};

/// One term weight * cos(2 pi k r) of the inhomogeneity.
struct CosineTerm {
  int k = 1;
  double weight = 1.0;
};

struct AlphaValue {
  double alpha = 0.0;
  double alpha_prime = 0.0;
};

/// Helical turbulence profile alpha(r) = alpha0 + gamma * dalpha(r).
///
/// dalpha is the sum of a finite cosine series and, optionally, a tabulated
/// part interpolated by a natural cubic spline.  Instances are immutable;
/// the with_* members return modified copies.
class AlphaProfile {
 public:
  AlphaProfile() = default;

  AlphaProfile(double alpha0, double gamma, std::vector<CosineTerm> terms = {})
      : alpha0_(alpha0), gamma_(gamma), terms_(std::move(terms)) {
    if (!std::isfinite(alpha0_) || !std::isfinite(gamma_))
      throw ValidationError("profile: alpha0 and gamma must be finite");
    for (const auto& t : terms_)
      if (t.k < 1) throw ValidationError("profile: cosine mode k must be a positive integer");
  }

  static AlphaProfile constant(double alpha0) { return AlphaProfile(alpha0, 0.0); }

  static AlphaProfile single_cosine(double alpha0, double gamma, int k) {
    return AlphaProfile(alpha0, gamma, {CosineTerm{k, 1.0}});
  }

  /// Adds a tabulated dalpha(r) sampled on [0, 1].
  [[nodiscard]] AlphaProfile with_samples(std::vector<double> r, std::vector<double> dalpha) const {
    AlphaProfile copy = *this;
    if (!r.empty() && (r.front() < 0.0 || r.back() > 1.0))
      throw ValidationError("profile: sample abscissae must lie in [0, 1]");
    copy.samples_.emplace(std::move(r), std::move(dalpha));
    return copy;
  }

  [[nodiscard]] AlphaProfile with_alpha0(double alpha0) const {
    AlphaProfile copy = *this;
    copy.alpha0_ = alpha0;
    return copy;
  }

  [[nodiscard]] AlphaProfile with_gamma(double gamma) const {
    AlphaProfile copy = *this;
    copy.gamma_ = gamma;
    return copy;
  }

  [[nodiscard]] double alpha0() const { return alpha0_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] const std::vector<CosineTerm>& cosine_terms() const { return terms_; }
  [[nodiscard]] const std::optional<NaturalCubicSpline>& samples() const { return samples_; }
  [[nodiscard]] bool has_samples() const { return samples_.has_value(); }

  /// dalpha(r) and dalpha'(r).
  [[nodiscard]] std::pair<double, double> inhomogeneity(double r) const {
    double value = 0.0, slope = 0.0;
    for (const auto& t : terms_) {
      const double w = 2.0 * pi * t.k;
      value += t.weight * std::cos(w * r);
      slope -= t.weight * w * std::sin(w * r);
    }
    if (samples_) {
      const auto [v, s] = samples_->evaluate(r);
      value += v;
      slope += s;
    }
    return {value, slope};
  }

 private:
  double alpha0_ = 0.0;
  double gamma_ = 0.0;
  std::vector<CosineTerm> terms_;
  std::optional<NaturalCubicSpline> samples_;
};

/// alpha(r) and alpha'(r); the cosine series is differentiated analytically.
inline AlphaValue evaluate_alpha(const AlphaProfile& profile, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("evaluate_alpha: r must lie in [0, 1]");
  const auto [d, dp] = profile.inhomogeneity(r);
  return {profile.alpha0() + profile.gamma() * d, profile.gamma() * dp};
}

/// |integral_0^1 dalpha(r) dr| by 64-point Gauss-Legendre quadrature.
inline double zero_mean_check(const AlphaProfile& profile) {
  using boost::math::quadrature::gauss;
  const double mean =
      gauss<double, 64>::integrate([&](double r) { return profile.inhomogeneity(r).first; }, 0.0, 1.0);
  return std::abs(mean);
}

/// Swept or scanned model parameter.
enum class Parameter { alpha0, beta, gamma };

inline std::string to_string(Parameter p) {
  switch (p) {
    case Parameter::alpha0: return "alpha0";
    case Parameter::beta: return "beta";
    case Parameter::gamma: return "gamma";
  }
  return "?";
}

inline Parameter parameter_from_string(const std::string& name) {
  if (name == "alpha0") return Parameter::alpha0;
  if (name == "beta") return Parameter::beta;
  if (name == "gamma") return Parameter::gamma;
  throw ValidationError("unknown parameter '" + name + "' (expected alpha0, beta or gamma)");
}

/// Degree l, homotopy beta in [0, 1] and the alpha profile.
class ProblemParams {
 public:
  ProblemParams(int l, double beta, AlphaProfile profile) : l_(l), beta_(beta), profile_(std::move(profile)) {
    if (l_ < 0) throw ValidationError("l must be a nonnegative integer");
    if (!(beta_ >= 0.0 && beta_ <= 1.0)) throw ValidationError("beta must lie in [0, 1]");
  }

  [[nodiscard]] int l() const { return l_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] const AlphaProfile& profile() const { return profile_; }

  [[nodiscard]] double get(Parameter p) const {
    switch (p) {
      case Parameter::alpha0: return profile_.alpha0();
      case Parameter::beta: return beta_;
      case Parameter::gamma: return profile_.gamma();
    }
    return 0.0;
  }

  [[nodiscard]] ProblemParams with(Parameter p, double value) const {
    switch (p) {
      case Parameter::alpha0: return {l_, beta_, profile_.with_alpha0(value)};
      case Parameter::beta: return {l_, value, profile_};
      case Parameter::gamma: return {l_, beta_, profile_.with_gamma(value)};
    }
    return *this;
  }

 private:
  int l_ = 0;
  double beta_ = 0.0;
  AlphaProfile profile_;
};

/// 2x2 real matrix, row-major.
using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

/// Pointwise coefficients of the expanded two-component system.
struct OdeCoefficients {
  Mat2 l0{};
  Mat2 l1{};
  Mat2 l2{};  // without the -lambda on the diagonal
};

/// Explicit statement of the boundary eigenvalue problem for given parameters.
class OdeSystem {
 public:
  explicit OdeSystem(ProblemParams params) : params_(std::move(params)) {}

  [[nodiscard]] const ProblemParams& params() const { return params_; }

  /// l(l+1)/r^2; r must be positive when l > 0.
  [[nodiscard]] double centrifugal(double r) const {
    const int l = params_.l();
    if (l == 0) return 0.0;
    return static_cast<double>(l * (l + 1)) / (r * r);
  }

  [[nodiscard]] OdeCoefficients coefficients(double r) const {
    const auto a = evaluate_alpha(params_.profile(), r);
    const double q = centrifugal(r);
    OdeCoefficients c;
    c.l0 = {{{1.0, 0.0}, {-a.alpha, 1.0}}};
    c.l1 = {{{0.0, 0.0}, {-a.alpha_prime, 0.0}}};
    c.l2 = {{{-q, a.alpha}, {a.alpha * q, -q}}};
    return c;
  }

  /// (l0 f'' + l1 f' + l2 f) - lambda f.
  [[nodiscard]] Vec2 matrix_residual(double r, const Vec2& f, const Vec2& fp, const Vec2& fpp,
                                     double lambda) const {
    const auto c = coefficients(r);
    Vec2 out{};
    for (int i = 0; i < 2; ++i) {
      double s = -lambda * f[i];
      for (int j = 0; j < 2; ++j) s += c.l0[i][j] * fpp[j] + c.l1[i][j] * fp[j] + c.l2[i][j] * f[j];
      out[i] = s;
    }
    return out;
  }

  /// Component form E1, E2 written out term by term.
  [[nodiscard]] Vec2 component_residual(double r, const Vec2& f, const Vec2& fp, const Vec2& fpp,
                                        double lambda) const {
    const auto a = evaluate_alpha(params_.profile(), r);
    const double q = centrifugal(r);
    const double e1 = fpp[0] - q * f[0] + a.alpha * f[1] - lambda * f[0];
    const double e2 = fpp[1] - q * f[1] - a.alpha * fpp[0] - a.alpha_prime * fp[0] + a.alpha * q * f[0] -
                      lambda * f[1];
    return {e1, e2};
  }

  /// The 4x8 boundary matrix [A, B] acting on (f(0), f'(0), f(1), f'(1)).
  [[nodiscard]] std::array<std::array<double, 8>, 4> boundary_matrix() const {
    const double b = params_.beta();
    const double robin = b * params_.l() + 1.0 - b;
    std::array<std::array<double, 8>, 4> u{};
    u[0][0] = 1.0;    // f1(0)
    u[1][1] = 1.0;    // f2(0)
    u[2][4] = robin;  // f1(1)
    u[2][6] = b;      // f1'(1)
    u[3][5] = 1.0;    // f2(1)
    return u;
  }

  /// Coefficient of f1(1) in the r = 1 homotopy row.
  [[nodiscard]] double robin_coefficient() const {
    return params_.beta() * params_.l() + 1.0 - params_.beta();
  }

 private:
  ProblemParams params_;
};

}  // namespace dynamo
