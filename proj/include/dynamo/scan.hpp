#pragma once
// Two-parameter classification grids (numerical Arnold tongues) and the
// first-order boundaries to compare them with.

#include <dynamo/analytic.hpp>
#include <dynamo/contour.hpp>
#include <dynamo/error.hpp>
#include <dynamo/model.hpp>
#include <dynamo/numeric.hpp>
#include <dynamo/perturbation.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <optional>
#include <cmath>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace dynamo {

/// Rectilinear grid over two model parameters; the third stays at the
/// value held by the base parameters.
struct PlaneSpec {
  Parameter x = Parameter::alpha0;
  Parameter y = Parameter::gamma;
  double x_min = 0.0, x_max = 1.0;
  int nx = 2;
  double y_min = 0.0, y_max = 1.0;
  int ny = 2;

  [[nodiscard]] double x_at(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
  [[nodiscard]] double y_at(int j) const { return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1); }
  [[nodiscard]] std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  void validate() const {
    if (x == y) throw ValidationError("scan plane: the two axes must differ");
    if (nx < 1 || ny < 1) throw ValidationError("scan plane: resolutions must be positive");
    if (cells() > 1'000'000) throw ValidationError("scan plane: at most 10^6 cells");
    for (auto [p, lo, hi] : {std::tuple{x, x_min, x_max}, std::tuple{y, y_min, y_max}}) {
      if (!(lo <= hi)) throw ValidationError("scan plane: empty range for " + to_string(p));
      if (p == Parameter::beta && (lo < 0.0 || hi > 1.0))
        throw ValidationError("scan plane: beta range must lie in [0, 1]");
    }
  }
};

enum class CellClass { real, oscillatory, invalid };

inline const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::real: return "real";
    case CellClass::oscillatory: return "oscillatory";
    case CellClass::invalid: return "invalid";
  }
  return "?";
}

struct ScanOptions {
  int n = 40;
  double trust_tolerance = 1e-7;
  double imag_threshold = 1e-6;
  Interval re_window;  // only eigenvalues with Re lambda in here count
  int jobs = 1;
};

struct ToneGrid {
  PlaneSpec plane;
  double imag_threshold = 1e-6;
  std::vector<double> value;  // max |Im lambda| per cell, index i + nx * j
  std::vector<CellClass> cls;

  [[nodiscard]] std::size_t index(int i, int j) const { return static_cast<std::size_t>(i + plane.nx * j); }
  [[nodiscard]] CellClass at(int i, int j) const { return cls[index(i, j)]; }
  [[nodiscard]] std::size_t count(CellClass c) const {
    return static_cast<std::size_t>(std::count(cls.begin(), cls.end(), c));
  }
};

/// Largest |Im lambda| among trusted eigenvalues with Re lambda in the
/// window.  Only eigenvalues above the threshold need the 2N trust check;
/// the rest cannot change the classification, so their value is reported
/// from the N solve alone.
inline double cell_max_imag(const ProblemParams& params, const ScanOptions& opt) {
  const auto coarse = raw_eigenvalues(params, opt.n);
  double below = 0.0;
  std::vector<cplx> candidates;
  for (const auto& z : coarse) {
    if (!opt.re_window.contains(z.real())) continue;
    const double im = std::abs(z.imag());
    if (im > opt.imag_threshold) candidates.push_back(z);
    else below = std::max(below, im);
  }
  if (candidates.empty()) return below;
  const auto fine = raw_eigenvalues(params, 2 * opt.n);
  double above = below;
  for (const auto& z : candidates)
    if (agrees(z, fine, opt.trust_tolerance)) above = std::max(above, std::abs(z.imag()));
  return above;
}

inline void classify(ToneGrid& grid, double imag_threshold) {
  grid.imag_threshold = imag_threshold;
  for (std::size_t c = 0; c < grid.value.size(); ++c) {
    if (grid.cls[c] == CellClass::invalid) continue;
    grid.cls[c] = grid.value[c] > imag_threshold ? CellClass::oscillatory : CellClass::real;
  }
}

/// Classifies every cell of the plane.  Cells are independent; the result
/// does not depend on `jobs`.
inline ToneGrid grid_scan(const ProblemParams& base, const PlaneSpec& plane, const ScanOptions& opt = {}) {
  plane.validate();
  ToneGrid grid;
  grid.plane = plane;
  grid.value.assign(plane.cells(), 0.0);
  grid.cls.assign(plane.cells(), CellClass::real);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < plane.cells(); c = next++) {
      const int i = static_cast<int>(c % plane.nx);
      const int j = static_cast<int>(c / plane.nx);
      try {
        const auto p = base.with(plane.x, plane.x_at(i)).with(plane.y, plane.y_at(j));
        grid.value[c] = cell_max_imag(p, opt);
      } catch (const std::exception&) {
        grid.cls[c] = CellClass::invalid;
        grid.value[c] = 0.0;
      }
    }
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  classify(grid, opt.imag_threshold);
  return grid;
}

/// Contours between oscillatory and non-oscillatory cells.
inline std::vector<Polyline> boundary_extract(const ToneGrid& grid) {
  std::vector<bool> flag(grid.cls.size());
  for (std::size_t c = 0; c < flag.size(); ++c) flag[c] = grid.cls[c] == CellClass::oscillatory;
  std::vector<double> xs(grid.plane.nx), ys(grid.plane.ny);
  for (int i = 0; i < grid.plane.nx; ++i) xs[i] = grid.plane.x_at(i);
  for (int j = 0; j < grid.plane.ny; ++j) ys[j] = grid.plane.y_at(j);
  return marching_squares(flag, grid.plane.nx, grid.plane.ny, xs, ys);
}

// ---------------------------------------------------------------------------
// First-order overlays

struct OverlayCurve {
  std::string kind;  // "wedge", "hyperbola", "ellipse", "apex", "stripe", "cone"
  std::optional<DiabolicalPoint> dp;
  std::vector<Polyline> pieces;
};

namespace detail {

// Real roots y of D(x, y) = 0 for the cone restricted to the plane, where
// (x, y) are plane coordinates and the remaining parameter is fixed.
inline std::vector<double> cone_roots_in_y(const UnfoldingCone& cone, const PlaneSpec& plane,
                                           const ProblemParams& base, double x) {
  auto coords = [&](double y) {
    std::array<double, 3> v{base.profile().alpha0(), base.beta(), base.profile().gamma()};
    auto slot = [](Parameter p) { return p == Parameter::alpha0 ? 0 : p == Parameter::beta ? 1 : 2; };
    v[slot(plane.x)] = x;
    v[slot(plane.y)] = y;
    return v;
  };
  // D is quadratic in y: sample three points to get its coefficients.
  auto d_at = [&](double y) {
    const auto v = coords(y);
    return cone.discriminant_at(v[0], v[1], v[2]);
  };
  const double f0 = d_at(0.0), f1 = d_at(1.0), fm = d_at(-1.0);
  const double a = 0.5 * (f1 + fm) - f0;
  const double b = 0.5 * (f1 - fm);
  const double c = f0;
  std::vector<double> roots;
  if (std::abs(a) < 1e-14 * (std::abs(b) + std::abs(c) + 1.0)) {
    if (b != 0.0) roots.push_back(-c / b);
    return roots;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return roots;
  const double s = std::sqrt(disc);
  roots.push_back((-b - s) / (2.0 * a));
  roots.push_back((-b + s) / (2.0 * a));
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline Polyline sample_line(const Line& line, double x0, double x1) {
  return {Point2{x0, line.at(x0)}, Point2{x1, line.at(x1)}};
}

}  // namespace detail

/// First-order boundaries for dalpha = cos(2 pi k r) in the scan plane:
/// wedges at beta = 0, hyperbolas and ellipses at beta != 0, stripe lines
/// gamma = beta (alpha0 -+ 2 pi |k|) in the (alpha0, gamma) plane, and
/// generic D = 0 slices in the other planes.
inline std::vector<OverlayCurve> analytic_overlay(const PlaneSpec& plane, const ProblemParams& base,
                                                  const std::vector<DiabolicalPoint>& dps, int k,
                                                  int samples = 400) {
  plane.validate();
  std::vector<OverlayCurve> out;
  const bool alpha_gamma = plane.x == Parameter::alpha0 && plane.y == Parameter::gamma;
  const double beta = base.beta();
  for (const auto& dp : dps) {
    if (dp.parabola_index() != 2 * std::abs(k)) continue;
    if (alpha_gamma) {
      const auto sec = cone_cross_section(dp, k, beta);
      OverlayCurve curve{to_string(sec.kind), dp, {}};
      const double ca = sec.centre_alpha0, cg = sec.centre_gamma;
      const double m = std::abs(sec.gamma_coeff), a4 = sec.alpha_coeff;
      switch (sec.kind) {
        case ConicKind::point:
          curve.kind = "apex";
          curve.pieces.push_back({Point2{ca, cg}});
          break;
        case ConicKind::wedge: {
          const double slope = std::sqrt(a4 / m);  // gamma - c_g = +-slope (alpha0 - c_a)
          for (double s : {slope, -slope}) {
            const Line l{s, cg - s * ca};
            curve.pieces.push_back(detail::sample_line(l, plane.x_min, plane.x_max));
          }
          break;
        }
        case ConicKind::ellipse: {
          const double ra = std::sqrt(sec.rhs / a4), rg = std::sqrt(sec.rhs / m);
          Polyline p;
          for (int s = 0; s <= samples; ++s) {
            const double t = 2.0 * pi * s / samples;
            p.push_back({ca + ra * std::cos(t), cg + rg * std::sin(t)});
          }
          curve.pieces.push_back(std::move(p));
          break;
        }
        case ConicKind::hyperbola: {
          // m (gamma - c_g)^2 = a4 (alpha0 - c_a)^2 + |rhs|: two branches in gamma.
          for (double sign : {1.0, -1.0}) {
            Polyline p;
            for (int s = 0; s <= samples; ++s) {
              const double x = plane.x_min + (plane.x_max - plane.x_min) * s / samples;
              const double dx = x - ca;
              p.push_back({x, cg + sign * std::sqrt((a4 * dx * dx - sec.rhs) / m)});
            }
            curve.pieces.push_back(std::move(p));
          }
          break;
        }
      }
      out.push_back(std::move(curve));
    } else {
      const auto cone = unfolding_cone(dp, 0.5, k);
      OverlayCurve curve{"cone", dp, {}};
      std::vector<Polyline> lower(1), upper(1);
      for (int s = 0; s <= samples; ++s) {
        const double x = plane.x_min + (plane.x_max - plane.x_min) * s / samples;
        const auto roots = detail::cone_roots_in_y(cone, plane, base, x);
        if (roots.size() == 2) {
          lower.back().push_back({x, roots[0]});
          upper.back().push_back({x, roots[1]});
        } else {
          if (!lower.back().empty()) lower.emplace_back();
          if (!upper.back().empty()) upper.emplace_back();
        }
      }
      for (auto* group : {&lower, &upper})
        for (auto& p : *group)
          if (!p.empty()) curve.pieces.push_back(std::move(p));
      out.push_back(std::move(curve));
    }
  }
  if (alpha_gamma && beta != 0.0) {
    const double kk = std::abs(k);
    OverlayCurve stripe{"stripe", std::nullopt, {}};
    for (double sign : {-1.0, 1.0})
      stripe.pieces.push_back(detail::sample_line(Line{beta, sign * 2.0 * pi * kk * beta}, plane.x_min, plane.x_max));
    out.push_back(std::move(stripe));
  }
  return out;
}

/// True iff (alpha0, gamma) lies strictly between the stripe lines
/// gamma = beta (alpha0 -+ 2 pi |k|).
inline bool inside_stripe(int k, double beta, double alpha0, double gamma) {
  const double half = 2.0 * pi * std::abs(k) * beta;
  const double offset = gamma - beta * alpha0;
  return std::abs(offset) < half;
}

}  // namespace dynamo
