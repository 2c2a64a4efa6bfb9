#pragma once
// The ten acceptance criteria, each a self-contained numerical experiment
// returning pass/fail with a one-line account of what was measured.

#include <dynamo/analytic.hpp>
#include <dynamo/config.hpp>
#include <dynamo/continuation.hpp>
#include <dynamo/numeric.hpp>
#include <dynamo/perturbation.hpp>
#include <dynamo/scan.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace dynamo {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string config_dir = "configs";  // fig1a.json, fig1b.json
  int jobs = 1;
};

namespace acceptance {

inline std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

inline cplx nearest(const std::vector<cplx>& ev, cplx z) { return detail::nearest_eigenvalue(ev, z); }

// 1. Mesh oracle at beta = 0, gamma = 0.
inline CriterionResult mesh_oracle(const AcceptanceOptions&) {
  CriterionResult r{1, "mesh oracle", true, {}, 0.0};
  double worst = 0.0;
  for (double alpha0 : {0.0, 2.0, 4.0 * pi}) {
    const auto res = spectrum(ProblemParams(0, 0.0, AlphaProfile::constant(alpha0)), 48);
    const auto ev = res.trusted_eigenvalues();
    for (int n = 1; n <= 6; ++n)
      for (int e : {1, -1}) {
        const double want = -pi * pi * n * n + e * pi * n * alpha0;
        // lambda_4^+ vanishes at 4*pi; relative to max(|want|, 1) there.
        worst = std::max(worst, std::abs(nearest(ev, want) - want) / std::max(1.0, std::abs(want)));
      }
  }
  r.pass = worst <= 1e-8;
  r.detail = "max relative error " + fmt(worst) + " (bound 1e-8)";
  return r;
}

// 2. Every trusted eigenvalue at beta = 1 lies on a parabola.
inline CriterionResult parabola_oracle(const AcceptanceOptions&) {
  CriterionResult r{2, "parabola oracle", true, {}, 0.0};
  double worst = 0.0;
  int checked = 0;
  for (double alpha0 : {0.0, 3.0, 7.0}) {
    const auto res = spectrum(ProblemParams(0, 1.0, AlphaProfile::constant(alpha0)), 48);
    for (const auto& z : res.trusted_eigenvalues()) {
      if (z.real() < -100.0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j <= 40; ++j) best = std::min(best, std::abs(z - parabola_lambda(j, alpha0)));
      worst = std::max(worst, best);
      ++checked;
    }
  }
  r.pass = checked > 0 && worst <= 1e-6;
  r.detail = std::to_string(checked) + " eigenvalues, max distance " + fmt(worst) + " (bound 1e-6)";
  return r;
}

// 3. Crossings are fixed points of the homotopy.
inline CriterionResult homotopy_fixed_points(const AcceptanceOptions&) {
  CriterionResult r{3, "homotopy fixed points", true, {}, 0.0};
  std::vector<double> betas;
  for (int i = 0; i <= 10; ++i) betas.push_back(i / 10.0);
  double residual = 0.0, distance = 0.0;
  const auto dps = dp_catalog(0, 6);
  for (const auto& dp : dps) {
    for (double b : betas) residual = std::max(residual, std::abs(charpoly_residual_l0(dp.alpha0, b, dp.lambda)));
    distance = std::max(distance, fixed_point_audit(dp, betas, 48));
  }
  r.pass = residual <= 1e-10 && distance <= 1e-6;
  r.detail = std::to_string(dps.size()) + " crossings x 11 beta: residual " + fmt(residual) +
             " (bound 1e-10), eigenvalue distance " + fmt(distance) + " (bound 1e-6)";
  return r;
}

// 4. The companion eigenvalue leaves the crossing with slope -2 lambda_nu.
inline CriterionResult slope_law(const AcceptanceOptions&) {
  CriterionResult r{4, "Krein-signature slope law", true, {}, 0.0};
  const std::vector<DiabolicalPoint> dps = {make_crossing(0, 1, 1, 3, 1), make_crossing(0, 1, 1, 2, 1),
                                            make_crossing(0, 1, -1, 3, 1), make_crossing(0, 1, -1, 2, 1)};
  double worst = 0.0;
  std::ostringstream d;
  for (const auto& dp : dps) {
    const double slope = companion_slope(dp);
    const double want = -2.0 * dp.lambda;
    const double err = std::abs(slope - want) / std::abs(want);
    worst = std::max(worst, err);
    d << " sigma=" << (dp.sigma > 0 ? "+" : "-") << ":" << fmt(100.0 * err) << "%";
  }
  r.pass = worst <= 0.05;
  r.detail = "relative slope errors" + d.str() + " (bound 5%)";
  return r;
}

// 5. First-order accuracy of the unfolding near dp(4 pi, 3 pi^2), k = 2.
inline CriterionResult perturbation_convergence(const AcceptanceOptions&) {
  CriterionResult r{5, "perturbation convergence", true, {}, 0.0};
  const auto dp = make_crossing(0, 1, 1, 3, 1);
  auto error_at = [&](double gamma, double beta) {
    const auto profile = AlphaProfile::single_cosine(dp.alpha0, gamma, 2);
    const auto u = unfold_eigenvalues(dp, fourier_coupling(profile, dp), dp.alpha0, beta, gamma);
    const auto ev = raw_eigenvalues(ProblemParams(0, beta, profile), 48);
    return std::max(std::abs(nearest(ev, u.lambda_plus) - u.lambda_plus),
                    std::abs(nearest(ev, u.lambda_minus) - u.lambda_minus));
  };
  const double e1 = error_at(0.2, 0.02), e2 = error_at(0.1, 0.01);
  r.pass = e1 / e2 >= 3.5;
  r.detail = "error " + fmt(e1) + " -> " + fmt(e2) + ", ratio " + fmt(e1 / e2) + " (bound 3.5)";
  return r;
}

// Distance from p to the segment a-b.
inline double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

// 6. Primary tongues at beta = 0 against the first-order wedges.
inline CriterionResult primary_tongues(const AcceptanceOptions& opt) {
  CriterionResult r{6, "primary tongues", true, {}, 0.0};
  const double h = 0.02, g = 1.0;
  PlaneSpec plane{Parameter::alpha0, Parameter::gamma, -6.9, 6.9, 691, -g, g, 101};
  const ProblemParams base(0, 0.0, AlphaProfile::single_cosine(0.0, 0.0, 2));
  ScanOptions so;
  so.jobs = opt.jobs;
  const auto grid = grid_scan(base, plane, so);
  const auto contours = boundary_extract(grid);
  // Wedge lines |alpha0 - a| = w |gamma| for the three apexes.
  struct Wedge {
    double apex, half_slope;
  };
  const std::vector<Wedge> wedges = {{0.0, 0.5}, {-2.0 * pi, std::sqrt(3.0) / 4.0}, {2.0 * pi, std::sqrt(3.0) / 4.0}};
  std::vector<std::pair<Point2, Point2>> lines;
  for (const auto& w : wedges)
    for (double s : {1.0, -1.0})
      for (double gs : {1.0, -1.0}) lines.push_back({{w.apex, 0.0}, {w.apex + s * w.half_slope * g, gs * g}});
  auto to_lines = [&](Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : lines) best = std::min(best, segment_distance(p, a, b));
    return best;
  };
  double contour_to_wedge = 0.0;
  std::size_t vertices = 0;
  for (const auto& c : contours)
    for (const auto& p : c) {
      contour_to_wedge = std::max(contour_to_wedge, to_lines(p));
      ++vertices;
    }
  // Converse: the wedge lines are traced by the contour.
  double wedge_to_contour = 0.0;
  for (const auto& [a, b] : lines)
    for (int s = 5; s <= 49; ++s) {
      const double t = s / 50.0;
      const Point2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : contours)
        for (std::size_t i = 0; i + 1 < c.size(); ++i) best = std::min(best, segment_distance(p, c[i], c[i + 1]));
      wedge_to_contour = std::max(wedge_to_contour, best);
    }
  const double worst = std::max(contour_to_wedge, wedge_to_contour);
  r.pass = vertices > 0 && worst <= 2.0 * h;
  r.detail = std::to_string(grid.count(CellClass::oscillatory)) + " oscillatory cells of " +
             std::to_string(plane.cells()) + ", contour-to-wedge " + fmt(contour_to_wedge / h) +
             " cells, wedge-to-contour " + fmt(wedge_to_contour / h) + " cells (bound 2)";
  return r;
}

// Trusted nonreal eigenvalues along an alpha0 sweep.
struct NonrealSample {
  double alpha0;
  cplx lambda;
};

inline std::vector<NonrealSample> nonreal_along(const ProblemParams& base, const std::vector<double>& alphas,
                                                const SpectralWindow& window, int n = 40) {
  std::vector<NonrealSample> out;
  for (double a : alphas) {
    const auto p = base.with(Parameter::alpha0, a);
    const auto coarse = raw_eigenvalues(p, n);
    std::vector<cplx> cand;
    for (const auto& z : coarse)
      if (window.contains(z) && z.imag() > 1e-6) cand.push_back(z);
    if (cand.empty()) continue;
    const auto fine = raw_eigenvalues(p, 2 * n);
    for (const auto& z : cand)
      if (agrees(z, fine, 1e-7)) out.push_back({a, z});
  }
  return out;
}

// 7. Selection rule at beta = 0 for k = 1.
inline CriterionResult selection_rule(const AcceptanceOptions&) {
  CriterionResult r{7, "selection rule", true, {}, 0.0};
  const double reach = 20.0;
  const ProblemParams base(0, 0.0, AlphaProfile::single_cosine(0.0, 0.5, 1));
  const SpectralWindow window{-200.0, 200.0};
  const auto dps = dp_catalog(0, 12, {-reach - 2, reach + 2}, {-250, 250}, true);
  // Uniform sweep plus fine sampling across every crossing.
  std::vector<double> alphas;
  for (int i = 0; i <= 4000; ++i) alphas.push_back(-reach + 2.0 * reach * i / 4000);
  for (const auto& dp : dps)
    if (std::abs(dp.alpha0) <= reach)
      for (int i = -50; i <= 50; ++i) alphas.push_back(dp.alpha0 + 0.002 * i);
  std::sort(alphas.begin(), alphas.end());
  const auto hits = nonreal_along(base, alphas, window);
  // Each nonreal eigenvalue belongs to the crossing nearest in lambda among
  // those within 1 in alpha0.
  std::map<std::pair<int, int>, std::pair<std::size_t, double>> off;  // (j, alpha0 index) -> count, max Im
  std::size_t good = 0;
  for (const auto& h : hits) {
    const DiabolicalPoint* best = nullptr;
    for (const auto& dp : dps)
      if (std::abs(dp.alpha0 - h.alpha0) <= 1.0 &&
          (!best || std::abs(dp.lambda - h.lambda.real()) < std::abs(best->lambda - h.lambda.real())))
        best = &dp;
    if (best && best->parabola_index() == 2) {
      ++good;
      continue;
    }
    const int j = best ? best->parabola_index() : -1;
    auto& slot = off[{j, best ? static_cast<int>(std::lround(best->alpha0 / pi)) : 0}];
    ++slot.first;
    slot.second = std::max(slot.second, h.lambda.imag());
  }
  std::ostringstream d;
  d << hits.size() << " nonreal samples, " << good << " at j=2 crossings";
  for (const auto& [key, v] : off)
    d << "; " << v.first << " at j=" << key.first << " near alpha0=" << key.second << "pi (max Im " << fmt(v.second)
      << ")";
  r.pass = good > 0 && off.empty();
  r.detail = d.str();
  return r;
}

// 8. Ellipses inside, hyperbolas outside the stripe at beta = 0.2.
inline CriterionResult stripe_geometry(const AcceptanceOptions& opt) {
  CriterionResult r{8, "stripe geometry", true, {}, 0.0};
  const int k = 2;
  const double beta = 0.2, h = 0.1;
  const double tol = h * std::sqrt(2.0);
  const ProblemParams base(0, beta, AlphaProfile::single_cosine(0.0, 0.0, k));
  std::size_t cells_plus = 0, cells_minus = 0, bad = 0;
  for (const auto& dp : resonant_crossings(k, 6)) {
    if (std::abs(dp.alpha0) > 20.0) continue;
    const auto sec = cone_cross_section(dp, k, beta);
    const double half_a = 1.5, half_g = dp.sigma > 0 ? 6.0 : 4.0;  // wide enough not to clip the tongues
    PlaneSpec plane{Parameter::alpha0,
                    Parameter::gamma,
                    dp.alpha0 - half_a,
                    dp.alpha0 + half_a,
                    static_cast<int>(std::lround(2 * half_a / h)) + 1,
                    sec.centre_gamma - half_g,
                    sec.centre_gamma + half_g,
                    static_cast<int>(std::lround(2 * half_g / h)) + 1};
    ScanOptions so;
    so.jobs = opt.jobs;
    const double centre = dp.lambda * (1.0 - beta);
    so.re_window = Interval{centre - 12.0, centre + 12.0};
    const auto grid = grid_scan(base, plane, so);
    for (int j = 0; j < plane.ny; ++j)
      for (int i = 0; i < plane.nx; ++i) {
        if (grid.at(i, j) != CellClass::oscillatory) continue;
        const double x = plane.x_at(i), y = plane.y_at(j);
        // Signed distance to the stripe, positive outside.
        const double dist = (std::abs(y - beta * x) - 2.0 * pi * k * beta) / std::hypot(1.0, beta);
        if (dp.sigma > 0) {
          ++cells_plus;
          if (dist > tol) ++bad;
        } else {
          ++cells_minus;
          if (dist < -tol) ++bad;
        }
      }
  }
  r.pass = cells_plus > 0 && cells_minus > 0 && bad == 0;
  r.detail = std::to_string(cells_plus) + " sigma=+1 cells, " + std::to_string(cells_minus) +
             " sigma=-1 cells, " + std::to_string(bad) + " on the wrong side beyond one cell";
  return r;
}

// 9. Fig. 1 traces: nonreal segments at j = 2k crossings, drifting toward
// Re lambda = 0 as beta grows.
struct SegmentAttribution {
  NonrealSegment segment;
  const DiabolicalPoint* dp = nullptr;
  double distance = 0.0;
};

// Crossing whose unfolding centre path {alpha0_nu} x [lambda_nu (1 - beta), lambda_nu]
// is nearest to the segment peak; lambda distances are scaled by pi.
inline SegmentAttribution attribute(const NonrealSegment& s, const std::vector<DiabolicalPoint>& dps, double beta) {
  SegmentAttribution a{s, nullptr, std::numeric_limits<double>::infinity()};
  for (const auto& dp : dps) {
    const double lo = std::min(dp.lambda, dp.lambda * (1.0 - beta));
    const double hi = std::max(dp.lambda, dp.lambda * (1.0 - beta));
    const double re = s.peak_lambda.real();
    const double dl = re < lo ? lo - re : re > hi ? re - hi : 0.0;
    const double d = std::max(std::abs(dp.alpha0 - s.peak_parameter), dl / pi);
    if (d < a.distance) {
      a.distance = d;
      a.dp = &dp;
    }
  }
  return a;
}

inline CriterionResult fig1_traces(const AcceptanceOptions& opt) {
  CriterionResult r{9, "Fig. 1 traces", true, {}, 0.0};
  const auto dps = dp_catalog(0, 12, {}, {}, true);
  std::ostringstream d;
  bool ok = true;
  for (const char* name : {"fig1a", "fig1b"}) {
    const auto cfg = load_config(opt.config_dir + "/" + name + ".json");
    validate(cfg);
    const int k = single_mode(cfg);
    const auto base = make_params(cfg);
    TraceOptions to;
    to.n = cfg.numeric.n;
    to.trust_tolerance = cfg.numeric.trust_tolerance;
    to.imag_threshold = cfg.numeric.imag_threshold;
    const Sweep sweep{cfg.sweep.parameter, cfg.sweep.from, cfg.sweep.to, cfg.sweep.steps};
    // Peak Re lambda per crossing, at the configured beta and at a third of it.
    std::map<const DiabolicalPoint*, std::pair<double, double>> peaks;
    int segments = 0, misplaced = 0, unbracketed = 0, not_shifted = 0;
    for (double beta : {cfg.problem.beta / 3.0, cfg.problem.beta}) {
      const auto tr = trace(base.with(Parameter::beta, beta), sweep, make_window(cfg), to);
      for (const auto& s : nonreal_segments(tr, to.imag_threshold)) {
        const auto a = attribute(s, dps, beta);
        const bool at_end = s.from == tr.from || s.to == tr.to;
        if (beta == cfg.problem.beta) {
          ++segments;
          if (!a.dp || a.dp->parabola_index() != 2 * k || a.distance > 2.0) ++misplaced;
          // An interior segment is bounded by exceptional points.
          if (!at_end) {
            auto near = [&](double p) {
              return std::any_of(tr.events.begin(), tr.events.end(), [&](const EpEvent& e) {
                return std::abs(e.parameter - p) <= std::abs(tr.step) + 1e-9;
              });
            };
            if (!near(s.from) || !near(s.to)) ++unbracketed;
          }
        }
        if (at_end || !a.dp || a.dp->parabola_index() != 2 * k) continue;
        auto& slot = peaks[a.dp];
        (beta == cfg.problem.beta ? slot.second : slot.first) = std::abs(s.peak_lambda.real());
      }
    }
    int compared = 0;
    for (const auto& [dp, p] : peaks) {
      if (p.first == 0.0 || p.second == 0.0) continue;
      ++compared;
      if (!(p.second < p.first)) ++not_shifted;
    }
    const bool pass = segments > 0 && misplaced == 0 && unbracketed == 0 && compared > 0 && not_shifted == 0;
    ok = ok && pass;
    d << name << " (k=" << k << "): " << segments << " segments, " << misplaced << " off j=" << 2 * k << ", "
      << unbracketed << " without EP pair, " << compared - not_shifted << "/" << compared
      << " shifted toward 0; ";
  }
  r.pass = ok;
  r.detail = d.str();
  return r;
}

// 10. Reality at gamma = 0.
inline CriterionResult reality(const AcceptanceOptions&) {
  CriterionResult r{10, "reality at gamma = 0", true, {}, 0.0};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> alpha(-20.0, 20.0), beta(0.0, 1.0);
  int failures = 0, points = 0;
  for (int l : {0, 1})
    for (int i = 0; i < 50; ++i) {
      const double a = alpha(rng), b = beta(rng);
      if (!reality_check(spectrum(ProblemParams(l, b, AlphaProfile::constant(a)), 40))) ++failures;
      ++points;
    }
  r.pass = failures == 0;
  r.detail = std::to_string(points) + " random points (50 per l), " + std::to_string(failures) + " with nonreal trusted eigenvalues";
  return r;
}

}  // namespace acceptance

using CriterionFn = std::function<CriterionResult(const AcceptanceOptions&)>;

inline const std::vector<CriterionFn>& acceptance_criteria() {
  static const std::vector<CriterionFn> all = {
      acceptance::mesh_oracle,         acceptance::parabola_oracle, acceptance::homotopy_fixed_points,
      acceptance::slope_law,           acceptance::perturbation_convergence, acceptance::primary_tongues,
      acceptance::selection_rule,      acceptance::stripe_geometry, acceptance::fig1_traces,
      acceptance::reality};
  return all;
}

/// Runs criterion `id` (1-based), timing it.
inline CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  const auto& all = acceptance_criteria();
  if (id < 1 || id > static_cast<int>(all.size())) throw ValidationError("no acceptance criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = all[static_cast<std::size_t>(id - 1)](opt);
  } catch (const std::exception& e) {
    r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // Stated runtime budgets.
  const double budget = id == 1 ? 10.0 : id == 6 ? 900.0 : 0.0;
  if (budget > 0.0 && r.seconds > budget) {
    r.pass = false;
    r.detail += "; runtime " + acceptance::fmt(r.seconds) + " s exceeds " + acceptance::fmt(budget) + " s";
  }
  return r;
}

}  // namespace dynamo
