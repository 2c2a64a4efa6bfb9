#pragma once
// Eigenvalue branches along one parameter, exceptional-point location and
// numerical audits of the diabolical-point homotopy.

#include <dynamo/analytic.hpp>
#include <dynamo/error.hpp>
#include <dynamo/model.hpp>
#include <dynamo/numeric.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dynamo {

struct Sweep {
  Parameter parameter = Parameter::alpha0;
  double from = 0.0;
  double to = 0.0;
  int steps = 16;
};

struct TraceOptions {
  int n = 40;
  double trust_tolerance = 1e-7;
  double imag_threshold = 1e-6;  // |Im lambda| above this is nonreal
  int max_halvings = 6;
  double ep_tolerance = 1e-8;          // double-precision bisection width
  double ep_refine_tolerance = 1e-12;  // extended-precision refinement width
};

struct TracePoint {
  double parameter = 0.0;
  std::vector<cplx> eigenvalues;  // trusted, inside the window
  std::vector<int> branch_ids;
};

/// Exceptional point between two trace points, refined by bisection.
struct EpEvent {
  double parameter = 0.0;
  cplx lambda;
  int branch_a = -1;
  int branch_b = -1;
  bool real_to_complex = true;  // in the direction of the sweep
};

struct BranchTrace {
  Parameter parameter = Parameter::alpha0;
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
  std::vector<TracePoint> points;
  std::vector<EpEvent> events;
  bool degenerate_matching = false;
  int branch_count = 0;
};

namespace detail {

inline bool nonreal(cplx z, double threshold) { return std::abs(z.imag()) > threshold; }

inline double min_gap(const std::vector<cplx>& v) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) g = std::min(g, std::abs(v[a] - v[b]));
  return g;
}

struct Matching {
  std::vector<int> ids;  // per current eigenvalue, -1 if unmatched
  bool complete = true;  // every previous eigenvalue found a partner
  bool ambiguous = false;
};

// Greedy nearest-neighbour matching: candidate pairs within `radius` are
// taken in order of distance, so a collision is resolved in favour of the
// closer pair and the loser falls back to its next-nearest candidate.
inline Matching match(const std::vector<cplx>& prev, const std::vector<int>& prev_ids,
                      const std::vector<cplx>& cur, double radius, bool fallback) {
  struct Cand {
    double d;
    std::size_t p, c;
  };
  std::vector<Cand> cands;
  for (std::size_t p = 0; p < prev.size(); ++p)
    for (std::size_t c = 0; c < cur.size(); ++c) {
      const double d = std::abs(prev[p] - cur[c]);
      if (d < radius) cands.push_back({d, p, c});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.d < b.d; });
  Matching m;
  m.ids.assign(cur.size(), -1);
  std::vector<bool> used_prev(prev.size(), false);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    if (used_prev[c.p] || m.ids[c.c] != -1) continue;
    for (std::size_t j = i + 1; j < cands.size() && cands[j].d - c.d < 1e-12; ++j)
      if ((cands[j].p == c.p && m.ids[cands[j].c] == -1) || (cands[j].c == c.c && !used_prev[cands[j].p]))
        m.ambiguous = true;
    used_prev[c.p] = true;
    m.ids[c.c] = prev_ids[c.p];
  }
  // Leftovers near an exceptional point: the pair partner sets the global
  // gap, so each leftover may move up to half the distance to its second
  // nearest neighbour instead.  Only once halving the step has stopped
  // helping; earlier it would swap branches at ordinary crossings.
  for (std::size_t p = 0; p < prev.size() && fallback; ++p) {
    if (used_prev[p]) continue;
    double first = std::numeric_limits<double>::infinity(), second = first;
    for (std::size_t q = 0; q < prev.size(); ++q) {
      if (q == p) continue;
      const double d = std::abs(prev[p] - prev[q]);
      if (d < first) {
        second = first;
        first = d;
      } else if (d < second) {
        second = d;
      }
    }
    long best = -1;
    double best_d = 0.5 * second;
    for (std::size_t c = 0; c < cur.size(); ++c) {
      if (m.ids[c] != -1) continue;
      const double d = std::abs(prev[p] - cur[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<long>(c);
      }
    }
    if (best >= 0) {
      used_prev[p] = true;
      m.ids[static_cast<std::size_t>(best)] = prev_ids[p];
    }
  }
  m.complete = std::all_of(used_prev.begin(), used_prev.end(), [](bool b) { return b; });
  return m;
}

inline std::vector<cplx> trusted_in_window(const ProblemParams& params, const SpectralWindow& window,
                                           const TraceOptions& opt) {
  SpectrumOptions so;
  so.trust_tolerance = opt.trust_tolerance;
  return spectrum(params, opt.n, window, so).trusted_eigenvalues();
}

// Eigenvalue of the N-discretization nearest to z.
inline cplx nearest_eigenvalue(const std::vector<cplx>& ev, cplx z) {
  if (ev.empty()) throw NumericalError("empty spectrum");
  return *std::min_element(ev.begin(), ev.end(),
                           [&](cplx a, cplx b) { return std::abs(a - z) < std::abs(b - z); });
}

}  // namespace detail

struct EpLocation {
  double parameter = 0.0;
  cplx lambda;                 // mean of the coalescing pair
  double split = 0.0;          // |lambda_1 - lambda_2| at the estimate
  double eigenvector_angle = 0.0;  // radians between the pair's eigenvectors
};

namespace detail {

using xcplx = std::complex<long double>;
using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Near an exceptional point a pair splits like sqrt(eps |A|) in double,
// about 1e-5 at N = 40; extended precision lowers that floor so the
// coalescence is visible.
struct ExtendedSpectrum {
  std::vector<xcplx> eigenvalues;
  Eigen::Matrix<xcplx, Eigen::Dynamic, Eigen::Dynamic> vectors;  // reduced coordinates
};

inline ExtendedSpectrum extended_spectrum(const ReducedProblem& red, bool want_vectors) {
  Eigen::EigenSolver<MatrixXld> es(red.matrix.cast<long double>(), want_vectors);
  if (es.info() != Eigen::Success) throw NumericalError("extended-precision eigensolver did not converge");
  ExtendedSpectrum out;
  const auto& ev = es.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (want_vectors) out.vectors = es.eigenvectors();
  return out;
}

}  // namespace detail

/// Locates the exceptional point between `lo` and `hi` where the pair of
/// eigenvalues nearest `hint` changes from real-split to complex-conjugate.
/// Bisection runs in double down to `ep_tolerance`, then in extended
/// precision down to `ep_refine_tolerance`.
inline EpLocation ep_locate(const ProblemParams& base, Parameter parameter, double lo, double hi, cplx hint,
                            const TraceOptions& opt = {}) {
  auto status = [&](double p, cplx& ref) {
    const auto ev = raw_eigenvalues(base.with(parameter, p), opt.n);
    const cplx z = detail::nearest_eigenvalue(ev, ref);
    ref = cplx(z.real(), 0.0);
    return detail::nonreal(z, opt.imag_threshold);
  };
  auto nearest_extended = [&](const std::vector<detail::xcplx>& ev, cplx ref) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
      if (std::abs(cplx(ev[i]) - ref) < std::abs(cplx(ev[best]) - ref)) best = i;
    return best;
  };
  auto status_extended = [&](double p, cplx& ref) {
    const auto ex = detail::extended_spectrum(reduce(assemble(base.with(parameter, p), opt.n)), false);
    const auto z = ex.eigenvalues[nearest_extended(ex.eigenvalues, ref)];
    ref = cplx(static_cast<double>(z.real()), 0.0);
    return std::abs(z.imag()) > 1e-12L * std::max(1.0L, std::abs(z));
  };
  cplx ref_lo(hint.real(), 0.0), ref_hi(hint.real(), 0.0);
  const bool s_lo = status(lo, ref_lo);
  const bool s_hi = status(hi, ref_hi);
  if (s_lo == s_hi) throw ValidationError("bracket invalid: same reality type at both ends");
  cplx ref(0.5 * (ref_lo.real() + ref_hi.real()), 0.0);
  while (std::abs(hi - lo) > opt.ep_tolerance) {
    const double mid = 0.5 * (lo + hi);
    cplx r = ref;
    if (status(mid, r) == s_lo) lo = mid; else hi = mid;
    ref = r;
  }
  if (opt.ep_refine_tolerance < opt.ep_tolerance) {
    // The double-precision verdict is unreliable this close to the EP, so
    // re-establish the bracket ends before refining.
    cplx r_lo = ref, r_hi = ref;
    const bool e_lo = status_extended(lo, r_lo);
    const bool e_hi = status_extended(hi, r_hi);
    if (e_lo != e_hi) {
      while (std::abs(hi - lo) > opt.ep_refine_tolerance) {
        const double mid = 0.5 * (lo + hi);
        cplx r = ref;
        if (status_extended(mid, r) == e_lo) lo = mid; else hi = mid;
        ref = r;
      }
    }
  }
  EpLocation out;
  out.parameter = 0.5 * (lo + hi);
  const auto red = reduce(assemble(base.with(parameter, out.parameter), opt.n));
  const auto ex = detail::extended_spectrum(red, true);
  std::vector<std::size_t> idx(ex.eigenvalues.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(cplx(ex.eigenvalues[a]) - ref) < std::abs(cplx(ex.eigenvalues[b]) - ref);
  });
  const auto z1 = ex.eigenvalues[idx[0]], z2 = ex.eigenvalues[idx[1]];
  out.lambda = cplx(0.5L * (z1 + z2));
  out.split = static_cast<double>(std::abs(z1 - z2));
  // Angle between the lifted nodal eigenvectors.
  const auto lift = red.lift.cast<detail::xcplx>();
  const Eigen::Matrix<detail::xcplx, Eigen::Dynamic, 1> v1 = lift * ex.vectors.col(static_cast<Eigen::Index>(idx[0]));
  const Eigen::Matrix<detail::xcplx, Eigen::Dynamic, 1> v2 = lift * ex.vectors.col(static_cast<Eigen::Index>(idx[1]));
  const long double c = std::min(1.0L, std::abs(v1.dot(v2)) / (v1.norm() * v2.norm()));
  out.eigenvector_angle = static_cast<double>(std::acos(c));
  return out;
}

/// Follows the trusted eigenvalues inside `window` along the sweep.
inline BranchTrace trace(const ProblemParams& base, const Sweep& sweep, const SpectralWindow& window,
                         const TraceOptions& opt = {}) {
  BranchTrace tr;
  tr.parameter = sweep.parameter;
  tr.from = sweep.from;
  tr.to = sweep.to;
  // Both endpoints must be admissible parameter values.
  [[maybe_unused]] const auto check_from = base.with(sweep.parameter, sweep.from);
  [[maybe_unused]] const auto check_to = base.with(sweep.parameter, sweep.to);

  auto first = detail::trusted_in_window(base.with(sweep.parameter, sweep.from), window, opt);
  TracePoint p0{sweep.from, first, {}};
  for (std::size_t i = 0; i < first.size(); ++i) p0.branch_ids.push_back(tr.branch_count++);
  tr.points.push_back(p0);
  if (sweep.from == sweep.to) return tr;
  if (sweep.steps < 16) throw ValidationError("trace: at least 16 steps are required");
  tr.step = (sweep.to - sweep.from) / sweep.steps;

  // Advance from the last point to `target`, halving the step when matching fails.
  auto advance = [&](auto&& self, double target, int depth) -> void {
    const TracePoint& prev = tr.points.back();
    auto cur = detail::trusted_in_window(base.with(sweep.parameter, target), window, opt);
    const double radius = 0.5 * detail::min_gap(prev.eigenvalues);
    // Linear predictor from the last two points, per branch.
    auto predicted = prev.eigenvalues;
    if (tr.points.size() >= 2) {
      const TracePoint& pp = tr.points[tr.points.size() - 2];
      const double ratio = (target - prev.parameter) / (prev.parameter - pp.parameter);
      for (std::size_t a = 0; a < predicted.size(); ++a)
        for (std::size_t b = 0; b < pp.eigenvalues.size(); ++b)
          if (pp.branch_ids[b] == prev.branch_ids[a])
            predicted[a] += ratio * (prev.eigenvalues[a] - pp.eigenvalues[b]);
    }
    auto m = detail::match(predicted, prev.branch_ids, cur, radius, depth >= opt.max_halvings);
    if (!m.complete && depth < opt.max_halvings) {
      const double mid = 0.5 * (prev.parameter + target);
      self(self, mid, depth + 1);
      self(self, target, depth + 1);
      return;
    }
    if (m.ambiguous) tr.degenerate_matching = true;
    for (auto& id : m.ids)
      if (id < 0) id = tr.branch_count++;
    tr.points.push_back({target, std::move(cur), std::move(m.ids)});
  };
  for (int s = 1; s <= sweep.steps; ++s) {
    const double target = s == sweep.steps ? sweep.to : sweep.from + s * tr.step;
    advance(advance, target, 0);
  }

  // Real <-> complex transitions: a conjugate pair present on one side of an
  // interval with no nonreal eigenvalue nearby on the other side.
  for (std::size_t i = 0; i + 1 < tr.points.size(); ++i) {
    const auto& a = tr.points[i];
    const auto& b = tr.points[i + 1];
    for (int side = 0; side < 2; ++side) {
      const auto& cx = side == 0 ? b : a;  // side with the complex pair
      const auto& rl = side == 0 ? a : b;
      for (std::size_t c = 0; c < cx.eigenvalues.size(); ++c) {
        const cplx z = cx.eigenvalues[c];
        if (!(z.imag() > opt.imag_threshold)) continue;
        const double reach = 2.0 * z.imag() + 1e-3 * std::max(1.0, std::abs(z));
        const bool partner_nonreal = std::any_of(rl.eigenvalues.begin(), rl.eigenvalues.end(), [&](cplx w) {
          return detail::nonreal(w, opt.imag_threshold) && std::abs(w - z) < reach + std::abs(w.imag());
        });
        if (partner_nonreal) continue;
        // Branch ids of the conjugate pair.
        int id_a = cx.branch_ids[c], id_b = -1;
        for (std::size_t o = 0; o < cx.eigenvalues.size(); ++o)
          if (std::abs(cx.eigenvalues[o] - std::conj(z)) < 1e-9 * std::max(1.0, std::abs(z))) id_b = cx.branch_ids[o];
        try {
          const auto ep = ep_locate(base, sweep.parameter, a.parameter, b.parameter, cplx(z.real(), 0.0), opt);
          tr.events.push_back({ep.parameter, ep.lambda, id_a, id_b, side == 0});
        } catch (const ValidationError&) {
          // Pair left the window or lost trust rather than turning real.
        }
      }
    }
  }
  std::stable_sort(tr.events.begin(), tr.events.end(),
                   [](const EpEvent& x, const EpEvent& y) { return x.parameter < y.parameter; });
  return tr;
}

/// Maximal run of trace points on which one branch carries the upper
/// member of a complex-conjugate pair.
struct NonrealSegment {
  int branch = -1;
  double from = 0.0;
  double to = 0.0;
  double peak_parameter = 0.0;  // where Im lambda is largest
  cplx peak_lambda;
};

inline std::vector<NonrealSegment> nonreal_segments(const BranchTrace& tr, double imag_threshold = 1e-6) {
  std::vector<NonrealSegment> done;
  std::vector<NonrealSegment> open;  // indexed by position, searched by branch id
  for (const auto& pt : tr.points) {
    std::vector<NonrealSegment> still;
    for (std::size_t i = 0; i < pt.eigenvalues.size(); ++i) {
      const cplx z = pt.eigenvalues[i];
      if (!(z.imag() > imag_threshold)) continue;
      const int id = pt.branch_ids[i];
      auto it = std::find_if(open.begin(), open.end(), [id](const NonrealSegment& s) { return s.branch == id; });
      NonrealSegment seg = it != open.end() ? *it : NonrealSegment{id, pt.parameter, pt.parameter, pt.parameter, z};
      seg.to = pt.parameter;
      if (z.imag() > seg.peak_lambda.imag()) {
        seg.peak_lambda = z;
        seg.peak_parameter = pt.parameter;
      }
      still.push_back(seg);
    }
    for (const auto& s : open)
      if (std::none_of(still.begin(), still.end(), [&](const NonrealSegment& t) { return t.branch == s.branch; }))
        done.push_back(s);
    open = std::move(still);
  }
  done.insert(done.end(), open.begin(), open.end());
  std::stable_sort(done.begin(), done.end(), [](const NonrealSegment& a, const NonrealSegment& b) {
    return a.from != b.from ? a.from < b.from : a.peak_lambda.real() < b.peak_lambda.real();
  });
  return done;
}

/// Max distance between lambda_nu and the nearest trusted eigenvalue of the
/// constant-alpha problem at alpha0_nu, over the given beta values.
inline double fixed_point_audit(const DiabolicalPoint& dp, const std::vector<double>& betas, int n = 48) {
  if (dp.l != 0) throw ValidationError("fixed_point_audit: l = 0 only");
  double worst = 0.0;
  for (double beta : betas) {
    const ProblemParams p(0, beta, AlphaProfile::constant(dp.alpha0));
    const auto res = spectrum(p, n);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
      if (res.trusted[i]) best = std::min(best, std::abs(res.eigenvalues[i] - dp.lambda));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Initial slope d lambda / d beta of the eigenvalue that leaves the crossing
/// at alpha0 = alpha0_nu, gamma = 0, from a least-squares quadratic fit over
/// beta in [0, beta_max].
inline double companion_slope(const DiabolicalPoint& dp, double beta_max = 0.02, int samples = 9, int n = 48) {
  Eigen::MatrixXd design(samples, 3);
  Eigen::VectorXd rhs(samples);
  for (int i = 0; i < samples; ++i) {
    const double beta = beta_max * (i + 1) / samples;
    const auto ev = raw_eigenvalues(ProblemParams(dp.l, beta, AlphaProfile::constant(dp.alpha0)), n);
    // The fixed eigenvalue stays at lambda_nu; take the nearest other one.
    cplx best;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& z : ev) {
      const double from_fixed = std::abs(z - dp.lambda);
      if (from_fixed < 1e-7 * std::max(1.0, std::abs(dp.lambda))) continue;
      if (from_fixed < dist) {
        dist = from_fixed;
        best = z;
      }
    }
    design(i, 0) = 1.0;
    design(i, 1) = beta;
    design(i, 2) = beta * beta;
    rhs(i) = best.real() - dp.lambda;
  }
  // Constrain the fit through lambda_nu at beta = 0.
  const Eigen::Vector2d coef = design.rightCols(2).colPivHouseholderQr().solve(rhs);
  return coef(0);
}

}  // namespace dynamo
