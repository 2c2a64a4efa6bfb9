#include <catch_amalgamated.hpp>

#include <dynamo/analytic.hpp>
#include <dynamo/continuation.hpp>

#include <map>

using namespace dynamo;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

TEST_CASE("mesh lines are traced straight", "[continuation]") {
  const ProblemParams base(0, 0.0, AlphaProfile::constant(0.0));
  const auto tr = trace(base, {Parameter::alpha0, 0.0, 13.0, 260}, {-150.0, 60.0, -1.0, 1.0});
  CHECK(tr.events.empty());
  // Per-interval slopes, including intervals across crossings.
  int intervals = 0, off = 0;
  for (std::size_t i = 0; i + 1 < tr.points.size(); ++i) {
    const auto& p = tr.points[i];
    const auto& q = tr.points[i + 1];
    for (std::size_t a = 0; a < p.eigenvalues.size(); ++a)
      for (std::size_t b = 0; b < q.eigenvalues.size(); ++b) {
        if (p.branch_ids[a] != q.branch_ids[b]) continue;
        const double slope = (q.eigenvalues[b].real() - p.eigenvalues[a].real()) / (q.parameter - p.parameter);
        const double m = std::round(std::abs(slope) / pi);
        ++intervals;
        if (m < 1 || std::abs(std::abs(slope) - m * pi) > 1e-6) ++off;
      }
  }
  CHECK(intervals > 1000);
  CHECK(off == 0);
}

TEST_CASE("zero-width sweep", "[continuation]") {
  const ProblemParams base(0, 0.3, AlphaProfile::single_cosine(1.0, 2.0, 1));
  const auto tr = trace(base, {Parameter::alpha0, 1.0, 1.0, 16}, {-100.0, 50.0});
  CHECK(tr.points.size() == 1);
  CHECK(tr.events.empty());
  CHECK_THROWS_AS(trace(base, {Parameter::alpha0, 0.0, 1.0, 8}, {}), ValidationError);
  CHECK_THROWS_AS(trace(base, {Parameter::beta, 0.5, 1.5, 20}, {}), ValidationError);
}

TEST_CASE("exceptional points bound nonreal segments", "[continuation]") {
  const ProblemParams base(0, 0.3, AlphaProfile::single_cosine(0.0, 3.0, 2));
  const auto tr = trace(base, {Parameter::alpha0, -10.0, 0.0, 100}, {-200.0, 150.0});
  REQUIRE(tr.events.size() >= 2);
  const auto segs = nonreal_segments(tr);
  REQUIRE_FALSE(segs.empty());
  int bracketed = 0;
  for (const auto& s : segs) {
    CHECK(s.peak_lambda.imag() > 1e-6);
    if (s.from == tr.from || s.to == tr.to) continue;
    auto near = [&](double p) {
      return std::any_of(tr.events.begin(), tr.events.end(),
                         [&](const EpEvent& e) { return std::abs(e.parameter - p) <= std::abs(tr.step) + 1e-9; });
    };
    CHECK(near(s.from));
    CHECK(near(s.to));
    ++bracketed;
  }
  CHECK(bracketed >= 1);
  // every event sits next to a segment end
  for (const auto& e : tr.events) {
    const bool ok = std::any_of(segs.begin(), segs.end(), [&](const NonrealSegment& s) {
      return std::abs(e.parameter - s.from) <= std::abs(tr.step) + 1e-9 ||
             std::abs(e.parameter - s.to) <= std::abs(tr.step) + 1e-9;
    });
    CHECK(ok);
  }
}

TEST_CASE("exceptional point location", "[continuation]") {
  // k = 1 tongue from the alpha0 = 0 crossing: first order |gamma| > 2 |alpha0|.
  const double hint = -pi * pi;
  auto locate = [&](double alpha0, double lo, double hi) {
    const ProblemParams base(0, 0.0, AlphaProfile::single_cosine(alpha0, 0.0, 1));
    return ep_locate(base, Parameter::gamma, lo, hi, cplx(hint, 0.0));
  };
  const auto up = locate(0.1, 0.05, 0.5);
  const auto down = locate(0.1, -0.5, -0.05);
  CHECK_THAT(up.parameter, WithinAbs(-down.parameter, 1e-9));
  CHECK(up.split < 1e-5);
  CHECK(up.eigenvector_angle < 1e-2);
  CHECK(std::abs(up.lambda.imag()) < 1e-5);

  // First-order accuracy: the error against 2 |alpha0| shrinks quadratically.
  const double e1 = std::abs(up.parameter - 0.2);
  const double e2 = std::abs(locate(0.05, 0.02, 0.3).parameter - 0.1);
  CHECK(e2 > 0.0);
  CHECK(e1 / e2 >= 3.5);

  const ProblemParams real(0, 0.3, AlphaProfile::constant(0.0));
  CHECK_THROWS_WITH(ep_locate(real, Parameter::alpha0, 1.0, 2.0, cplx(-10.0, 0.0)),
                    ContainsSubstring("bracket invalid"));
}

TEST_CASE("crossings stay fixed along the homotopy", "[continuation]") {
  const std::vector<double> betas = {0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(fixed_point_audit(make_crossing(0, 1, 1, 3, 1), betas) <= 1e-6);
  CHECK(fixed_point_audit(make_crossing(0, 1, 1, 3, -1), betas) <= 1e-6);
  for (const auto& dp : dp_catalog(0, 4)) CHECK(fixed_point_audit(dp, {0.0}) <= 1e-9);
}

TEST_CASE("companion eigenvalue slope", "[continuation][property]") {
  for (const auto& dp : {make_crossing(0, 1, 1, 3, 1), make_crossing(0, 1, -1, 3, 1)}) {
    const double slope = companion_slope(dp);
    CHECK(std::abs(slope - (-2.0 * dp.lambda)) <= 0.05 * std::abs(2.0 * dp.lambda));
  }
}

TEST_CASE("trace reversal reproduces the matching", "[continuation][property]") {
  const ProblemParams base(0, 0.3, AlphaProfile::single_cosine(0.0, 1.0, 1));
  const SpectralWindow w{-120.0, 40.0};
  const int steps = 40;
  const auto fwd = trace(base, {Parameter::alpha0, 1.0, 3.0, steps}, w);
  const auto bwd = trace(base, {Parameter::alpha0, 3.0, 1.0, steps}, w);
  REQUIRE_FALSE(fwd.degenerate_matching);
  REQUIRE_FALSE(bwd.degenerate_matching);
  // Halving may differ between directions, so compare intervals whose end
  // points are consecutive in both traces.
  auto find = [](const BranchTrace& t, double x) {
    for (std::size_t i = 0; i < t.points.size(); ++i)
      if (std::abs(t.points[i].parameter - x) < 1e-12) return static_cast<long>(i);
    return -1L;
  };

  // Successor of each eigenvalue across one interval, keyed by position.
  auto successor = [](const TracePoint& p, const TracePoint& q, cplx z) {
    std::size_t a = 0;
    for (std::size_t i = 1; i < p.eigenvalues.size(); ++i)
      if (std::abs(p.eigenvalues[i] - z) < std::abs(p.eigenvalues[a] - z)) a = i;
    for (std::size_t b = 0; b < q.eigenvalues.size(); ++b)
      if (q.branch_ids[b] == p.branch_ids[a]) return q.eigenvalues[b];
    return cplx(std::nan(""), 0.0);
  };
  int compared = 0;
  for (std::size_t s = 0; s + 1 < fwd.points.size(); ++s) {
    const auto& p = fwd.points[s];
    const auto& q = fwd.points[s + 1];
    const long iq = find(bwd, q.parameter);
    if (iq < 0 || iq + 1 >= static_cast<long>(bwd.points.size()) || find(bwd, p.parameter) != iq + 1) continue;
    const auto& bq = bwd.points[static_cast<std::size_t>(iq)];
    const auto& bp = bwd.points[static_cast<std::size_t>(iq + 1)];
    for (const auto& z : p.eigenvalues) {
      const cplx f = successor(p, q, z);
      // backward: z at bp is reached from some eigenvalue at bq
      cplx b(std::nan(""), 0.0);
      for (const auto& y : bq.eigenvalues)
        if (std::abs(successor(bq, bp, y) - z) < 1e-7 * std::max(1.0, std::abs(z))) b = y;
      if (std::isnan(f.real()) || std::isnan(b.real())) continue;
      CHECK(std::abs(f - b) < 1e-7 * std::max(1.0, std::abs(f)));
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("branch ids persist through exceptional points", "[continuation]") {
  const ProblemParams base(0, 0.3, AlphaProfile::single_cosine(0.0, 2.5, 1));
  const auto tr = trace(base, {Parameter::alpha0, -2.0, 2.0, 80}, {-60.0, 20.0});
  for (const auto& e : tr.events) {
    CHECK(e.branch_a >= 0);
    CHECK(e.branch_b >= 0);
    CHECK(e.branch_a != e.branch_b);
  }
  // branches created only at the start or when entering the window
  CHECK(tr.branch_count <= static_cast<int>(tr.points.front().eigenvalues.size()) + 4);
}
