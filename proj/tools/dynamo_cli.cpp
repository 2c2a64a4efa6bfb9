// dynamo: command-line front end.
//
//   dynamo <subcommand> [--config FILE] [overrides...]
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure or a failed
// verify run.

#include <dynamo/dynamo.hpp>
#include <dynamo/verify.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef DYNAMO_CONFIG_DIR
#define DYNAMO_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace dynamo;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  int jobs = 1;
  std::optional<std::string> format;
  std::optional<int> l, k, n;
  std::optional<double> beta, alpha0, gamma, imag_threshold, trust_tolerance;
  std::vector<double> re_window;
  // trace
  std::optional<std::string> parameter;
  std::optional<double> from, to;
  std::optional<int> steps;
  // ep-locate
  std::optional<double> lo, hi, hint;
  // tongue-scan
  std::optional<std::string> plane;
  std::vector<double> x_range, y_range;
  std::vector<int> resolution;
  // dp-list / mesh / char-roots
  std::optional<int> n_max, count, samples;
  bool include_same_index = false;
  bool exclude_same_index = false;
  // verify
  bool quick = false;
  std::string configs_dir = DYNAMO_CONFIG_DIR;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON run configuration");
  sub->add_option("--out", o.out, "output directory (default: $DYNAMO_OUT_DIR, else ./dynamo-out)");
  sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "table format: csv or json");
  sub->add_option("--l", o.l, "multipole degree");
  sub->add_option("--beta", o.beta, "boundary-condition homotopy parameter");
  sub->add_option("--alpha0", o.alpha0, "mean alpha");
  sub->add_option("--gamma", o.gamma, "perturbation amplitude");
  sub->add_option("--k", o.k, "single cosine mode cos(2 pi k r); 0 for constant alpha");
  sub->add_option("--N", o.n, "collocation resolution");
  sub->add_option("--re-window", o.re_window, "Re lambda window: LO HI")->expected(2);
  sub->add_option("--imag-threshold", o.imag_threshold, "|Im lambda| counted as nonreal");
  sub->add_option("--trust-tolerance", o.trust_tolerance, "relative N vs 2N agreement");
}

Parameter parse_parameter(const std::string& s, const std::string& key) {
  try {
    return parameter_from_string(s);
  } catch (const ValidationError& e) {
    throw ValidationError(key + ": " + e.what());
  }
}

std::pair<double, double> pair_of(const std::vector<double>& v, const std::string& key) {
  if (v.size() != 2 || !(v[0] <= v[1])) throw ValidationError(key + ": expected LO HI with LO <= HI");
  return {v[0], v[1]};
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.l) c.problem.l = *o.l;
  if (o.beta) c.problem.beta = *o.beta;
  if (o.alpha0) c.problem.alpha0 = *o.alpha0;
  if (o.gamma) c.problem.gamma = *o.gamma;
  if (o.k) {
    if (*o.k < 0) throw ValidationError("--k: must be nonnegative");
    c.problem.cosine_terms.clear();
    if (*o.k > 0) c.problem.cosine_terms.push_back({*o.k, 1.0});
  }
  if (o.n) c.numeric.n = *o.n;
  if (o.imag_threshold) c.numeric.imag_threshold = *o.imag_threshold;
  if (o.trust_tolerance) c.numeric.trust_tolerance = *o.trust_tolerance;
  if (!o.re_window.empty()) {
    const auto [lo, hi] = pair_of(o.re_window, "--re-window");
    c.numeric.re_window = {lo, hi};
  }
  if (o.parameter) c.sweep.parameter = c.ep.parameter = parse_parameter(*o.parameter, "--parameter");
  if (o.from) c.sweep.from = *o.from;
  if (o.to) c.sweep.to = *o.to;
  if (o.steps) c.sweep.steps = *o.steps;
  if (o.lo) c.ep.lo = *o.lo;
  if (o.hi) c.ep.hi = *o.hi;
  if (o.hint) c.ep.hint = *o.hint;
  if (o.plane) std::tie(c.scan.x, c.scan.y) = parse_plane(*o.plane);
  if (!o.x_range.empty()) std::tie(c.scan.x_min, c.scan.x_max) = pair_of(o.x_range, "--x-range");
  if (!o.y_range.empty()) std::tie(c.scan.y_min, c.scan.y_max) = pair_of(o.y_range, "--y-range");
  if (!o.resolution.empty()) {
    if (o.resolution.size() != 2) throw ValidationError("--resolution: expected NX NY");
    c.scan.nx = o.resolution[0];
    c.scan.ny = o.resolution[1];
  }
  if (o.n_max) c.catalog.n_max = *o.n_max;
  if (o.count) c.catalog.count = *o.count;
  if (o.samples) c.catalog.char_samples = *o.samples;
  if (o.include_same_index) c.catalog.include_same_index = true;
  if (o.exclude_same_index) c.catalog.include_same_index = false;
  if (o.format) c.output.format = *o.format;
  if (!o.out.empty()) {
    c.output.directory = o.out;
  } else if (c.output.directory.empty()) {
    const char* env = std::getenv("DYNAMO_OUT_DIR");
    c.output.directory = (env && *env) ? env : "dynamo-out";
  }
  validate(c);
  return c;
}

fs::path prepare_output(const RunConfig& c) {
  const fs::path dir = c.output.directory;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("output.directory: cannot create '" + dir.string() + "'");
  write_json(dir / "resolved-config.json", to_json(c));
  return dir;
}

std::vector<double> sweep_values(const SweepConfig& s) {
  std::vector<double> v(static_cast<std::size_t>(s.steps) + 1);
  for (int i = 0; i <= s.steps; ++i) v[i] = s.from + (s.to - s.from) * i / s.steps;
  return v;
}

json dp_json(const DiabolicalPoint& dp) {
  json j = {{"n", dp.n},           {"n_prime", dp.n_prime},     {"epsilon", dp.epsilon},
            {"delta", dp.delta},   {"alpha0_nu", dp.alpha0},    {"lambda_nu", dp.lambda},
            {"sigma_nu", dp.sigma}};
  j["j"] = dp.j ? json(*dp.j) : json(nullptr);
  return j;
}

json polyline_json(const Polyline& p) {
  json a = json::array();
  for (const auto& q : p) a.push_back(json::array({q.x, q.y}));
  return a;
}

void report(const fs::path& path) { std::cout << "wrote " << path.string() << '\n'; }

// ---------------------------------------------------------------------------

int cmd_mesh(const RunConfig& c) {
  const auto dir = prepare_output(c);
  Table t({"alpha0", "n", "epsilon", "lambda"});
  for (double a : sweep_values(c.sweep))
    for (int n = 1; n <= c.catalog.count; ++n)
      for (int e : {1, -1}) t.add({a, n, e, mesh_eigenvalue(ModeBranch::make(c.problem.l, n, e), a)});
  report(t.write(dir / "mesh", c.output.format));
  return 0;
}

int cmd_dp_list(const RunConfig& c) {
  const auto dir = prepare_output(c);
  Table t({"n", "n_prime", "epsilon", "delta", "alpha0_nu", "lambda_nu", "sigma_nu", "j"});
  const auto dps = dp_catalog(c.problem.l, c.catalog.n_max, c.catalog.alpha0_window, c.catalog.lambda_window,
                              c.catalog.include_same_index);
  for (const auto& dp : dps)
    t.add({dp.n, dp.n_prime, dp.epsilon, dp.delta, dp.alpha0, dp.lambda, dp.sigma,
           dp.j ? CsvField(*dp.j) : CsvField("")});
  report(t.write(dir / "dp-list", c.output.format));
  std::cout << dps.size() << " crossings\n";
  return 0;
}

int cmd_char_roots(const RunConfig& c) {
  if (c.problem.l != 0) throw ValidationError("problem.l: char-roots is available for l = 0 only");
  const Interval w = c.numeric.re_window;
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi))
    throw ValidationError("numeric.re_window: char-roots needs a bounded window");
  const auto dir = prepare_output(c);
  Table t({"alpha0", "beta", "lambda", "residual"});
  for (double a : sweep_values(c.sweep))
    for (double x : charpoly_real_roots_l0(a, c.problem.beta, w, c.catalog.char_samples))
      t.add({a, c.problem.beta, x, std::abs(charpoly_residual_l0(a, c.problem.beta, x))});
  report(t.write(dir / "char-roots", c.output.format));
  return 0;
}

int cmd_spectrum(const RunConfig& c) {
  const auto dir = prepare_output(c);
  SpectrumOptions so;
  so.trust_tolerance = c.numeric.trust_tolerance;
  const auto res = spectrum(make_params(c), c.numeric.n, make_window(c), so);
  Table t({"alpha0", "beta", "gamma", "l", "N", "re_lambda", "im_lambda", "trusted"});
  std::size_t trusted = 0;
  for (std::size_t i = 0; i < res.eigenvalues.size(); ++i) {
    trusted += res.trusted[i];
    t.add({c.problem.alpha0, c.problem.beta, c.problem.gamma, c.problem.l, c.numeric.n, res.eigenvalues[i].real(),
           res.eigenvalues[i].imag(), static_cast<bool>(res.trusted[i])});
  }
  report(t.write(dir / "spectrum", c.output.format));
  std::cout << res.eigenvalues.size() << " eigenvalues, " << trusted << " trusted\n";
  return 0;
}

TraceOptions trace_options(const RunConfig& c) {
  TraceOptions o;
  o.n = c.numeric.n;
  o.trust_tolerance = c.numeric.trust_tolerance;
  o.imag_threshold = c.numeric.imag_threshold;
  return o;
}

int cmd_trace(const RunConfig& c) {
  const auto dir = prepare_output(c);
  const Sweep sweep{c.sweep.parameter, c.sweep.from, c.sweep.to, c.sweep.steps};
  const auto tr = trace(make_params(c), sweep, make_window(c), trace_options(c));
  Table t({"param_value", "branch_id", "re_lambda", "im_lambda"});
  for (const auto& p : tr.points)
    for (std::size_t i = 0; i < p.eigenvalues.size(); ++i)
      t.add({p.parameter, p.branch_ids[i], p.eigenvalues[i].real(), p.eigenvalues[i].imag()});
  report(t.write(dir / "trace", c.output.format));

  json doc;
  doc["parameter"] = to_string(tr.parameter);
  doc["range"] = json::array({tr.from, tr.to});
  doc["degenerate_matching"] = tr.degenerate_matching;
  doc["branch_count"] = tr.branch_count;
  doc["events"] = json::array();
  for (const auto& e : tr.events)
    doc["events"].push_back({{"parameter", e.parameter},
                             {"re_lambda", e.lambda.real()},
                             {"im_lambda", e.lambda.imag()},
                             {"branch_a", e.branch_a},
                             {"branch_b", e.branch_b},
                             {"direction", e.real_to_complex ? "real-to-complex" : "complex-to-real"}});
  doc["nonreal_segments"] = json::array();
  for (const auto& s : nonreal_segments(tr, c.numeric.imag_threshold))
    doc["nonreal_segments"].push_back({{"branch", s.branch},
                                       {"from", s.from},
                                       {"to", s.to},
                                       {"peak_parameter", s.peak_parameter},
                                       {"peak_re_lambda", s.peak_lambda.real()},
                                       {"peak_im_lambda", s.peak_lambda.imag()}});
  write_json(dir / "trace-events.json", doc);
  report(dir / "trace-events.json");
  std::cout << tr.points.size() << " points, " << tr.branch_count << " branches, " << tr.events.size()
            << " exceptional points" << (tr.degenerate_matching ? " (degenerate matching flagged)" : "") << '\n';
  return 0;
}

int cmd_ep_locate(const RunConfig& c) {
  const auto dir = prepare_output(c);
  const auto ep = ep_locate(make_params(c), c.ep.parameter, c.ep.lo, c.ep.hi, cplx(c.ep.hint, 0.0), trace_options(c));
  json doc = {{"parameter", to_string(c.ep.parameter)},
              {"value", ep.parameter},
              {"re_lambda", ep.lambda.real()},
              {"im_lambda", ep.lambda.imag()},
              {"split", ep.split},
              {"eigenvector_angle", ep.eigenvector_angle}};
  write_json(dir / "ep.json", doc);
  report(dir / "ep.json");
  std::cout << to_string(c.ep.parameter) << " = " << format_number(ep.parameter)
            << ", lambda = " << format_number(ep.lambda.real()) << '\n';
  return 0;
}

int require_single_mode(const RunConfig& c, const char* what) {
  const int k = single_mode(c);
  if (k == 0)
    throw ValidationError(std::string("problem.cosine_terms: ") + what +
                          " needs a single unit cosine term (use --k)");
  return k;
}

int cmd_cone(const RunConfig& c) {
  if (c.problem.l != 0) throw ValidationError("problem.l: cone is available for l = 0 only");
  const int k = require_single_mode(c, "cone");
  const auto dir = prepare_output(c);
  const auto params = make_params(c);
  json doc;
  doc["k"] = k;
  doc["beta"] = c.problem.beta;
  doc["crossings"] = json::array();
  for (const auto& dp : resonant_crossings(k, c.catalog.n_max)) {
    if (!c.catalog.alpha0_window.contains(dp.alpha0) || !c.catalog.lambda_window.contains(dp.lambda)) continue;
    const double a = fourier_coupling(params.profile(), dp);
    const auto cone = unfolding_cone(dp, a, k);
    const auto sec = cone_cross_section(dp, k, c.problem.beta);
    json form = json::array();
    for (int i = 0; i < 3; ++i) form.push_back(json::array({cone.form(i, 0), cone.form(i, 1), cone.form(i, 2)}));
    json entry = dp_json(dp);
    entry["coupling"] = a;
    entry["form"] = form;
    entry["form_variables"] = json::array({"alpha0 - alpha0_nu", "beta", "gamma"});
    entry["conic"] = {{"kind", to_string(sec.kind)},
                      {"mode", sec.mode},
                      {"alpha_coeff", sec.alpha_coeff},
                      {"gamma_coeff", sec.gamma_coeff},
                      {"centre", json::array({sec.centre_alpha0, sec.centre_gamma})},
                      {"rhs", sec.rhs}};
    entry["stripe"] = json::array();
    for (const auto& line : sec.stripe) entry["stripe"].push_back({{"slope", line.slope}, {"intercept", line.intercept}});
    doc["crossings"].push_back(std::move(entry));
  }
  write_json(dir / "cone.json", doc);
  report(dir / "cone.json");
  std::cout << doc["crossings"].size() << " resonant crossings\n";
  return 0;
}

int cmd_tongue_scan(const RunConfig& c, int jobs) {
  const auto dir = prepare_output(c);
  const auto params = make_params(c);
  const PlaneSpec plane{c.scan.x, c.scan.y, c.scan.x_min, c.scan.x_max, c.scan.nx,
                        c.scan.y_min, c.scan.y_max, c.scan.ny};
  ScanOptions so;
  so.n = c.numeric.n;
  so.trust_tolerance = c.numeric.trust_tolerance;
  so.imag_threshold = c.numeric.imag_threshold;
  so.re_window = c.numeric.re_window;
  so.jobs = jobs;
  const auto grid = grid_scan(params, plane, so);

  Table t({"x", "y", "max_im_lambda", "class"});
  for (int j = 0; j < plane.ny; ++j)
    for (int i = 0; i < plane.nx; ++i)
      t.add({plane.x_at(i), plane.y_at(j), grid.value[grid.index(i, j)], to_string(grid.at(i, j))});
  report(t.write(dir / "tongue-grid", c.output.format));

  json contours;
  contours["plane"] = plane_name(plane.x, plane.y);
  contours["polylines"] = json::array();
  for (const auto& p : boundary_extract(grid)) contours["polylines"].push_back(polyline_json(p));
  write_json(dir / "tongue-contours.json", contours);
  report(dir / "tongue-contours.json");

  // First-order boundaries need l = 0 and a single cosine mode.
  json overlay;
  overlay["plane"] = plane_name(plane.x, plane.y);
  overlay["curves"] = json::array();
  const int k = single_mode(c);
  if (c.problem.l == 0 && k != 0) {
    overlay["k"] = k;
    for (const auto& curve : analytic_overlay(plane, params, resonant_crossings(k, c.scan.overlay_n_max), k)) {
      json e = {{"kind", curve.kind}};
      e["dp"] = curve.dp ? dp_json(*curve.dp) : json(nullptr);
      e["pieces"] = json::array();
      for (const auto& p : curve.pieces) e["pieces"].push_back(polyline_json(p));
      overlay["curves"].push_back(std::move(e));
    }
  } else {
    overlay["note"] = "no first-order overlay: needs l = 0 and a single cosine term";
  }
  write_json(dir / "tongue-overlay.json", overlay);
  report(dir / "tongue-overlay.json");
  std::cout << grid.count(CellClass::oscillatory) << " of " << plane.cells() << " cells oscillatory, "
            << grid.count(CellClass::invalid) << " invalid\n";
  return 0;
}

int cmd_verify(const Overrides& o, int jobs) {
  AcceptanceOptions opt;
  opt.config_dir = o.configs_dir;
  opt.jobs = jobs;
  int failed = 0;
  std::printf("%-18s %-6s %s\n", "check", "result", "detail");
  for (const auto& e : verify_suite()) {
    if (o.quick && !e.quick) continue;
    const auto r = run_verify_entry(e, opt);
    failed += !r.pass;
    std::printf("%-18s %-6s %s\n", e.label.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s: %d failed\n", failed ? "FAILED" : "OK", failed);
  return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, exceptional points and Arnold tongues of the alpha^2-dynamo with a homotopic boundary condition"};
  app.require_subcommand(1);
  Overrides o;

  auto* mesh = app.add_subcommand("mesh", "closed-form mesh lines at beta = 0 over the sweep range");
  auto* dps = app.add_subcommand("dp-list", "catalog of diabolical points");
  auto* roots = app.add_subcommand("char-roots", "real roots of the l = 0 characteristic equation");
  auto* spec = app.add_subcommand("spectrum", "collocation spectrum at one parameter point");
  auto* tr = app.add_subcommand("trace", "branch continuation with exceptional-point events");
  auto* ep = app.add_subcommand("ep-locate", "refine one exceptional point inside a bracket");
  auto* cone = app.add_subcommand("cone", "first-order unfolding cones of the resonant crossings");
  auto* scan = app.add_subcommand("tongue-scan", "classification grid of oscillatory cells");
  auto* verify = app.add_subcommand("verify", "run the invariant suite and print a pass/fail table");
  for (auto* s : {mesh, dps, roots, spec, tr, ep, cone, scan, verify}) add_common(s, o);

  for (auto* s : {mesh, roots, tr}) {
    s->add_option("--parameter", o.parameter, "sweep parameter: alpha0, beta or gamma");
    s->add_option("--from", o.from, "sweep start");
    s->add_option("--to", o.to, "sweep end");
    s->add_option("--steps", o.steps, "sweep steps");
  }
  mesh->add_option("--count", o.count, "branches per signature");
  for (auto* s : {dps, cone}) s->add_option("--n-max", o.n_max, "largest mode index");
  dps->add_flag("--include-same-index", o.include_same_index, "also list crossings with n = n'");
  dps->add_flag("--exclude-same-index", o.exclude_same_index, "omit crossings with n = n'");
  roots->add_option("--samples", o.samples, "grid points before bisection");
  ep->add_option("--parameter", o.parameter, "parameter to vary");
  ep->add_option("--lo", o.lo, "bracket start");
  ep->add_option("--hi", o.hi, "bracket end");
  ep->add_option("--hint", o.hint, "real part of the coalescing pair");
  scan->add_option("--plane", o.plane, "plane, e.g. alpha0-gamma");
  scan->add_option("--x-range", o.x_range, "X_MIN X_MAX")->expected(2);
  scan->add_option("--y-range", o.y_range, "Y_MIN Y_MAX")->expected(2);
  scan->add_option("--resolution", o.resolution, "NX NY")->expected(2);
  verify->add_flag("--quick", o.quick, "analytic oracles and the cheap numerical criteria only");
  verify->add_option("--configs-dir", o.configs_dir, "directory holding fig1a.json and fig1b.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return cmd_verify(o, o.jobs);
    const RunConfig c = resolve(o);
    if (mesh->parsed()) return cmd_mesh(c);
    if (dps->parsed()) return cmd_dp_list(c);
    if (roots->parsed()) return cmd_char_roots(c);
    if (spec->parsed()) return cmd_spectrum(c);
    if (tr->parsed()) return cmd_trace(c);
    if (ep->parsed()) return cmd_ep_locate(c);
    if (cone->parsed()) return cmd_cone(c);
    if (scan->parsed()) return cmd_tongue_scan(c, o.jobs);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
