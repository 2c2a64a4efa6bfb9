#pragma once
// Run configuration: a JSON document with fixed blocks.  Every key is
// optional, unknown keys are rejected, and the resolved configuration
// (all defaults filled in) can be written back for provenance.

#include <dynamo/analytic.hpp>
#include <dynamo/error.hpp>
#include <dynamo/model.hpp>
#include <dynamo/numeric.hpp>

#include <json.hpp>  // nlohmann, vendored

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace dynamo {

using json = nlohmann::json;

struct ProblemConfig {
  int l = 0;
  double beta = 0.0;
  double alpha0 = 0.0;
  double gamma = 0.0;
  std::vector<CosineTerm> cosine_terms;
  std::string samples_path;  // CSV with columns r,dalpha; empty for none
};

struct NumericConfig {
  int n = 40;
  double trust_tolerance = 1e-7;
  double imag_threshold = 1e-6;
  Interval re_window;  // spectral window, unbounded by default
  Interval im_window;
};

struct SweepConfig {
  Parameter parameter = Parameter::alpha0;
  double from = 0.0;
  double to = 13.0;
  int steps = 260;
};

struct EpConfig {
  Parameter parameter = Parameter::alpha0;
  double lo = 0.0;
  double hi = 1.0;
  double hint = 0.0;  // real part of the coalescing pair
};

struct ScanConfig {
  Parameter x = Parameter::alpha0;
  Parameter y = Parameter::gamma;
  double x_min = -9.0, x_max = 9.0;
  double y_min = -6.0, y_max = 6.0;
  int nx = 301;
  int ny = 301;
  int overlay_n_max = 8;  // crossings offered to the analytic overlay
};

struct CatalogConfig {
  int n_max = 6;
  Interval alpha0_window;
  Interval lambda_window;
  bool include_same_index = false;  // n = n' crossings sit at alpha0 = 0
  int count = 6;          // mesh: branches per signature
  int char_samples = 4096;  // char-roots: scan resolution
};

struct OutputConfig {
  std::string directory;  // empty: resolved from the environment
  std::string format = "csv";
};

struct RunConfig {
  ProblemConfig problem;
  NumericConfig numeric;
  SweepConfig sweep;
  EpConfig ep;
  ScanConfig scan;
  CatalogConfig catalog;
  OutputConfig output;
};

namespace detail {

inline void reject_unknown(const json& block, const std::string& where, std::initializer_list<const char*> keys) {
  if (!block.is_object()) throw ValidationError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = block.begin(); it != block.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError("unknown configuration key '" + (where.empty() ? "" : where + ".") + it.key() + "'");
}

template <class T>
void read(const json& block, const std::string& where, const char* key, T& out) {
  if (!block.contains(key)) return;
  const auto& v = block.at(key);
  const std::string name = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ValidationError(name + ": expected a boolean");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) throw ValidationError(name + ": expected an integer");
    out = v.get<int>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ValidationError(name + ": expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ValidationError(name + ": must be finite");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ValidationError(name + ": expected a string");
    out = v.get<std::string>();
  } else if constexpr (std::is_same_v<T, Parameter>) {
    if (!v.is_string()) throw ValidationError(name + ": expected a parameter name");
    try {
      out = parameter_from_string(v.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(name + ": " + e.what());
    }
  } else if constexpr (std::is_same_v<T, Interval>) {
    // [lo, hi] with null for an open end
    if (!v.is_array() || v.size() != 2) throw ValidationError(name + ": expected [lo, hi]");
    Interval iv;
    if (!v[0].is_null()) {
      if (!v[0].is_number()) throw ValidationError(name + ": bounds must be numbers or null");
      iv.lo = v[0].get<double>();
    }
    if (!v[1].is_null()) {
      if (!v[1].is_number()) throw ValidationError(name + ": bounds must be numbers or null");
      iv.hi = v[1].get<double>();
    }
    if (!(iv.lo <= iv.hi)) throw ValidationError(name + ": lower bound exceeds upper bound");
    out = iv;
  }
}

inline json interval_json(const Interval& iv) {
  json a = json::array();
  a.push_back(std::isfinite(iv.lo) ? json(iv.lo) : json(nullptr));
  a.push_back(std::isfinite(iv.hi) ? json(iv.hi) : json(nullptr));
  return a;
}

inline void read_range(const json& block, const std::string& where, const char* key, double& lo, double& hi) {
  if (!block.contains(key)) return;
  Interval iv;
  read(block, where, key, iv);
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw ValidationError(where + "." + key + ": must be bounded");
  lo = iv.lo;
  hi = iv.hi;
}

}  // namespace detail

/// Physical and numerical constraints, checked before any computation.
inline void validate(const RunConfig& c) {
  if (c.problem.l < 0) throw ValidationError("problem.l: must be a nonnegative integer");
  if (!(c.problem.beta >= 0.0 && c.problem.beta <= 1.0)) throw ValidationError("problem.beta: must lie in [0, 1]");
  for (const auto& t : c.problem.cosine_terms)
    if (t.k < 1) throw ValidationError("problem.cosine_terms: mode k must be a positive integer");
  if (c.numeric.n < kMinResolution)
    throw ValidationError("numeric.N: must be at least " + std::to_string(kMinResolution));
  if (!(c.numeric.trust_tolerance > 0.0)) throw ValidationError("numeric.trust_tolerance: must be positive");
  if (!(c.numeric.imag_threshold > 0.0)) throw ValidationError("numeric.imag_threshold: must be positive");
  if (c.sweep.steps < 16) throw ValidationError("sweep.steps: at least 16 steps are required");
  if (!(c.sweep.from <= c.sweep.to)) throw ValidationError("sweep.range: from exceeds to");
  auto beta_range = [](Parameter p, double lo, double hi, const char* key) {
    if (p == Parameter::beta && (lo < 0.0 || hi > 1.0))
      throw ValidationError(std::string(key) + ": beta must stay within [0, 1]");
  };
  beta_range(c.sweep.parameter, c.sweep.from, c.sweep.to, "sweep.range");
  beta_range(c.ep.parameter, std::min(c.ep.lo, c.ep.hi), std::max(c.ep.lo, c.ep.hi), "ep.bracket");
  beta_range(c.scan.x, c.scan.x_min, c.scan.x_max, "scan.x_range");
  beta_range(c.scan.y, c.scan.y_min, c.scan.y_max, "scan.y_range");
  if (c.scan.x == c.scan.y) throw ValidationError("scan.plane: the two axes must differ");
  if (c.scan.nx < 1 || c.scan.ny < 1) throw ValidationError("scan.resolution: must be positive");
  if (static_cast<double>(c.scan.nx) * c.scan.ny > 1e6) throw ValidationError("scan.resolution: at most 10^6 cells");
  if (c.catalog.n_max < 2) throw ValidationError("catalog.n_max: must be at least 2");
  if (c.catalog.count < 1) throw ValidationError("catalog.count: must be positive");
  if (c.catalog.char_samples < 16) throw ValidationError("catalog.char_samples: must be at least 16");
  if (c.output.format != "csv" && c.output.format != "json")
    throw ValidationError("output.format: expected \"csv\" or \"json\"");
}

inline std::string plane_name(Parameter x, Parameter y) { return to_string(x) + "-" + to_string(y); }

inline std::pair<Parameter, Parameter> parse_plane(const std::string& name) {
  const auto dash = name.find('-');
  if (dash == std::string::npos) throw ValidationError("scan.plane: expected \"<x>-<y>\", e.g. \"alpha0-gamma\"");
  try {
    return {parameter_from_string(name.substr(0, dash)), parameter_from_string(name.substr(dash + 1))};
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("scan.plane: ") + e.what());
  }
}

inline RunConfig parse_config(const json& doc) {
  using detail::read;
  RunConfig c;
  detail::reject_unknown(doc, "", {"problem", "numeric", "sweep", "ep", "scan", "catalog", "output"});
  if (doc.contains("problem")) {
    const auto& b = doc["problem"];
    detail::reject_unknown(b, "problem", {"l", "beta", "alpha0", "gamma", "cosine_terms", "samples_path"});
    read(b, "problem", "l", c.problem.l);
    read(b, "problem", "beta", c.problem.beta);
    read(b, "problem", "alpha0", c.problem.alpha0);
    read(b, "problem", "gamma", c.problem.gamma);
    read(b, "problem", "samples_path", c.problem.samples_path);
    if (b.contains("cosine_terms")) {
      const auto& t = b["cosine_terms"];
      if (!t.is_array()) throw ValidationError("problem.cosine_terms: expected a list of [k, weight]");
      for (const auto& e : t) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
          throw ValidationError("problem.cosine_terms: expected a list of [k, weight]");
        c.problem.cosine_terms.push_back({e[0].get<int>(), e[1].get<double>()});
      }
    }
  }
  if (doc.contains("numeric")) {
    const auto& b = doc["numeric"];
    detail::reject_unknown(b, "numeric", {"N", "trust_tolerance", "imag_threshold", "re_window", "im_window"});
    read(b, "numeric", "N", c.numeric.n);
    read(b, "numeric", "trust_tolerance", c.numeric.trust_tolerance);
    read(b, "numeric", "imag_threshold", c.numeric.imag_threshold);
    read(b, "numeric", "re_window", c.numeric.re_window);
    read(b, "numeric", "im_window", c.numeric.im_window);
  }
  if (doc.contains("sweep")) {
    const auto& b = doc["sweep"];
    detail::reject_unknown(b, "sweep", {"parameter", "range", "steps"});
    read(b, "sweep", "parameter", c.sweep.parameter);
    detail::read_range(b, "sweep", "range", c.sweep.from, c.sweep.to);
    read(b, "sweep", "steps", c.sweep.steps);
  }
  if (doc.contains("ep")) {
    const auto& b = doc["ep"];
    detail::reject_unknown(b, "ep", {"parameter", "bracket", "hint"});
    read(b, "ep", "parameter", c.ep.parameter);
    detail::read_range(b, "ep", "bracket", c.ep.lo, c.ep.hi);
    read(b, "ep", "hint", c.ep.hint);
  }
  if (doc.contains("scan")) {
    const auto& b = doc["scan"];
    detail::reject_unknown(b, "scan", {"plane", "x_range", "y_range", "resolution", "overlay_n_max"});
    if (b.contains("plane")) {
      std::string name;
      read(b, "scan", "plane", name);
      std::tie(c.scan.x, c.scan.y) = parse_plane(name);
    }
    detail::read_range(b, "scan", "x_range", c.scan.x_min, c.scan.x_max);
    detail::read_range(b, "scan", "y_range", c.scan.y_min, c.scan.y_max);
    if (b.contains("resolution")) {
      const auto& r = b["resolution"];
      if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
        throw ValidationError("scan.resolution: expected [nx, ny]");
      c.scan.nx = r[0].get<int>();
      c.scan.ny = r[1].get<int>();
    }
    read(b, "scan", "overlay_n_max", c.scan.overlay_n_max);
  }
  if (doc.contains("catalog")) {
    const auto& b = doc["catalog"];
    detail::reject_unknown(b, "catalog",
                           {"n_max", "alpha0_window", "lambda_window", "include_same_index", "count", "char_samples"});
    read(b, "catalog", "n_max", c.catalog.n_max);
    read(b, "catalog", "alpha0_window", c.catalog.alpha0_window);
    read(b, "catalog", "lambda_window", c.catalog.lambda_window);
    read(b, "catalog", "include_same_index", c.catalog.include_same_index);
    read(b, "catalog", "count", c.catalog.count);
    read(b, "catalog", "char_samples", c.catalog.char_samples);
  }
  if (doc.contains("output")) {
    const auto& b = doc["output"];
    detail::reject_unknown(b, "output", {"directory", "format"});
    read(b, "output", "directory", c.output.directory);
    read(b, "output", "format", c.output.format);
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
  return parse_config(doc);
}

inline json to_json(const RunConfig& c) {
  json terms = json::array();
  for (const auto& t : c.problem.cosine_terms) terms.push_back(json::array({t.k, t.weight}));
  json doc;
  doc["problem"] = {{"l", c.problem.l},         {"beta", c.problem.beta},
                    {"alpha0", c.problem.alpha0}, {"gamma", c.problem.gamma},
                    {"cosine_terms", terms},     {"samples_path", c.problem.samples_path}};
  doc["numeric"] = {{"N", c.numeric.n},
                    {"trust_tolerance", c.numeric.trust_tolerance},
                    {"imag_threshold", c.numeric.imag_threshold},
                    {"re_window", detail::interval_json(c.numeric.re_window)},
                    {"im_window", detail::interval_json(c.numeric.im_window)}};
  doc["sweep"] = {{"parameter", to_string(c.sweep.parameter)},
                  {"range", json::array({c.sweep.from, c.sweep.to})},
                  {"steps", c.sweep.steps}};
  doc["ep"] = {{"parameter", to_string(c.ep.parameter)},
               {"bracket", json::array({c.ep.lo, c.ep.hi})},
               {"hint", c.ep.hint}};
  doc["scan"] = {{"plane", plane_name(c.scan.x, c.scan.y)},
                 {"x_range", json::array({c.scan.x_min, c.scan.x_max})},
                 {"y_range", json::array({c.scan.y_min, c.scan.y_max})},
                 {"resolution", json::array({c.scan.nx, c.scan.ny})},
                 {"overlay_n_max", c.scan.overlay_n_max}};
  doc["catalog"] = {{"n_max", c.catalog.n_max},
                    {"alpha0_window", detail::interval_json(c.catalog.alpha0_window)},
                    {"lambda_window", detail::interval_json(c.catalog.lambda_window)},
                    {"include_same_index", c.catalog.include_same_index},
                    {"count", c.catalog.count},
                    {"char_samples", c.catalog.char_samples}};
  doc["output"] = {{"directory", c.output.directory}, {"format", c.output.format}};
  return doc;
}

/// Reads a two-column CSV (header "r,dalpha" optional).
inline std::pair<std::vector<double>, std::vector<double>> read_profile_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("problem.samples_path: cannot open '" + path + "'");
  std::vector<double> r, d;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a = 0.0, b = 0.0;
    if (!(fields >> a >> b)) {
      if (row == 1) continue;  // header
      throw ValidationError("problem.samples_path: malformed row " + std::to_string(row));
    }
    r.push_back(a);
    d.push_back(b);
  }
  return {r, d};
}

inline ProblemParams make_params(const RunConfig& c) {
  AlphaProfile profile(c.problem.alpha0, c.problem.gamma, c.problem.cosine_terms);
  if (!c.problem.samples_path.empty()) {
    auto [r, d] = read_profile_samples(c.problem.samples_path);
    profile = profile.with_samples(std::move(r), std::move(d));
  }
  return {c.problem.l, c.problem.beta, profile};
}

inline SpectralWindow make_window(const RunConfig& c) {
  return {c.numeric.re_window.lo, c.numeric.re_window.hi, c.numeric.im_window.lo, c.numeric.im_window.hi};
}

/// Single cosine mode of the profile, 0 if the profile is not of that form.
inline int single_mode(const RunConfig& c) {
  if (c.problem.cosine_terms.size() != 1 || !c.problem.samples_path.empty()) return 0;
  const auto& t = c.problem.cosine_terms.front();
  return t.weight == 1.0 ? t.k : 0;
}

}  // namespace dynamo
