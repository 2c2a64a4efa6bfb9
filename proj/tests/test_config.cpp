#include <catch_amalgamated.hpp>

#include <dynamo/config.hpp>
#include <dynamo/output.hpp>

#include <filesystem>
#include <fstream>

using namespace dynamo;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("defaults", "[config]") {
  const auto c = parse_config(json::object());
  CHECK(c.problem.l == 0);
  CHECK(c.numeric.n == 40);
  CHECK(c.numeric.imag_threshold == 1e-6);
  CHECK(c.scan.nx == 301);
  CHECK(c.output.format == "csv");
  CHECK_FALSE(c.catalog.include_same_index);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("blocks are read", "[config]") {
  const auto c = parse_config(json::parse(R"({
    "problem": {"l": 1, "beta": 0.3, "alpha0": 2.5, "gamma": 1.0, "cosine_terms": [[2, 1.0], [3, -0.5]]},
    "numeric": {"N": 48, "re_window": [-100, null]},
    "sweep": {"parameter": "gamma", "range": [0, 2], "steps": 32},
    "ep": {"parameter": "beta", "bracket": [0.1, 0.2], "hint": -10},
    "scan": {"plane": "beta-gamma", "x_range": [0, 1], "y_range": [-3, 3], "resolution": [11, 21]},
    "catalog": {"n_max": 4, "include_same_index": true},
    "output": {"format": "json"}
  })"));
  CHECK(c.problem.l == 1);
  CHECK(c.problem.cosine_terms.size() == 2);
  CHECK(c.problem.cosine_terms[1].k == 3);
  CHECK(c.numeric.n == 48);
  CHECK(c.numeric.re_window.lo == -100.0);
  CHECK(std::isinf(c.numeric.re_window.hi));
  CHECK(c.sweep.parameter == Parameter::gamma);
  CHECK(c.sweep.steps == 32);
  CHECK(c.ep.parameter == Parameter::beta);
  CHECK(c.ep.hi == 0.2);
  CHECK(c.scan.x == Parameter::beta);
  CHECK(c.scan.ny == 21);
  CHECK(c.catalog.include_same_index);
  CHECK(c.output.format == "json");
  CHECK(single_mode(c) == 0);
  CHECK(make_params(c).profile().cosine_terms().size() == 2);
}

TEST_CASE("unknown keys are rejected by name", "[config]") {
  CHECK_THROWS_WITH(parse_config(json::parse(R"({"problem": {"bta": 0.1}})")),
                    ContainsSubstring("problem.bta"));
  CHECK_THROWS_WITH(parse_config(json::parse(R"({"plot": {}})")), ContainsSubstring("'plot'"));
  CHECK_THROWS_WITH(parse_config(json::parse(R"({"numeric": {"N": 40.5}})")), ContainsSubstring("numeric.N"));
  CHECK_THROWS_WITH(parse_config(json::parse(R"({"scan": {"plane": "alpha0-delta"}})")),
                    ContainsSubstring("scan.plane"));
  CHECK_THROWS_WITH(parse_config(json::parse(R"({"numeric": {"re_window": [5, 1]}})")),
                    ContainsSubstring("numeric.re_window"));
}

TEST_CASE("physical constraints", "[config]") {
  auto bad = [](const char* text) {
    const auto c = parse_config(json::parse(text));
    try {
      validate(c);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK_THAT(bad(R"({"problem": {"beta": 1.2}})"), ContainsSubstring("problem.beta"));
  CHECK_THAT(bad(R"({"problem": {"l": -1}})"), ContainsSubstring("problem.l"));
  CHECK_THAT(bad(R"({"numeric": {"N": 8}})"), ContainsSubstring("numeric.N"));
  CHECK_THAT(bad(R"({"sweep": {"parameter": "beta", "range": [0, 2]}})"), ContainsSubstring("sweep.range"));
  CHECK_THAT(bad(R"({"sweep": {"steps": 4}})"), ContainsSubstring("sweep.steps"));
  CHECK_THAT(bad(R"({"scan": {"plane": "gamma-beta", "y_range": [0, 3]}})"), ContainsSubstring("scan.y_range"));
  CHECK_THAT(bad(R"({"output": {"format": "xml"}})"), ContainsSubstring("output.format"));
  CHECK(bad(R"({"problem": {"beta": 1.0, "l": 3}})").empty());
}

TEST_CASE("resolved configuration round-trips", "[config]") {
  RunConfig c;
  c.problem.beta = 0.25;
  c.problem.cosine_terms = {{2, 1.0}};
  c.numeric.re_window = {-50.0, 20.0};
  c.scan.x = Parameter::beta;
  c.scan.y = Parameter::gamma;
  c.scan.x_min = 0.0;
  c.scan.x_max = 0.5;
  const auto back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(single_mode(back) == 2);
}

TEST_CASE("tabulated profile from file", "[config]") {
  const auto path = std::filesystem::temp_directory_path() / "dynamo_profile_test.csv";
  {
    std::ofstream out(path);
    out << "r,dalpha\n";
    for (int i = 0; i <= 50; ++i) out << i / 50.0 << "," << std::cos(2 * pi * i / 50.0) << "\n";
  }
  RunConfig c;
  c.problem.gamma = 1.0;
  c.problem.samples_path = path.string();
  const auto p = make_params(c);
  CHECK(p.profile().has_samples());
  CHECK(evaluate_alpha(p.profile(), 0.5).alpha == Catch::Approx(-1.0).margin(1e-4));
  c.problem.samples_path = (std::filesystem::temp_directory_path() / "no_such_profile.csv").string();
  CHECK_THROWS_WITH(make_params(c), ContainsSubstring("problem.samples_path"));
  std::filesystem::remove(path);
}

TEST_CASE("number formatting", "[config]") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(pi) == "3.14159265359");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
  const auto j = rounded(json{{"a", json::array({1.0 / 3.0, 2})}});
  CHECK(j["a"][0].get<double>() == 0.333333333333);
  CHECK(j["a"][1].is_number_integer());
}
