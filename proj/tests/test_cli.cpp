#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "dynamo_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(DYNAMO_CLI_PATH) + " " + args + " > " + (scratch / "stdout.txt").string() +
                          " 2> " + (scratch / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::map<std::string, std::uint64_t> digest(const fs::path& dir) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = fnv1a(slurp(e.path()));
  return out;
}

struct Fresh {
  Fresh() {
    fs::remove_all(scratch);
    fs::create_directories(scratch);
  }
};

}  // namespace

TEST_CASE("every subcommand is deterministic", "[cli]") {
  Fresh fresh;
  const std::map<std::string, std::string> cases = {
      {"mesh", "mesh --from -5 --to 5 --steps 20 --count 3"},
      {"dp-list", "dp-list --n-max 4"},
      {"char-roots", "char-roots --beta 0.4 --alpha0 3 --re-window -100 0 --samples 512"},
      {"spectrum", "spectrum --beta 0.3 --alpha0 2 --gamma 1 --k 2 --N 24 --re-window -200 50"},
      {"trace", "trace --beta 0.3 --gamma 3 --k 2 --N 24 --parameter alpha0 --from 10 --to 14 --steps 20 --re-window -150 100"},
      {"ep-locate", "ep-locate --alpha0 0.1 --k 1 --N 24 --parameter gamma --lo 0.05 --hi 0.5 --hint -9.8696"},
      {"cone", "cone --k 2 --beta 0.1 --n-max 5"},
      {"tongue-scan", "tongue-scan --k 2 --N 20 --plane alpha0-gamma --x-range -1 1 --y-range -1 1 --resolution 5 5 --re-window -60 0"},
  };
  for (const auto& [name, args] : cases) {
    INFO(name);
    const auto a = scratch / (name + "-a"), b = scratch / (name + "-b");
    REQUIRE(run(args + " --out " + a.string()) == 0);
    REQUIRE(run(args + " --out " + b.string() + " --jobs 2") == 0);
    const auto da = digest(a), db = digest(b);
    CHECK(da.size() >= 2);
    CHECK(da.count("resolved-config.json") == 1);
    // resolved-config records the output directory and jobs, so compare the rest
    for (const auto& [file, h] : da)
      if (file != "resolved-config.json") CHECK(db.at(file) == h);
  }
}

TEST_CASE("outputs and formats", "[cli]") {
  Fresh fresh;
  const auto dir = scratch / "scan";
  REQUIRE(run("tongue-scan --k 2 --N 20 --x-range -1 1 --y-range -1 1 --resolution 5 5 --re-window -60 0 --format json --out " +
              dir.string()) == 0);
  for (const char* f : {"tongue-grid.json", "tongue-contours.json", "tongue-overlay.json", "resolved-config.json"})
    CHECK(fs::exists(dir / f));
  const auto grid = nlohmann::json::parse(slurp(dir / "tongue-grid.json"));
  CHECK(grid["columns"] == nlohmann::json({"x", "y", "max_im_lambda", "class"}));
  CHECK(grid["rows"].size() == 25);
  const auto cfg = nlohmann::json::parse(slurp(dir / "resolved-config.json"));
  CHECK(cfg["problem"]["cosine_terms"] == nlohmann::json::parse("[[2, 1.0]]"));

  // the environment supplies the default output directory
  const auto env_dir = scratch / "from-env";
  const std::string cmd = "DYNAMO_OUT_DIR=" + env_dir.string() + " " + DYNAMO_CLI_PATH + " dp-list --n-max 3 > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(env_dir / "dp-list.csv"));

  // config files are read and flags override them
  const auto cfg_path = scratch / "run.json";
  std::ofstream(cfg_path) << R"({"problem": {"beta": 0.5, "alpha0": 1.0}, "numeric": {"N": 24}})";
  const auto over = scratch / "over";
  REQUIRE(run("spectrum --config " + cfg_path.string() + " --beta 0.25 --out " + over.string()) == 0);
  const auto resolved = nlohmann::json::parse(slurp(over / "resolved-config.json"));
  CHECK(resolved["problem"]["beta"] == 0.25);
  CHECK(resolved["problem"]["alpha0"] == 1.0);
  CHECK(resolved["numeric"]["N"] == 24);
}

TEST_CASE("exit codes", "[cli]") {
  Fresh fresh;
  const std::string out = " --out " + (scratch / "x").string();
  CHECK(run("--help") == 0);
  CHECK(run("spectrum --beta 2" + out) == 1);
  CHECK(slurp(scratch / "stderr.txt").find("problem.beta") != std::string::npos);
  CHECK(run("spectrum --no-such-flag" + out) == 1);
  CHECK(run("cone" + out) == 1);
  CHECK(run("ep-locate --beta 0.3 --parameter alpha0 --lo 1 --hi 2 --hint -10 --N 24" + out) == 1);

  const auto cfg_path = scratch / "typo.json";
  std::ofstream(cfg_path) << R"({"problem": {"bta": 0.1}})";
  CHECK(run("spectrum --config " + cfg_path.string() + out) == 1);
  CHECK(slurp(scratch / "stderr.txt").find("unknown configuration key 'problem.bta'") != std::string::npos);

  CHECK(run("spectrum --alpha0 1e308 --gamma 1e308 --k 1 --N 24" + out) == 2);
  CHECK(slurp(scratch / "stderr.txt").find("numerical failure") != std::string::npos);
}

TEST_CASE("quick verification suite passes", "[cli]") {
  Fresh fresh;
  CHECK(run("verify --quick --out " + (scratch / "v").string()) == 0);
  CHECK(slurp(scratch / "stdout.txt").find("FAIL") == std::string::npos);
}
