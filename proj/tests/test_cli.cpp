#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const std::string kCli = IFSPROBE_CLI;
const std::string kSamples = IFSPROBE_SAMPLES;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "ifsprobe_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json report(const fs::path& dir) { return Json::parse(slurp(dir / "report.json")); }

std::string sample(const std::string& name) { return "'" + kSamples + "/" + name + "'"; }

}  // namespace

TEST_CASE("construct at the reference parameters") {
  const auto out = scratch("construct");
  REQUIRE(run("construct --kappa 0.76 --theta 179 --delta 1 --resolution 1024 --out '" + out.string() + "'") == 0);
  const Json j = report(out);
  CHECK(j["command"] == "construct");
  CHECK(j["rng"] == "mt19937_64");
  CHECK(j["construction"]["cover_verified"] == true);
  CHECK(j["construction"]["k"] == 8);
  CHECK(fs::exists(out / "attractor.pgm"));
  CHECK(fs::exists(out / "system.txt"));
}

TEST_CASE("packing verify on the half-radius disk") {
  const auto out = scratch("verify");
  REQUIRE(run("--out '" + out.string() + "' packing verify --instance " + sample("half_radius_disk.json")) == 0);
  const Json j = report(out);
  CHECK(j["packing"]["feasible"] == false);
  CHECK(j["packing"]["cond3"] == false);
  CHECK(j["packing"]["margins"][2].get<double>() < 0.0);
}

TEST_CASE("packing verify on the hexagonal family") {
  const auto out = scratch("hexagon");
  REQUIRE(run("--out '" + out.string() + "' packing verify --instance " + sample("hexagon.json")) == 0);
  const Json j = report(out);
  CHECK(j["packing"]["cond3"] == true);
  CHECK(j["packing"]["covered_fraction"].get<double>() == Catch::Approx(7.0 / 9.0).epsilon(0.02));
}

TEST_CASE("exit status matrix") {
  const auto out = scratch("matrix");
  const std::string o = "--out '" + out.string() + "' ";
  // success
  CHECK(run("--help") == 0);
  CHECK(run("construct --help") == 0);
  CHECK(run(o + "--resolution 256 construct") == 0);
  CHECK(run(o + "--resolution 512 minimality --system " + sample("construction.sys") + " --max-word-len 12 --samples 4") == 0);
  CHECK(run(o + "--resolution 512 minimality --system " + sample("circle.sys") + " --epsilon 0.02 --max-word-len 100 --samples 2") == 0);
  CHECK(run(o + "--resolution 256 distortion --word-count 50 --pair-count 50 --holder-pairs 500 --norm-samples 500") == 0);
  CHECK(run(o + "--resolution 512 ergodicity --seed-sets 3") == 0);
  CHECK(run(o + "packing greedy --target " + sample("checkerboard_256.pgm")) == 0);
  // usage and validation errors
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("construct --no-such-flag") == 1);
  CHECK(run(o + "construct --kappa 0.5 --resolution 128") == 1);
  CHECK(run(o + "--resolution -3 construct") == 1);
  CHECK(run(o + "circle --lambda 0.4") == 1);
  CHECK(run(o + "circle --rational-approx 8-13") == 1);
  CHECK(run(o + "minimality --system /nonexistent/system.txt") == 1);
  CHECK(run(o + "packing verify --instance /nonexistent.json") == 1);
  CHECK(run(o + "packing greedy --target " + sample("checkerboard_256.pgm") + " --ambient 0.9,0.5,0.4") == 1);
  CHECK(run(o + "packing") == 1);
  // probe failures
  CHECK(run(o + "--resolution 256 construct --max-iter 1") == 2);
  CHECK(run(o + "--resolution 256 distortion --max-r 3 --word-count 10 --pair-count 10 --holder-pairs 100 --norm-samples 100") == 2);
}

TEST_CASE("configuration file supplies defaults") {
  const auto out = scratch("config");
  const fs::path cfg = out / "run.cfg";
  std::ofstream(cfg) << "seed=5\nresolution=512\n[ergodicity]\nseed-sets=2\n";
  REQUIRE(run("--config '" + cfg.string() + "' --out '" + out.string() + "' ergodicity") == 0);
  const Json j = report(out);
  CHECK(j["seed"] == 5);
  CHECK(j["ergodicity"]["resolution"] == 512);
}

TEST_CASE("repeated runs write byte-identical reports") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "--seed 9 --resolution 256 distortion --perturb-amplitude 0.01 --word-count 40 --pair-count 40 "
                           "--holder-pairs 400 --norm-samples 400";
  REQUIRE(run("--out '" + a.string() + "' " + args) == 0);
  REQUIRE(run("--out '" + b.string() + "' " + args) == 0);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  const std::string g = "packing greedy --target " + sample("right_half_256.pgm");
  REQUIRE(run("--out '" + a.string() + "' " + g) == 0);
  REQUIRE(run("--out '" + b.string() + "' " + g) == 0);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "family.csv") == slurp(b / "family.csv"));
}
