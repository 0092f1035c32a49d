#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "svlab/cli.hpp"

using namespace svlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "svlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("svlab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("lemma-check reports the 1/12 constant") {
  const auto dir = scratch("lemma");
  const auto r = cli({"lemma-check", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  const std::string csv = slurp(dir / "lemma.csv");
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  REQUIRE(line.rfind("min_ratio,", 0) == 0);
  CHECK(std::abs(std::stod(line.substr(10)) - 1.0 / 12.0) <= 1e-9);
  CHECK(fs::exists(dir / "manifest.ini"));
}

TEST_CASE("verify-weights reports C_chi = 1 for chi_1") {
  const auto dir = scratch("weights");
  REQUIRE(cli({"verify-weights", "--out", dir.string()}).code == kExitOk);
  CHECK(slurp(dir / "weights.csv").find("chi,c_chi,1\n") != std::string::npos);
}

TEST_CASE("deterministic solve is byte-identical across runs and replays") {
  const auto dir = scratch("solve");
  const auto cfg = write_config(dir, "[solver]\nn_cells = 64\nt_final = 0.2\n[model]\nnoise = zero\n");
  REQUIRE(cli({"solve", "--config", cfg.string(), "--seed", "5", "--out", (dir / "a").string(), "--dump"}).code == 0);
  REQUIRE(cli({"solve", "--config", cfg.string(), "--seed", "5", "--out", (dir / "b").string(), "--dump"}).code == 0);
  REQUIRE(cli({"replay", "--config", (dir / "a" / "manifest.ini").string(), "--out", (dir / "c").string(), "--dump"}).code ==
          0);
  for (const char* f : {"summary.csv", "moments.csv", "path_0.csv"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "c" / f));
  }
  CHECK(slurp(dir / "a" / "path_0.csv").rfind("k,j,u\n", 0) == 0);
}

TEST_CASE("thread count does not change the output") {
  const auto dir = scratch("threads");
  const auto cfg = write_config(dir, "[run]\nn_paths = 5\n[solver]\nn_cells = 64\nt_final = 0.2\n");
  REQUIRE(cli({"solve", "--config", cfg.string(), "--threads", "1", "--out", (dir / "a").string()}).code == 0);
  REQUIRE(cli({"solve", "--config", cfg.string(), "--threads", "4", "--out", (dir / "b").string()}).code == 0);
  CHECK(slurp(dir / "a" / "summary.csv") == slurp(dir / "b" / "summary.csv"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  const auto bad_key = write_config(dir, "[solver]\nviscosity = 1\n");
  const auto r2 = cli({"solve", "--config", bad_key.string(), "--out", dir.string()});
  CHECK(r2.code == kExitConfig);
  CHECK(r2.err.find("viscosity") != std::string::npos);

  const auto bad_value = write_config(dir, "[study]\nepsilon_list = 0.01, 0.02\n");
  const auto rv = cli({"rates-space", "--config", bad_value.string(), "--out", dir.string()});
  CHECK(rv.code == kExitConfig);
  CHECK(rv.err.find("epsilon_list") != std::string::npos);

  const auto cfl = write_config(dir, "[solver]\nn_cells = 256\nn_steps = 5\n");
  CHECK(cli({"solve", "--config", cfl.string(), "--out", dir.string()}).code == kExitNumerical);
  CHECK(fs::exists(dir / "errors.log"));

  const auto degenerate = write_config(dir, "[model]\nentropy = linear\n");
  CHECK(cli({"lemma-check", "--config", degenerate.string(), "--out", dir.string()}).code == kExitProperty);

  CHECK(cli({"frobnicate"}).code == kExitConfig);
  CHECK(cli({"solve", "--threads", "many"}).code == kExitConfig);
  CHECK(cli({"replay"}).code == kExitConfig);
}
