#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "tilerank/cli.hpp"

using namespace tilerank;

namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = TILERANK_FIXTURE_DIR;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tilerank-cli-" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate accepts the fixtures") {
  const CliResult r = run_cli(
      {"validate", "--dataset", (kFixtures / "minimal.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("OK: 1 domain(s), 2 entities") != std::string::npos);

  const CliResult r7 =
      run_cli({"validate", "--dataset", (kFixtures / "seed7.json").string()});
  CHECK(r7.code == 0);
  CHECK(r7.out.find("global ranking") != std::string::npos);
}

TEST_CASE("validate rejects broken data with exit 1") {
  const fs::path dir = fresh_dir("broken");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({
    "entities": ["A"],
    "domains": [{"id": "d", "category": "c", "semantic": {"l": 1.0},
                 "performances": {"A": [0.5, 0.5, 0.5, 0.5]}}]
  })";
  const CliResult r =
      run_cli({"validate", "--dataset", (dir / "bad.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("usage problems exit with 2") {
  CHECK(run_cli({"validate"}).code == 2);              // missing --dataset
  CHECK(run_cli({"no-such-command"}).code == 2);
  CHECK(run_cli({}).code == 2);
  const CliResult bad_spec = run_cli(
      {"predict", "--dataset", (kFixtures / "seed7.json").string(),
       "--domain", "d1", "--strategy", "warp-drive"});
  CHECK(bad_spec.code == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"evaluate", "--help"}).code == 0);
}

TEST_CASE("predict output is coordinate-independent for fixed") {
  const std::vector<std::string> base{
      "predict", "--dataset", (kFixtures / "seed7.json").string(),
      "--domain", "d1", "--strategy", "fixed"};
  auto with_coord = [&](const std::string& coord) {
    std::vector<std::string> args = base;
    args.push_back("--coord");
    args.push_back(coord);
    return run_cli(args);
  };
  const CliResult a = with_coord("0.5,0.5");
  const CliResult b = with_coord("1,0");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("1\t") != std::string::npos);
}

TEST_CASE("predict depends on the preference point for mean-V") {
  const CliResult lo = run_cli(
      {"predict", "--dataset", (kFixtures / "seed7.json").string(),
       "--domain", "d1", "--strategy", "mean-V", "--coord", "0,0"});
  CHECK(lo.code == 0);
  CHECK(!lo.out.empty());
}

TEST_CASE("synth, validate, evaluate, render pipeline") {
  const fs::path dir = fresh_dir("pipeline");
  fs::create_directories(dir);
  const std::string ds = (dir / "ds.json").string();

  CHECK(run_cli({"synth", "--domains", "3", "--entities", "4", "--categories",
                 "2", "--labels", "2", "--drift", "0.4", "--seed", "5",
                 "--out", ds})
            .code == 0);
  CHECK(run_cli({"validate", "--dataset", ds}).code == 0);

  const std::string rep = (dir / "rep").string();
  const CliResult ev = run_cli({"evaluate", "--dataset", ds, "--strategies",
                                "fixed,mean-V", "--resolution", "5", "--out",
                                rep, "--scale", "1"});
  CHECK(ev.code == 0);
  CHECK(fs::exists(fs::path(rep) / "manifest.json"));
  CHECK(fs::exists(fs::path(rep) / "mean-V" / "mean.csv"));
  CHECK(fs::exists(fs::path(rep) / "hybrid" / "mean-selection.ppm"));

  // A second run into the same directory must refuse to clobber it.
  const CliResult again = run_cli({"evaluate", "--dataset", ds, "--strategies",
                                   "fixed,mean-V", "--resolution", "5",
                                   "--out", rep, "--scale", "1"});
  CHECK(again.code == 1);

  const CliResult rendered = run_cli(
      {"render", "--input", (fs::path(rep) / "mean-V" / "mean.csv").string(),
       "--out", (dir / "img").string(), "--scale", "2"});
  CHECK(rendered.code == 0);
  CHECK(fs::exists(dir / "img.ppm"));
  CHECK(fs::exists(dir / "img.png"));
}

TEST_CASE("baselines and layers subcommands") {
  const fs::path dir = fresh_dir("aux");
  const CliResult bl = run_cli(
      {"baselines", "--dataset", (kFixtures / "seed7.json").string(),
       "--resolution", "5", "--out", (dir / "bl").string(), "--scale", "1"});
  CHECK(bl.code == 0);
  CHECK(fs::exists(dir / "bl" / "mean.csv"));
  CHECK(fs::exists(dir / "bl" / "min.ppm"));

  const CliResult ly = run_cli(
      {"layers", "--dataset", (kFixtures / "seed7.json").string(), "--domain",
       "d2", "--resolution", "5", "--out", (dir / "ly").string()});
  CHECK(ly.code == 0);
  CHECK(fs::exists(dir / "ly" / "e1.csv"));
  CHECK(fs::exists(dir / "ly" / "e4.csv"));

  const CliResult lyp = run_cli(
      {"layers", "--dataset", (kFixtures / "seed7.json").string(), "--domain",
       "d2", "--strategy", "mean-V", "--resolution", "5", "--out",
       (dir / "lyp").string()});
  CHECK(lyp.code == 0);
  CHECK(fs::exists(dir / "lyp" / "e1.csv"));
}

TEST_SUITE_END();
