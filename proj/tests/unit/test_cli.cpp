#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path cli{ZZKIT_CLI_PATH};
const fs::path configs = fs::path(ZZKIT_SOURCE_DIR) / "configs";

fs::path workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "zzkit_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI inside the scratch directory; returns its exit status.
int run(const std::string& args, const std::string& stdout_file = "stdout.txt") {
  const std::string cmd = "cd '" + workdir().string() + "' && '" + cli.string() + "' " + args + " > " + stdout_file +
                          " 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(workdir() / p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

const std::string small_blockade = R"({
  "model": {"omega1_hz": 6.3165e9, "omega2_hz": 4.5075e9, "zeta_hz": 19e6},
  "delays_s": {"start": -100e-9, "stop": 100e-9, "points": 9},
  "pulse_lengths_s": [16e-9, 52e-9],
  "out": "blockade.csv"
})";

}  // namespace

TEST_CASE("valid runs exit 0 and rerun byte-identically") {
  const fs::path cfg = write_config("blockade.json", small_blockade);
  REQUIRE(run("--config '" + cfg.string() + "' blockade") == 0);
  const std::string first = slurp("blockade.csv");
  CHECK(first.rfind("delay_s,pulse_len_s,p1_e,p2_e\n", 0) == 0);
  REQUIRE(run("--config '" + cfg.string() + "' --threads 4 blockade") == 0);
  CHECK(slurp("blockade.csv") == first);
}

TEST_CASE("--out overrides the config path and '-' writes to stdout") {
  const fs::path cfg = write_config("blockade.json", small_blockade);
  REQUIRE(run("--config '" + cfg.string() + "' --out other.csv blockade") == 0);
  const std::string a = slurp("other.csv");
  REQUIRE(run("--config '" + cfg.string() + "' --out - blockade", "piped.csv") == 0);
  CHECK(slurp("piped.csv") == a);
}

TEST_CASE("zz-sweep and flux-spectroscopy on the shipped fixture") {
  const fs::path zz = write_config("zz.json", R"({"device": {"fixture": "chip1"}, "delta_hz": [1e9, 2e9], "levels": 5})");
  REQUIRE(run("--config '" + zz.string() + "' --out zz.csv zz-sweep") == 0);
  CHECK(slurp("zz.csv").rfind("delta_hz,zeta_exact_hz,zeta_perturbative_hz,zeta_series_hz,ambiguous_flag\n", 0) == 0);
  const fs::path fl = write_config("flux.json", R"({"device": {"fixture": "chip1"},
    "flux_phi0": {"start": -0.2, "stop": 0.0, "points": 21}, "summary_out": "flux_summary.json"})");
  REQUIRE(run("--config '" + fl.string() + "' --out flux.csv flux-spectroscopy") == 0);
  CHECK(slurp("flux_summary.json").find("two_j_hz") != std::string::npos);
}

TEST_CASE("optimize honours --seed") {
  const fs::path cfg = write_config("rosen.json", R"({"test_function": "rosenbrock",
    "variables": [{"name": "x", "low": -2, "high": 2}, {"name": "y", "low": -1, "high": 3}],
    "de": {"population": 10, "generations": 15, "seed": 1}, "history_out": "history.csv"})");
  REQUIRE(run("--config '" + cfg.string() + "' --seed 3 --out a.json optimize") == 0);
  REQUIRE(run("--config '" + cfg.string() + "' --seed 3 --out b.json optimize") == 0);
  REQUIRE(run("--config '" + cfg.string() + "' --seed 4 --out c.json optimize") == 0);
  CHECK(slurp("a.json") == slurp("b.json"));
  CHECK(slurp("a.json") != slurp("c.json"));
  CHECK(slurp("history.csv").rfind("generation,best_zeta_hz,n_feasible\n", 0) == 0);
}

TEST_CASE("configuration errors exit 2") {
  const fs::path bad = write_config("bad.json", R"({"model": {"fixture": "chip1"}, "delays": [1, 2]})");
  CHECK(run("--config '" + bad.string() + "' blockade") == 2);
  CHECK(slurp("stderr.txt").find("delays") != std::string::npos);
  const fs::path broken = write_config("broken.json", "{\n  \"model\": \n");
  CHECK(run("--config '" + broken.string() + "' blockade") == 2);
  CHECK(run("--config nowhere.json blockade") == 2);
  CHECK(run("blockade") == 2);
  CHECK(run("--config '" + bad.string() + "' no-such-command") == 2);
}

TEST_CASE("infeasible optimization exits 3") {
  CHECK(run("--config '" + (configs / "optimize_infeasible.json").string() + "' --out inf.json optimize") == 3);
  CHECK(slurp("stderr.txt").find("feasible") != std::string::npos);
}

TEST_CASE("numeric failures exit 4") {
  const fs::path cfg = write_config("ramsey.json", R"({"model": {"fixture": "chip1"}, "zeta_hz": [5e6],
    "free_times_s": {"start": 0, "stop": 100e-9, "points": 51}, "min_contrast": 1.5})");
  CHECK(run("--config '" + cfg.string() + "' --out r.csv ramsey") == 4);
}
