// End-to-end checks of the levycox CLI: spawns the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = LEVYCOX_CLI_PATH;

int run(const std::string& args, const std::string& log = "/dev/null") {
  const std::string command = kCli + " " + args + " >" + log + " 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "levycox_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("simulate then fit round-trips with exit 0") {
  TempDir tmp;
  const std::string data = tmp.file("d.csv");
  const std::string fit = tmp.file("fit.json");
  REQUIRE(run("simulate --n 100 --beta0 0.5 --seed 7 --out " + data) == 0);
  REQUIRE(fs::exists(data));
  CHECK(run("fit --data " + data + " --out " + fit) == 0);
  const std::string text = slurp(fit);
  CHECK(text.find("\"beta_hat\"") != std::string::npos);
  CHECK(text.find("\"converged\": true") != std::string::npos);
  CHECK(text.find("\"breslow\"") != std::string::npos);
}

TEST_CASE("monotone likelihood exits with the numerical failure code") {
  TempDir tmp;
  const std::string data = tmp.file("monotone.csv");
  spit(data, "time,status,z1\n1,1,1\n2,1,0\n");
  const std::string log = tmp.file("log.txt");
  CHECK(run("fit --data " + data, log) == 2);
  CHECK(slurp(log).find("monotone") != std::string::npos);
}

TEST_CASE("validation failures exit 1 and io failures exit 3") {
  TempDir tmp;
  const std::string tied = tmp.file("tied.csv");
  spit(tied, "time,status,z1\n1,1,0.5\n1,1,0.25\n");
  CHECK(run("fit --data " + tied) == 1);
  CHECK(run("fit --data " + tmp.file("missing.csv")) == 3);

  const std::string bad = tmp.file("bad.csv");
  spit(bad, "time,status,z1\n1,7,0.5\n");
  CHECK(run("fit --data " + bad) == 1);
}

TEST_CASE("usage errors exit 64 and help documents the flags") {
  TempDir tmp;
  CHECK(run("frobnicate") == 64);
  CHECK(run("fit --no-such-flag 3") == 64);
  const std::string help = tmp.file("help.txt");
  CHECK(run("--help", help) == 0);
  const std::string text = slurp(help);
  CHECK(text.find("simulate") != std::string::npos);
  CHECK(text.find("bvm-check") != std::string::npos);
  const std::string sim_help = tmp.file("sim_help.txt");
  CHECK(run("simulate --help", sim_help) == 0);
  const std::string sim_text = slurp(sim_help);
  for (const char* flag : {"--n", "--beta0", "--seed", "--out", "--baseline",
                           "--censoring", "--tau", "--covariates"})
    CHECK(sim_text.find(flag) != std::string::npos);
}

TEST_CASE("posterior draw dumps are deterministic byte for byte") {
  TempDir tmp;
  const std::string data = tmp.file("d.csv");
  REQUIRE(run("simulate --n 60 --beta0 0.4 --seed 11 --out " + data) == 0);
  const std::string a = tmp.file("a.csv");
  const std::string b = tmp.file("b.csv");
  const std::string pa = tmp.file("pa.csv");
  const std::string pb = tmp.file("pb.csv");
  const std::string args = "posterior --data " + data +
                           " --draws 2000 --burn-in 200 --seed 5 "
                           "--path-draws 20 ";
  REQUIRE(run(args + "--out " + a + " --paths " + pa) == 0);
  REQUIRE(run(args + "--out " + b + " --paths " + pb) == 0);
  const std::string draws = slurp(a);
  CHECK(draws == slurp(b));
  CHECK(slurp(pa) == slurp(pb));
  CHECK(draws.substr(0, 12) == "draw,beta_1\n");
  CHECK(slurp(pa).substr(0, 9) == "draw,t,A\n");
}

TEST_CASE("bvm-check is reproducible from a config file") {
  TempDir tmp;
  const std::string cfg = tmp.file("cfg.json");
  spit(cfg, R"({
  "data": {"simulate": {"n": 150, "beta0": [0.5], "seed": 3,
                         "censoring": {"family": "uniform", "upper": 5.0},
                         "tau": 2.0}},
  "prior": {"family": "beta", "c": 1.0, "lambda": 1.0, "epsilon": 1e-4},
  "chain": {"draws": 3000, "burn_in": 400, "seed": 21},
  "diagnostics": {"grid_points": 5, "path_draws": 200}
})");
  const std::string r1 = tmp.file("r1.json");
  const std::string r2 = tmp.file("r2.json");
  const int code1 = run("--config " + cfg + " bvm-check --no-assert --out " + r1);
  const int code2 = run("--config " + cfg + " bvm-check --no-assert --out " + r2);
  CHECK(code1 == 0);
  CHECK(code2 == 0);
  const std::string report = slurp(r1);
  CHECK(report == slurp(r2));
  CHECK(report.find("\"meta\"") != std::string::npos);
  CHECK(report.find("\"hazard\"") != std::string::npos);

  // CSV flavour: a flat key,value table with an increasing grid column.
  const std::string rc = tmp.file("r.csv");
  CHECK(run("--config " + cfg + " bvm-check --no-assert --format csv --out " + rc) == 0);
  const std::string csv = slurp(rc);
  CHECK(csv.substr(0, 10) == "key,value\n");
  double prev = -1.0;
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("hazard.grid.", 0) == 0) {
      const double value = std::stod(line.substr(line.find(',') + 1));
      CHECK(value > prev);
      prev = value;
    }
  }
  CHECK(prev > 0.0);
}

TEST_CASE("verdict gating drives the exit code through the thresholds") {
  TempDir tmp;
  auto config_with = [&](const std::string& name, double ks_threshold) {
    const std::string path = tmp.file(name);
    std::ostringstream cfg;
    cfg << R"({
  "data": {"simulate": {"n": 120, "beta0": [0.5], "seed": 2, "tau": 2.0}},
  "prior": {"family": "beta", "c": 1.0, "lambda": 1.0},
  "chain": {"draws": 2000, "burn_in": 300, "seed": 9},
  "diagnostics": {"grid_points": 4, "path_draws": 100,
                   "thresholds": {"ks": )"
        << ks_threshold << R"(, "cov_rel_err": 1e9, "mean_gap_factor": 1e9}}
})";
    spit(path, cfg.str());
    return path;
  };
  // A vacuous threshold passes; an impossible one fails with exit 1 unless
  // --no-assert is given.
  const std::string pass_cfg = config_with("pass.json", 1.0);
  const std::string fail_cfg = config_with("fail.json", 1e-9);
  CHECK(run("bvm-check --config " + pass_cfg) == 0);
  CHECK(run("bvm-check --config " + fail_cfg) == 1);
  CHECK(run("bvm-check --no-assert --config " + fail_cfg) == 0);
}

TEST_CASE("coverage command emits a report with the documented keys") {
  TempDir tmp;
  const std::string cfg = tmp.file("cov.json");
  spit(cfg, R"({
  "data": {"simulate": {"n": 60, "beta0": [0.5], "seed": 5,
                         "censoring": {"family": "uniform", "upper": 5.0},
                         "tau": 2.0}},
  "prior": {"family": "beta", "c": 1.0, "lambda": 1.0},
  "coverage": {"replications": 50, "level": 0.9, "n": 60,
                "chain_draws": 1000, "chain_burn_in": 200, "seed": 8}
})");
  const std::string out = tmp.file("cov_report.json");
  const int code = run("--config " + cfg + " coverage --no-assert --out " + out);
  CHECK(code == 0);
  const std::string report = slurp(out);
  CHECK(report.find("\"coverage\"") != std::string::npos);
  CHECK(report.find("\"rate\"") != std::string::npos);
  CHECK(report.find("\"width\"") != std::string::npos);
}
