// Integration tests that drive the installed CLI binary end to end.
// The binary path is injected at compile time via SMOOTHREG_CLI_PATH.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "smoothreg/csv.hpp"

namespace fs = std::filesystem;
using smoothreg::ExperimentTable;
using smoothreg::read_experiment_csv;
using smoothreg::read_long_csv;

namespace {

int g_checks = 0;
int g_failures = 0;

void check(bool ok, const std::string& what) {
  ++g_checks;
  if (!ok) {
    ++g_failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SMOOTHREG_CLI_PATH) + " " + args + " 2>&1";
  CmdResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    r.output = "popen failed";
    return r;
  }
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

void test_classify() {
  CmdResult r = run_cli("classify --p 1 --alpha 2 --gamma 0");
  check(r.exit_code == 0, "classify true-beta exits 0: " + r.output);
  check(contains(r.output, "ConvergesToTrueBeta"), "classify true-beta tag: " + r.output);

  r = run_cli("classify --p 1 --alpha 2 --gamma -0.5");
  check(r.exit_code == 0, "classify zero exits 0");
  check(contains(r.output, "ConvergesToZero"), "classify zero tag: " + r.output);
  check(contains(r.output, "limit=0"), "classify zero carries limit: " + r.output);

  r = run_cli("classify --p 1 --alpha 2 --gamma 0.5");
  check(contains(r.output, "Diverges"), "classify diverges tag: " + r.output);

  r = run_cli("classify --p 4 --alpha 2 --gamma 1 --obs eigen");
  check(contains(r.output, "RandomFiniteLimit"), "classify rfl tag: " + r.output);

  r = run_cli("classify --p 1 --alpha 2 --gamma 0.25 --obs point");
  check(contains(r.output, "Unspecified"), "classify point-mode gap: " + r.output);

  r = run_cli("classify --alpha 2 --gamma 0");
  check(r.exit_code == 2, "classify missing --p exits 2, got " + std::to_string(r.exit_code));

  r = run_cli("classify --p 1 --alpha 2 --gamma 0 --obs sideways");
  check(r.exit_code == 2, "classify bad --obs exits 2, got " + std::to_string(r.exit_code));

  r = run_cli("classify --p -1 --alpha 2 --gamma 0");
  check(r.exit_code == 2, "classify domain error exits 2, got " + std::to_string(r.exit_code));
}

void test_simulate(const fs::path& dir) {
  const fs::path out1 = dir / "field1.csv";
  const fs::path out2 = dir / "field2.csv";
  const fs::path out3 = dir / "field3.csv";

  CmdResult r = run_cli("--seed 7 simulate --n 16 --kappa 1 --sigma 1.2 --nu 0.5 --out " +
                        out1.string());
  check(r.exit_code == 0, "simulate exits 0: " + r.output);
  check(fs::exists(out1), "simulate wrote the file");

  r = run_cli("--seed 7 simulate --n 16 --kappa 1 --sigma 1.2 --nu 0.5 --out " + out2.string());
  check(slurp(out1) == slurp(out2), "same seed reproduces the field byte for byte");

  r = run_cli("--seed 8 simulate --n 16 --kappa 1 --sigma 1.2 --nu 0.5 --out " + out3.string());
  check(slurp(out1) != slurp(out3), "different seed changes the field");

  const auto table = read_long_csv(out1.string());
  check(table.sites.ids.size() == 16, "simulate produced 16 sites");
  check(table.variables == std::vector<std::string>{"field"}, "simulate variable name");

  r = run_cli("simulate --n 12 --grid hexagonal");
  check(r.exit_code == 2, "simulate bad grid exits 2, got " + std::to_string(r.exit_code));

  r = run_cli("simulate --n 5 --kappa 0 --out " + (dir / "bad.csv").string());
  check(r.exit_code == 2, "simulate bad kappa exits 2, got " + std::to_string(r.exit_code));
}

void test_experiment(const fs::path& dir) {
  const fs::path config = dir / "ts_small.ini";
  write_file(config,
             "[experiment]\n"
             "n_grid = 24, 32\n"
             "replications = 3\n"
             "[timeseries]\n"
             "kind = 1\n");

  const fs::path d1 = dir / "run1";
  const fs::path d2 = dir / "run2";
  fs::create_directories(d1);
  fs::create_directories(d2);

  CmdResult r = run_cli("--seed 5 experiment timeseries --config " + config.string() +
                        " --out-dir " + d1.string());
  check(r.exit_code == 0, "experiment run 1 exits 0: " + r.output);
  r = run_cli("--seed 5 experiment timeseries --config " + config.string() + " --out-dir " +
              d2.string());
  check(r.exit_code == 0, "experiment run 2 exits 0: " + r.output);

  const fs::path csv1 = d1 / "timeseries_results.csv";
  const fs::path csv2 = d2 / "timeseries_results.csv";
  check(fs::exists(csv1) && fs::exists(csv2), "experiment wrote result CSVs");
  check(!slurp(csv1).empty() && slurp(csv1) == slurp(csv2),
        "same config and seed give byte-identical result CSVs");
  check(fs::exists(d1 / "manifest.json"), "experiment wrote a manifest");
  check(contains(slurp(d1 / "manifest.json"), "timeseries_results.csv"),
        "manifest lists the output");

  const ExperimentTable table = read_experiment_csv(csv1.string());
  check(table.cells.size() == 4, "two n by two models");
  check(table.find(24, "model1") != nullptr && table.find(32, "model2") != nullptr,
        "expected cells present");

  const fs::path d3 = dir / "run3";
  fs::create_directories(d3);
  r = run_cli("--seed 6 experiment timeseries --config " + config.string() + " --out-dir " +
              d3.string());
  check(r.exit_code == 0, "experiment run 3 exits 0");
  check(slurp(csv1) != slurp(d3 / "timeseries_results.csv"), "different seed changes results");

  r = run_cli("experiment timeseries --config " + (dir / "nonexistent.ini").string());
  check(r.exit_code == 3, "missing config exits 3, got " + std::to_string(r.exit_code));
  check(contains(r.output, "nonexistent.ini"), "missing-config error names the file: " + r.output);

  const fs::path typo = dir / "typo.ini";
  write_file(typo, "[timeseries]\nknd = 1\n");
  r = run_cli("experiment timeseries --config " + typo.string());
  check(r.exit_code == 3, "unknown config key exits 3, got " + std::to_string(r.exit_code));
  check(contains(r.output, "knd"), "unknown-key error names the key: " + r.output);

  r = run_cli("experiment sideways");
  check(r.exit_code == 2, "unknown experiment kind exits 2, got " + std::to_string(r.exit_code));

  r = run_cli("experiment");
  check(r.exit_code == 2, "experiment without kind exits 2, got " + std::to_string(r.exit_code));
}

void test_fit(const fs::path& dir) {
  // tiny two-variable dataset on a line; y tracks 2x plus a smooth bump
  const fs::path data = dir / "fit_data.csv";
  std::string body = "site_id,x,y,replicate_id,variable,value\n";
  for (int i = 0; i < 16; ++i) {
    const double x = static_cast<double>(i) / 3.0;
    const double cov = std::sin(0.8 * x) + 0.1 * x;
    const double resp = 2.0 * cov + 0.3 * std::cos(1.7 * x);
    const std::string id = "s" + std::to_string(i);
    body += id + "," + std::to_string(x) + ",0,r0,xvar," + std::to_string(cov) + "\n";
    body += id + "," + std::to_string(x) + ",0,r0,yvar," + std::to_string(resp) + "\n";
    body += id + "," + std::to_string(x) + ",0,r0,cvar,1.5\n";
  }
  write_file(data, body);

  CmdResult r = run_cli("fit --data " + data.string() + " --response yvar --covariate xvar");
  check(r.exit_code == 0, "fit exits 0: " + r.output);
  check(contains(r.output, "beta1="), "fit prints the slope: " + r.output);
  check(contains(r.output, "kappa="), "fit prints covariance parameters");
  check(contains(r.output, "ci95="), "fit prints confidence intervals");

  CmdResult r2 = run_cli("fit --data " + data.string() + " --response yvar --covariate xvar");
  check(r.output == r2.output, "fit output is deterministic");

  r = run_cli("fit --data " + (dir / "missing.csv").string());
  check(r.exit_code == 3, "fit missing data exits 3, got " + std::to_string(r.exit_code));

  // constant covariate is collinear with the intercept
  r = run_cli("fit --data " + data.string() + " --response yvar --covariate cvar");
  check(r.exit_code == 4, "rank-deficient fit exits 4, got " + std::to_string(r.exit_code));

  r = run_cli("fit");
  check(r.exit_code == 2, "fit without --data exits 2, got " + std::to_string(r.exit_code));
}

}  // namespace

int main() {
  const fs::path dir =
      fs::temp_directory_path() / ("smoothreg_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  test_classify();
  test_simulate(dir);
  test_experiment(dir);
  test_fit(dir);

  fs::remove_all(dir);
  std::cout << g_checks << " checks, " << g_failures << " failures\n";
  return g_failures == 0 ? 0 : 1;
}
