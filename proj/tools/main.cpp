#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smoothreg/config.hpp"
#include "smoothreg/csv.hpp"
#include "smoothreg/errors.hpp"
#include "smoothreg/experiments.hpp"
#include "smoothreg/manifest.hpp"
#include "smoothreg/regression.hpp"
#include "smoothreg/rng.hpp"
#include "smoothreg/spectral.hpp"

namespace {

using namespace smoothreg;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

std::string out_path(const GlobalOptions& g, const std::string& name) {
  if (g.out_dir.empty() || g.out_dir == ".") return name;
  return g.out_dir + "/" + name;
}

void cmd_classify(double p, double alpha, double gamma, const std::string& obs) {
  ObservationMode mode;
  if (obs == "point")
    mode = ObservationMode::PointObservations;
  else if (obs == "eigen")
    mode = ObservationMode::EigenbasisObservations;
  else
    throw ParameterDomainError("--obs must be 'point' or 'eigen'");
  const LimitRegime regime = classify_limit(p, alpha, gamma, mode);
  std::string line = to_string(regime.tag);
  if (regime.expected_limit) line += " limit=" + format_double(*regime.expected_limit);
  std::printf("%s\n", line.c_str());
}

void cmd_simulate(const GlobalOptions& g, int n, const std::string& locations_file,
                  const std::string& grid, double side, const MaternParams& params,
                  const std::string& out_file) {
  SiteTable sites;
  if (!locations_file.empty()) {
    sites = read_locations_csv(locations_file);
  } else {
    if (n < 1) throw ParameterDomainError("simulate: need --n >= 1 or --locations");
    if (grid == "line") {
      sites.locations.resize(n, 2);
      for (int i = 0; i < n; ++i) {
        sites.locations(i, 0) =
            n == 1 ? 0.0 : side * static_cast<double>(i) / static_cast<double>(n - 1);
        sites.locations(i, 1) = 0.0;
      }
    } else if (grid == "square") {
      sites.locations = quasi_uniform_sites(n, side, derive_seed(g.seed, {90}));
    } else {
      throw ParameterDomainError("simulate: --grid must be 'line' or 'square'");
    }
    char buf[16];
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "s%04d", i);
      sites.ids.push_back(buf);
    }
  }

  const Eigen::VectorXd field =
      simulate_gp(sites.locations, params, derive_seed(g.seed, {91}));
  LongTable table;
  table.sites = sites;
  table.replicate_ids = {"r0"};
  table.variables = {"field"};
  table.values = {field};
  write_long_csv(out_file, table);
  std::printf("wrote %s (%d sites)\n", out_file.c_str(), static_cast<int>(field.size()));
}

RegressionDataset dataset_from_long(const LongTable& data, const std::string& response,
                                    const std::string& covariate, bool intercept) {
  const Eigen::MatrixXd& resp = data.variable(response);
  const Eigen::MatrixXd& cov = data.variable(covariate);
  RegressionDataset out;
  out.locations = data.sites.locations;
  const Eigen::Index n = resp.rows();
  for (Eigen::Index r = 0; r < resp.cols(); ++r) {
    Eigen::MatrixXd x(n, intercept ? 2 : 1);
    if (intercept) x.col(0).setOnes();
    x.col(intercept ? 1 : 0) = cov.col(r);
    out.covariates.push_back(std::move(x));
    out.responses.push_back(resp.col(r));
  }
  return out;
}

void cmd_fit(const std::string& data_file, const std::string& response,
             const std::string& covariate, bool intercept, bool free_nugget) {
  const LongTable data = read_long_csv(data_file);
  std::string resp = response, cov = covariate;
  if (resp.empty() || cov.empty()) {
    if (data.variables.size() != 2)
      throw DataError(data_file +
                      ": pass --response/--covariate when the file does not have exactly two "
                      "variables");
    resp = resp.empty() ? data.variables[0] : resp;
    cov = cov.empty() ? (data.variables[0] == resp ? data.variables[1] : data.variables[0]) : cov;
  }
  FitConfig fc;
  fc.free_nugget = free_nugget;
  const EstimationResult fit = fit_ml(dataset_from_long(data, resp, cov, intercept), fc);
  std::printf("n=%d replicates=%d loglik=%s evals=%d converged=%s\n",
              static_cast<int>(fit.n_used), static_cast<int>(data.replicate_ids.size()),
              format_double(fit.loglik).c_str(), fit.loglik_evals,
              fit.converged ? "true" : "false");
  std::printf("kappa=%s sigma=%s nu=%s nugget_var=%s\n",
              format_double(fit.cov_params.kappa).c_str(),
              format_double(fit.cov_params.sigma).c_str(),
              format_double(fit.cov_params.nu).c_str(),
              format_double(fit.cov_params.nugget_var).c_str());
  for (Eigen::Index i = 0; i < fit.beta_hat.size(); ++i) {
    const char* name = intercept ? (i == 0 ? "beta0" : "beta1") : "beta1";
    std::printf("%s=%s se=%s ci95=(%s,%s)\n", name, format_double(fit.beta_hat[i]).c_str(),
                format_double(fit.se[i]).c_str(),
                format_double(fit.ci95[static_cast<std::size_t>(i)].first).c_str(),
                format_double(fit.ci95[static_cast<std::size_t>(i)].second).c_str());
  }
}

void cmd_experiment(const GlobalOptions& g, const std::string& kind_name,
                    const std::string& config_file) {
  ConfigMap config =
      config_file.empty() ? ConfigMap::parse_string("", "<defaults>")
                          : ConfigMap::parse_file(config_file);

  RunManifest manifest;
  manifest.config_digest = config.digest();
  manifest.base_seed = g.seed;
  manifest.started_at = iso8601_utc_now();

  if (kind_name == "timeseries") {
    const ExperimentConfig ec =
        experiment_config_from(config, ExperimentKind::Timeseries1, g.seed);
    const ExperimentTable table = run_timeseries_experiment(ec);
    const std::string out = out_path(g, "timeseries_results.csv");
    write_experiment_csv(out, table);
    manifest.outputs.push_back(out);
  } else if (kind_name == "spatial") {
    const ExperimentConfig ec = experiment_config_from(config, ExperimentKind::Spatial, g.seed);
    const std::string loc_file = config.get_string("spatial.locations", "");
    ExperimentTable table;
    if (loc_file.empty()) {
      table = run_spatial_experiment(ec);
    } else {
      const SiteTable sites = read_locations_csv(loc_file);
      table = run_spatial_experiment(ec, &sites.locations);
    }
    const std::string out = out_path(g, "spatial_results.csv");
    write_experiment_csv(out, table);
    manifest.outputs.push_back(out);
  } else if (kind_name == "application") {
    const ExperimentConfig ec =
        experiment_config_from(config, ExperimentKind::Application, g.seed);
    const std::string data_file = config.get_string("application.data", "");
    RegressionDataset data;
    if (data_file.empty()) {
      StandInSettings st;
      st.beta = config.get_double("standin.beta", st.beta);
      st.nu_b = config.get_double("standin.nu_b", st.nu_b);
      st.nu_sb = config.get_double("standin.nu_sb", st.nu_sb);
      st.noise_sigma = config.get_double("standin.noise_sigma", st.noise_sigma);
      st.site_count = config.get_int("standin.site_count", st.site_count);
      st.domain_side = config.get_double("standin.domain_side", st.domain_side);
      st.replicates = config.get_int("standin.replicates", st.replicates);
      data = synthetic_application_data(st, g.seed);
    } else {
      const LongTable table = read_long_csv(data_file);
      // variable A is the response side of the first direction
      const Eigen::MatrixXd& a = table.variable(ec.app.name_a);
      const Eigen::MatrixXd& b = table.variable(ec.app.name_b);
      data.locations = table.sites.locations;
      for (Eigen::Index r = 0; r < a.cols(); ++r) {
        data.responses.push_back(a.col(r));
        data.covariates.push_back(Eigen::MatrixXd(b.col(r)));
      }
    }
    const ApplicationTables tables = run_application_pipeline(data, ec);
    const std::string out_u = out_path(g, "application_unsmoothed.csv");
    const std::string out_s = out_path(g, "application_smoothed.csv");
    write_experiment_csv(out_u, tables.unsmoothed);
    write_experiment_csv(out_s, tables.smoothed);
    manifest.outputs.push_back(out_u);
    manifest.outputs.push_back(out_s);
  } else {
    throw ParameterDomainError("experiment kind must be timeseries, spatial or application");
  }

  manifest.finished_at = iso8601_utc_now();
  const std::string manifest_path = out_path(g, "manifest.json");
  write_manifest(manifest_path, manifest);
  for (const auto& o : manifest.outputs) std::printf("wrote %s\n", o.c_str());
  std::printf("wrote %s\n", manifest_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process regression with misspecified covariate smoothness"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Base seed for all randomness (default 0)");

  auto* classify = app.add_subcommand("classify", "Classify the limit regime of the GLS slope");
  double p = 0.0, alpha = 0.0, gamma = 0.0;
  std::string obs = "eigen";
  classify->add_option("--p", p, "Covariate smoothness")->required();
  classify->add_option("--alpha", alpha, "Error covariance decay exponent")->required();
  classify->add_option("--gamma", gamma, "Covariate smoothing exponent")->required();
  classify->add_option("--obs", obs, "Observation scheme: point or eigen");

  auto* simulate = app.add_subcommand("simulate", "Draw a Gaussian Matern field and write a CSV");
  int sim_n = 0;
  std::string sim_locations, sim_grid = "line", sim_out = "field.csv";
  double sim_side = 10.0;
  MaternParams sim_params;
  simulate->add_option("--n", sim_n, "Number of sites to generate");
  simulate->add_option("--locations", sim_locations, "Locations CSV (site_id,x,y)");
  simulate->add_option("--grid", sim_grid, "Generated layout: line or square");
  simulate->add_option("--side", sim_side, "Domain length/side for generated layouts");
  simulate->add_option("--kappa", sim_params.kappa, "Matern inverse range");
  simulate->add_option("--sigma", sim_params.sigma, "Matern standard deviation");
  simulate->add_option("--nu", sim_params.nu, "Matern smoothness");
  simulate->add_option("--nugget-var", sim_params.nugget_var, "Nugget variance");
  simulate->add_option("--out", sim_out, "Output CSV path");

  auto* experiment = app.add_subcommand("experiment", "Run a study and write result tables");
  std::string exp_kind, exp_config;
  experiment->add_option("kind", exp_kind, "timeseries, spatial or application")->required();
  experiment->add_option("--config", exp_config, "Config file (INI-style)");
  experiment->add_option("--out-dir", g.out_dir, "Directory for result files");

  auto* fit = app.add_subcommand("fit", "Maximum likelihood fit on a long-format data CSV");
  std::string fit_data, fit_response, fit_covariate;
  bool fit_intercept = true, fit_nugget = false;
  fit->add_option("--data", fit_data, "Long-format data CSV")->required();
  fit->add_option("--response", fit_response, "Response variable name");
  fit->add_option("--covariate", fit_covariate, "Covariate variable name");
  fit->add_flag("--intercept,!--no-intercept", fit_intercept, "Include an intercept (default on)");
  fit->add_flag("--free-nugget", fit_nugget, "Estimate a nugget variance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::fflush(stdout);
    std::fprintf(stderr, "smoothreg: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (classify->parsed()) {
      cmd_classify(p, alpha, gamma, obs);
    } else if (simulate->parsed()) {
      cmd_simulate(g, sim_n, sim_locations, sim_grid, sim_side, sim_params, sim_out);
    } else if (experiment->parsed()) {
      cmd_experiment(g, exp_kind, exp_config);
    } else if (fit->parsed()) {
      cmd_fit(fit_data, fit_response, fit_covariate, fit_intercept, fit_nugget);
    }
  } catch (const ParameterDomainError& e) {
    std::fprintf(stderr, "smoothreg: %s\n", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "smoothreg: %s\n", e.what());
    return kExitData;
  } catch (const DataError& e) {
    std::fprintf(stderr, "smoothreg: %s\n", e.what());
    return kExitData;
  } catch (const Error& e) {
    // numerical failures: factorization, rank deficiency, non-convergence, ...
    std::fprintf(stderr, "smoothreg: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "smoothreg: internal error: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
