#include "smoothreg/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Cholesky>

#include "smoothreg/errors.hpp"
#include "smoothreg/parallel.hpp"
#include "smoothreg/rng.hpp"
#include "smoothreg/standardize.hpp"

namespace smoothreg {

namespace {

// Seed-path tags, one per runner, so streams never collide across studies.
constexpr std::uint64_t kTsTag = 1;
constexpr std::uint64_t kSpatialTag = 2;
constexpr std::uint64_t kAppTag = 3;
constexpr std::uint64_t kStandInTag = 4;
constexpr std::uint64_t kSitesTag = 5;

constexpr double kZ975 = 1.959963984540054;

std::string format_key_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

ExperimentCell make_mc_cell(int n, std::string key, std::vector<double> estimates,
                            int failures) {
  ExperimentCell cell;
  cell.n = n;
  cell.key = std::move(key);
  cell.failures = failures;
  const std::size_t m = estimates.size();
  if (m == 0) {
    cell.mean_beta = std::numeric_limits<double>::quiet_NaN();
    cell.band_lo = cell.mean_beta;
    cell.band_hi = cell.mean_beta;
    return cell;
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(m);
  double half = 0.0;
  if (m > 1) {
    double ss = 0.0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    half = kZ975 * sd / std::sqrt(static_cast<double>(m));
  }
  cell.mean_beta = mean;
  cell.band_lo = mean - half;
  cell.band_hi = mean + half;
  cell.estimates = std::move(estimates);
  return cell;
}

std::vector<int> sorted_sample(Rng& rng, int n, int k) {
  std::vector<int> idx = rng.sample_without_replacement(n, k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

Eigen::VectorXd entries_of(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw ParameterDomainError("experiment: replications must be >= 1");
  if (n_grid.empty()) throw ParameterDomainError("experiment: n_grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw ParameterDomainError("experiment: sample sizes must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw ParameterDomainError("experiment: n_grid must be strictly increasing");
  }
}

const ExperimentCell* ExperimentTable::find(int n, const std::string& key) const {
  for (const auto& c : cells)
    if (c.n == n && c.key == key) return &c;
  return nullptr;
}

const ExperimentCell& ExperimentTable::cell(int n, const std::string& key) const {
  const ExperimentCell* c = find(n, key);
  if (!c) throw Error("experiment table: no cell (" + std::to_string(n) + ", " + key + ")");
  return *c;
}

Eigen::VectorXd simulate_gp(const CovMatrix& cov, std::uint64_t seed) {
  if (!cov.factorized()) throw Error("simulate_gp: covariance must be factorized");
  Rng rng(seed);
  const Eigen::VectorXd z = rng.normal_vector(cov.n());
  return cov.chol_lower().triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd simulate_gp(const Eigen::MatrixXd& locations, const MaternParams& params,
                            std::uint64_t seed) {
  CovMatrix cov = build_cov_matrix(locations, params);
  cov.factorize();
  return simulate_gp(cov, seed);
}

ExperimentTable run_timeseries_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::Timeseries1 && config.kind != ExperimentKind::Timeseries2 &&
      config.kind != ExperimentKind::Timeseries3)
    throw ParameterDomainError("run_timeseries_experiment: wrong experiment kind");
  const TimeseriesSettings& ts = config.ts;
  ts.covariate.validate();
  ts.noise.validate();
  ts.smoother_s.validate();
  ts.smoother_shat.validate();
  if (!(ts.domain_length > 0.0))
    throw ParameterDomainError("timeseries: domain length must be positive");

  MaternParams zparams = ts.noise;
  if (config.kind == ExperimentKind::Timeseries3)
    zparams.nugget_var = ts.noise_nugget_sd * ts.noise_nugget_sd;
  const bool known_cov = config.kind == ExperimentKind::Timeseries1;

  ExperimentTable table;
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const int n = config.n_grid[ni];
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i)
      s[i] = ts.domain_length * static_cast<double>(i) / static_cast<double>(n - 1);
    const Eigen::MatrixXd locations = s;

    CovMatrix sigma_z;
    if (known_cov) {
      sigma_z = build_cov_matrix(locations, zparams);
      sigma_z.factorize();
    }

    // one slot per (replicate, model); NaN marks a failed fit
    std::vector<std::array<double, 2>> slots(
        static_cast<std::size_t>(config.replications),
        {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()});

    parallel_for(config.replications, [&](int rep) {
      const std::uint64_t r = static_cast<std::uint64_t>(rep);
      const Eigen::VectorXd x = simulate_gp(
          locations, ts.covariate, derive_seed(config.base_seed, {kTsTag, ni, r, 0}));
      const Eigen::VectorXd z = simulate_gp(
          locations, zparams, derive_seed(config.base_seed, {kTsTag, ni, r, 1}));
      const Eigen::VectorXd sx = lowess(s, x, ts.smoother_s);
      const Eigen::VectorXd y = sx + z;
      const Eigen::VectorXd shat_x = lowess(s, x, ts.smoother_shat);

      for (int model = 0; model < 2; ++model) {
        RegressionDataset data;
        data.locations = locations;
        data.covariates = {model == 0 ? Eigen::MatrixXd(x) : Eigen::MatrixXd(shat_x)};
        data.responses = {y};
        try {
          double beta;
          if (known_cov) {
            beta = gls_estimate(data, sigma_z).beta_hat[0];
          } else {
            FitConfig fc;
            fc.free_nugget = config.kind == ExperimentKind::Timeseries3;
            beta = fit_ml(data, fc).beta_hat[0];
          }
          slots[static_cast<std::size_t>(rep)][static_cast<std::size_t>(model)] = beta;
        } catch (const Error&) {
          // leave the slot NaN; counted as a failure below
        }
      }
    });

    for (int model = 0; model < 2; ++model) {
      std::vector<double> estimates;
      int failures = 0;
      for (const auto& slot : slots) {
        const double b = slot[static_cast<std::size_t>(model)];
        if (std::isnan(b))
          ++failures;
        else
          estimates.push_back(b);
      }
      table.cells.push_back(
          make_mc_cell(n, model == 0 ? "model1" : "model2", std::move(estimates), failures));
    }
  }
  return table;
}

ExperimentTable run_spatial_experiment(const ExperimentConfig& config,
                                       const Eigen::MatrixXd* sites) {
  config.validate();
  if (config.kind != ExperimentKind::Spatial)
    throw ParameterDomainError("run_spatial_experiment: wrong experiment kind");
  const SpatialSettings& sp = config.sp;
  sp.base.validate();
  if (sp.nu_x_grid.empty())
    throw ParameterDomainError("spatial experiment: nu_x_grid must be nonempty");

  const Eigen::MatrixXd locations =
      sites ? *sites
            : quasi_uniform_sites(sp.site_count, sp.domain_side,
                                  derive_seed(config.base_seed, {kSpatialTag, kSitesTag}));
  const int n_all = static_cast<int>(locations.rows());
  for (int n : config.n_grid)
    if (n > n_all)
      throw ParameterDomainError("spatial experiment: n_grid exceeds the number of sites");

  const double nu_sx =
      sp.nu_sx_mode == NuSxMode::EqualNu ? sp.base.nu : sp.base.nu - 0.5;
  if (nu_sx <= 0.0)
    throw ParameterDomainError("spatial experiment: nu_sx must be positive");

  const DistanceProfile profile(locations);
  CovMatrix sigma_eps = profile.build(sp.base);
  sigma_eps.factorize();

  // symmetric roots shared by the coupled fields X and S X
  std::map<double, Eigen::MatrixXd> roots;
  auto root_for = [&](double nu) -> const Eigen::MatrixXd& {
    auto it = roots.find(nu);
    if (it == roots.end()) {
      MaternParams p = sp.base;
      p.nu = nu;
      it = roots.emplace(nu, psd_sqrt(profile.build(p).entries())).first;
    }
    return it->second;
  };
  root_for(nu_sx);
  for (double nu_x : sp.nu_x_grid) {
    if (!(nu_x > 0.0))
      throw ParameterDomainError("spatial experiment: nu_x values must be positive");
    root_for(nu_x);
  }

  const std::size_t n_cells = config.n_grid.size() * sp.nu_x_grid.size();
  std::vector<std::vector<double>> slots(
      n_cells, std::vector<double>(static_cast<std::size_t>(config.replications),
                                   std::numeric_limits<double>::quiet_NaN()));

  parallel_for(config.replications, [&](int rep) {
    const std::uint64_t r = static_cast<std::uint64_t>(rep);
    Rng rng1(derive_seed(config.base_seed, {kSpatialTag, r, 0}));
    Rng rng2(derive_seed(config.base_seed, {kSpatialTag, r, 1}));
    const Eigen::VectorXd z1 = rng1.normal_vector(n_all);
    const Eigen::VectorXd z2 = rng2.normal_vector(n_all);
    const Eigen::VectorXd eps =
        sigma_eps.chol_lower().triangularView<Eigen::Lower>() * z1;
    const Eigen::VectorXd sx = root_for(nu_sx) * z2;

    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
      const int n = config.n_grid[ni];
      std::vector<int> idx;
      const CovMatrix* sub_cov = &sigma_eps;
      CovMatrix sub_storage;
      if (n < n_all) {
        Rng rng_sub(derive_seed(config.base_seed, {kSpatialTag, r, 2, ni}));
        idx = sorted_sample(rng_sub, n_all, n);
        Eigen::MatrixXd sub(n, n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) sub(a, b) = sigma_eps.entries()(idx[a], idx[b]);
        sub_storage = CovMatrix(std::move(sub));
        sub_storage.factorize();
        sub_cov = &sub_storage;
      }

      for (std::size_t ci = 0; ci < sp.nu_x_grid.size(); ++ci) {
        const double nu_x = sp.nu_x_grid[ci];
        const Eigen::VectorXd x = nu_x == nu_sx ? sx : Eigen::VectorXd(root_for(nu_x) * z2);
        const Eigen::VectorXd y = sp.beta * sx + eps;
        const Eigen::VectorXd xs = idx.empty() ? x : entries_of(x, idx);
        const Eigen::VectorXd ys = idx.empty() ? y : entries_of(y, idx);
        const Eigen::VectorXd w = sub_cov->forward_solve(xs);
        const Eigen::VectorXd u = sub_cov->forward_solve(ys);
        const double den = w.squaredNorm();
        if (!(den > 0.0)) throw DegenerateDesignError("spatial experiment: zero design mass");
        slots[ni * sp.nu_x_grid.size() + ci][static_cast<std::size_t>(rep)] = w.dot(u) / den;
      }
    }
  });

  ExperimentTable table;
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni)
    for (std::size_t ci = 0; ci < sp.nu_x_grid.size(); ++ci) {
      std::vector<double> estimates;
      int failures = 0;
      for (double b : slots[ni * sp.nu_x_grid.size() + ci]) {
        if (std::isnan(b))
          ++failures;
        else
          estimates.push_back(b);
      }
      table.cells.push_back(make_mc_cell(config.n_grid[ni],
                                         "nu_x=" + format_key_number(sp.nu_x_grid[ci]),
                                         std::move(estimates), failures));
    }
  return table;
}

namespace {

struct DirectionSpec {
  std::string key;
  const Eigen::MatrixXd* response;   // n_all x R, standardized
  const Eigen::MatrixXd* covariate;  // n_all x R, standardized or smoothed
};

// One fitted cell of the application study: ML fit on the subsample, then
// kriging of the fixed prediction split from the remaining sites.
ExperimentCell application_cell(const Eigen::MatrixXd& locations, const DirectionSpec& dir,
                                const std::vector<int>& sub_idx,
                                const std::vector<int>& obs_idx,
                                const std::vector<int>& pred_idx,
                                const ApplicationSettings& app, int n) {
  ExperimentCell cell;
  cell.n = n;
  cell.key = dir.key;
  const int r_count = static_cast<int>(dir.response->cols());
  const Eigen::Index kk = app.intercept ? 2 : 1;
  const Eigen::Index slope = app.intercept ? 1 : 0;

  auto design_rows = [&](const std::vector<int>& idx, int rep) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(idx.size()), kk);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (app.intercept) x(static_cast<Eigen::Index>(i), 0) = 1.0;
      x(static_cast<Eigen::Index>(i), slope) = (*dir.covariate)(idx[i], rep);
    }
    return x;
  };
  auto response_rows = [&](const std::vector<int>& idx, int rep) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      y[static_cast<Eigen::Index>(i)] = (*dir.response)(idx[i], rep);
    return y;
  };

  try {
    RegressionDataset fit_data;
    fit_data.locations = rows_of(locations, sub_idx);
    for (int rep = 0; rep < r_count; ++rep) {
      fit_data.covariates.push_back(design_rows(sub_idx, rep));
      fit_data.responses.push_back(response_rows(sub_idx, rep));
    }
    FitConfig fc;
    fc.free_nugget = app.fit_nugget;
    EstimationResult fitted;
    try {
      fitted = fit_ml(fit_data, fc);
    } catch (const ConvergenceError& e) {
      fitted = e.best;
      ++cell.failures;
    }
    cell.mean_beta = fitted.beta_hat[slope];
    cell.band_lo = fitted.ci95[static_cast<std::size_t>(slope)].first;
    cell.band_hi = fitted.ci95[static_cast<std::size_t>(slope)].second;
    cell.estimates = {cell.mean_beta};

    RegressionDataset obs_data;
    obs_data.locations = rows_of(locations, obs_idx);
    std::vector<Eigen::MatrixXd> pred_designs;
    Eigen::MatrixXd actual(static_cast<Eigen::Index>(pred_idx.size()), r_count);
    for (int rep = 0; rep < r_count; ++rep) {
      obs_data.covariates.push_back(design_rows(obs_idx, rep));
      obs_data.responses.push_back(response_rows(obs_idx, rep));
      pred_designs.push_back(design_rows(pred_idx, rep));
      actual.col(rep) = response_rows(pred_idx, rep);
    }
    const Eigen::MatrixXd predicted =
        krig_predict(fitted, obs_data, rows_of(locations, pred_idx), pred_designs);
    cell.rmse = rmse(predicted, actual);
  } catch (const Error&) {
    if (cell.estimates.empty()) {
      cell.mean_beta = std::numeric_limits<double>::quiet_NaN();
      cell.band_lo = cell.mean_beta;
      cell.band_hi = cell.mean_beta;
    }
    ++cell.failures;
  }
  return cell;
}

}  // namespace

ApplicationTables run_application_pipeline(const RegressionDataset& data,
                                           const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::Application)
    throw ParameterDomainError("run_application_pipeline: wrong experiment kind");
  data.validate();
  if (data.k() != 1)
    throw ConfigError("application: the dataset must carry exactly one covariate column");
  const ApplicationSettings& app = config.app;
  const int n_all = static_cast<int>(data.n());
  const int r_count = data.replicates();
  if (app.pred_set_size < 1 || app.pred_set_size >= n_all)
    throw ConfigError("application: prediction split needs 1 <= size < number of sites");
  for (int n : config.n_grid)
    if (n > n_all) throw ConfigError("application: n_grid exceeds the number of sites");

  // per-year standardized copies of both variables
  Eigen::MatrixXd a_values(n_all, r_count);
  Eigen::MatrixXd b_values(n_all, r_count);
  for (int rep = 0; rep < r_count; ++rep) {
    a_values.col(rep) = data.responses[static_cast<std::size_t>(rep)];
    b_values.col(rep) = data.covariate(rep).col(0);
  }
  a_values = standardize_per_replicate(a_values);
  b_values = standardize_per_replicate(b_values);

  Rng split_rng(derive_seed(config.base_seed, {kAppTag, 0}));
  const std::vector<int> pred_idx = sorted_sample(split_rng, n_all, app.pred_set_size);
  std::vector<int> obs_idx;
  obs_idx.reserve(static_cast<std::size_t>(n_all - app.pred_set_size));
  {
    std::vector<bool> is_pred(static_cast<std::size_t>(n_all), false);
    for (int i : pred_idx) is_pred[static_cast<std::size_t>(i)] = true;
    for (int i = 0; i < n_all; ++i)
      if (!is_pred[static_cast<std::size_t>(i)]) obs_idx.push_back(i);
  }

  // covariance of each variable alone (theta^fixed), fitted once on the
  // full site set, defines the smoothing operators
  const DistanceProfile profile(data.locations);
  auto smoothed_field = [&](const Eigen::MatrixXd& values, double q) {
    RegressionDataset marginal;
    marginal.locations = data.locations;
    marginal.covariates = {Eigen::MatrixXd::Ones(n_all, 1)};
    for (int rep = 0; rep < r_count; ++rep) marginal.responses.push_back(values.col(rep));
    FitConfig fc;
    fc.free_nugget = app.fit_nugget;
    MaternParams theta;
    try {
      theta = fit_ml(marginal, fc).cov_params;
    } catch (const ConvergenceError& e) {
      theta = e.best.cov_params;
    }
    theta.nugget_var =
        std::max(theta.nugget_var, app.smoother_nugget_floor * theta.sigma * theta.sigma);
    const CovMatrix power = matrix_power(profile.build(theta), q);
    Eigen::MatrixXd out(n_all, r_count);
    for (int rep = 0; rep < r_count; ++rep)
      out.col(rep) = apply_power_smooth(power.entries(), values.col(rep), true);
    return out;
  };
  const Eigen::MatrixXd sa_values = smoothed_field(a_values, app.q_a);
  const Eigen::MatrixXd sb_values = smoothed_field(b_values, app.q_b);

  const std::string key_ab = app.name_a + "_on_" + app.name_b;
  const std::string key_ba = app.name_b + "_on_" + app.name_a;

  struct Task {
    int ni;
    DirectionSpec dir;
    bool smoothed;
  };
  std::vector<Task> tasks;
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    tasks.push_back({static_cast<int>(ni), {key_ab, &a_values, &b_values}, false});
    tasks.push_back({static_cast<int>(ni), {key_ba, &b_values, &a_values}, false});
    tasks.push_back({static_cast<int>(ni), {key_ab, &a_values, &sb_values}, true});
    tasks.push_back({static_cast<int>(ni), {key_ba, &b_values, &sa_values}, true});
  }

  std::vector<std::vector<int>> sub_indices(config.n_grid.size());
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const int n = config.n_grid[ni];
    if (n == n_all) {
      sub_indices[ni].resize(static_cast<std::size_t>(n_all));
      for (int i = 0; i < n_all; ++i) sub_indices[ni][static_cast<std::size_t>(i)] = i;
    } else {
      Rng rng(derive_seed(config.base_seed, {kAppTag, 1, ni}));
      sub_indices[ni] = sorted_sample(rng, n_all, n);
    }
  }

  std::vector<ExperimentCell> results(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), [&](int t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    results[static_cast<std::size_t>(t)] =
        application_cell(data.locations, task.dir, sub_indices[static_cast<std::size_t>(task.ni)],
                         obs_idx, pred_idx, app, config.n_grid[static_cast<std::size_t>(task.ni)]);
  });

  ApplicationTables tables;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (tasks[t].smoothed)
      tables.smoothed.cells.push_back(std::move(results[t]));
    else
      tables.unsmoothed.cells.push_back(std::move(results[t]));
  }
  return tables;
}

Eigen::MatrixXd quasi_uniform_sites(int count, double side, std::uint64_t seed) {
  if (count < 1) throw ParameterDomainError("quasi_uniform_sites: count must be >= 1");
  if (!(side > 0.0)) throw ParameterDomainError("quasi_uniform_sites: side must be positive");
  const int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  const double cell = side / static_cast<double>(m);
  Rng rng(seed);
  std::vector<int> dropped = rng.sample_without_replacement(m * m, m * m - count);
  std::vector<bool> keep(static_cast<std::size_t>(m * m), true);
  for (int d : dropped) keep[static_cast<std::size_t>(d)] = false;
  Eigen::MatrixXd sites(count, 2);
  int row = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double jx = (rng.uniform() - 0.5) * 0.9;
      const double jy = (rng.uniform() - 0.5) * 0.9;
      if (!keep[static_cast<std::size_t>(i * m + j)]) continue;
      sites(row, 0) = (static_cast<double>(j) + 0.5 + jx) * cell;
      sites(row, 1) = (static_cast<double>(i) + 0.5 + jy) * cell;
      ++row;
    }
  return sites;
}

RegressionDataset synthetic_application_data(const StandInSettings& settings,
                                             std::uint64_t seed) {
  settings.base.validate();
  if (!(settings.nu_b > 0.0 && settings.nu_sb > 0.0))
    throw ParameterDomainError("stand-in data: smoothness parameters must be positive");
  if (!(settings.noise_sigma > 0.0))
    throw ParameterDomainError("stand-in data: noise sigma must be positive");
  if (settings.replicates < 1)
    throw ParameterDomainError("stand-in data: need at least one replicate");

  const Eigen::MatrixXd sites = quasi_uniform_sites(settings.site_count, settings.domain_side,
                                                    derive_seed(seed, {kStandInTag, 0}));
  const DistanceProfile profile(sites);
  MaternParams pb = settings.base;
  pb.nu = settings.nu_b;
  MaternParams psb = settings.base;
  psb.nu = settings.nu_sb;
  MaternParams pnoise = settings.base;
  pnoise.nu = settings.nu_sb;
  pnoise.sigma = settings.noise_sigma;
  const Eigen::MatrixXd root_b = psd_sqrt(profile.build(pb).entries());
  const Eigen::MatrixXd root_sb = psd_sqrt(profile.build(psb).entries());
  const Eigen::MatrixXd root_noise = psd_sqrt(profile.build(pnoise).entries());

  RegressionDataset data;
  data.locations = sites;
  for (int rep = 0; rep < settings.replicates; ++rep) {
    const std::uint64_t r = static_cast<std::uint64_t>(rep);
    Rng rng1(derive_seed(seed, {kStandInTag, r, 1}));
    Rng rng2(derive_seed(seed, {kStandInTag, r, 2}));
    const Eigen::VectorXd z1 = rng1.normal_vector(settings.site_count);
    const Eigen::VectorXd z2 = rng2.normal_vector(settings.site_count);
    data.covariates.push_back(Eigen::MatrixXd(root_b * z2));
    data.responses.push_back(settings.beta * (root_sb * z2) + root_noise * z1);
  }
  return data;
}

}  // namespace smoothreg
