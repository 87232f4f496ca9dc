#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smoothreg/matern.hpp"
#include "smoothreg/regression.hpp"
#include "smoothreg/smoothing.hpp"

namespace smoothreg {

enum class ExperimentKind { Timeseries1, Timeseries2, Timeseries3, Spatial, Application };

// How the smoothness of the smoothed covariate relates to the error field:
// equal (the case one lands in when estimating smoothness from data) or
// half an order rougher (a fixed exponential-type misfit).
enum class NuSxMode { EqualNu, NuMinusHalf };

struct TimeseriesSettings {
  MaternParams covariate{1.0, 0.4, 1.0, 0.0};  // X
  MaternParams noise{1.0, 0.1, 1.0, 0.0};      // Z; Timeseries3 adds nugget_var
  double noise_nugget_sd = 0.01;               // sigma_e for Timeseries3
  LowessConfig smoother_s{0.1, 3};             // S, defines the true covariate
  LowessConfig smoother_shat{0.2, 3};          // S-hat, the analyst's smoother
  double domain_length = 10.0;
};

struct SpatialSettings {
  MaternParams base{0.4, 1.3, 2.0, 0.0};  // epsilon field; base.nu is the reference nu
  std::vector<double> nu_x_grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  NuSxMode nu_sx_mode = NuSxMode::EqualNu;
  double beta = 1.0;
  int site_count = 620;
  double domain_side = 20.0;
};

struct ApplicationSettings {
  std::string name_a = "T";  // the smoother variable; smoothed with power q_a
  std::string name_b = "P";  // the rougher variable; smoothed with power q_b
  double q_a = 0.5;
  double q_b = 3.0;
  int pred_set_size = 36;
  bool intercept = true;
  bool fit_nugget = true;
  // Floor on the nugget (relative to sigma^2) when building the smoothing
  // matrices, so that their fractional powers stay positive definite.
  double smoother_nugget_floor = 1e-8;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Timeseries1;
  std::vector<int> n_grid;
  int replications = 10;
  std::uint64_t base_seed = 0;
  TimeseriesSettings ts;
  SpatialSettings sp;
  ApplicationSettings app;

  void validate() const;  // replications >= 1, n_grid nonempty and increasing
};

// One (n, key) cell: mean estimate, Monte Carlo 95% band of the mean (or
// the fit's CI95 for application cells), optional kriging RMSE, count of
// failed replicates, and the successful per-replicate estimates.
struct ExperimentCell {
  int n = 0;
  std::string key;
  double mean_beta = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::optional<double> rmse;
  int failures = 0;
  std::vector<double> estimates;
};

struct ExperimentTable {
  std::vector<ExperimentCell> cells;

  const ExperimentCell* find(int n, const std::string& key) const;
  const ExperimentCell& cell(int n, const std::string& key) const;  // throws Error if absent
};

// Exact Gaussian field draw at the given locations: L z with L the Cholesky
// factor of the covariance built from params (nugget included) and z a
// seeded standard normal vector.
Eigen::VectorXd simulate_gp(const Eigen::MatrixXd& locations, const MaternParams& params,
                            std::uint64_t seed);

// Same draw against a covariance that is already built and factorized.
Eigen::VectorXd simulate_gp(const CovMatrix& cov, std::uint64_t seed);

// Time-series study: data Y = S X + Z on a regular grid over [0, L], where
// S X is the span-0.1 lowess smooth of a rough Matern draw X.  Model 1
// regresses Y on the rough X, Model 2 on the span-0.2 smooth of X.
// Timeseries1 estimates beta by GLS with the true noise covariance;
// Timeseries2/3 fit the covariance jointly by ML (3 without/with nugget in
// both generation and fit).  Keys: "model1", "model2".
ExperimentTable run_timeseries_experiment(const ExperimentConfig& config);

// Spatial regime study: on 620 sites, X = Sigma_X^{1/2} z2 and
// S X = Sigma_SX^{1/2} z2 share the latent vector, Y = beta S X + eps, and
// beta is estimated by GLS with the true covariance of eps at n subsampled
// sites.  One key per covariate smoothness: "nu_x=<value>".  Pass the
// site coordinates, or nullptr to generate a quasi-uniform set from the
// base seed.
ExperimentTable run_spatial_experiment(const ExperimentConfig& config,
                                       const Eigen::MatrixXd* sites = nullptr);

struct ApplicationTables {
  ExperimentTable unsmoothed;
  ExperimentTable smoothed;
};

// Application-style pipeline on a bivariate replicated dataset: data
// carries variable A as the responses and variable B as a single-column
// covariate per replicate.  Both variables are standardized per replicate;
// both regression directions ("A_on_B", "B_on_A", with the configured
// names) are fitted by ML at each subsampled n, and a fixed 36-site
// prediction split is kriged from the remaining sites.  The second table
// repeats everything with covariance-power smoothed covariates.
ApplicationTables run_application_pipeline(const RegressionDataset& data,
                                           const ExperimentConfig& config);

// Quasi-uniform site set: a jittered square grid with randomly chosen
// surplus cells dropped.
Eigen::MatrixXd quasi_uniform_sites(int count, double side, std::uint64_t seed);

// Synthetic two-variable dataset built in the spatial-study regime: per
// replicate, the rough variable B = F_{nu_b} z2 and the smooth
// variable A = beta * F_{nu_sb} z2 + noise, so regressing A on B shows the
// vanishing coefficient and B on A the diverging one.  Returns a dataset
// in the layout run_application_pipeline expects.
struct StandInSettings {
  MaternParams base{0.4, 1.3, 2.0, 0.0};  // kappa/sigma shared by all fields
  double nu_b = 0.5;       // roughness of B
  double nu_sb = 2.0;      // smoothness of S B (and of the noise)
  double beta = -0.7;
  double noise_sigma = 0.6;
  int site_count = 620;
  double domain_side = 20.0;
  int replicates = 24;
};

RegressionDataset synthetic_application_data(const StandInSettings& settings,
                                             std::uint64_t seed);

}  // namespace smoothreg
