#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "smoothreg/cov_matrix.hpp"
#include "smoothreg/errors.hpp"
#include "smoothreg/matern.hpp"

namespace smoothreg {

// Observations of one or more replicate fields sharing locations, the
// regression coefficients and the covariance structure.  covariates holds
// either a single design matrix shared by all replicates or one matrix per
// replicate (needed when the regressor itself varies between replicates,
// e.g. yearly fields).
struct RegressionDataset {
  Eigen::MatrixXd locations;                // n x d
  std::vector<Eigen::MatrixXd> covariates;  // 1 or R entries, each n x K
  std::vector<Eigen::VectorXd> responses;   // R entries, each n

  Eigen::Index n() const { return locations.rows(); }
  Eigen::Index k() const { return covariates.empty() ? 0 : covariates.front().cols(); }
  int replicates() const { return static_cast<int>(responses.size()); }
  const Eigen::MatrixXd& covariate(int replicate) const;

  // Shape consistency, n > K >= 1, at least one replicate.
  void validate() const;
};

struct GlsResult {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd se;
};

// Generalized least squares with a fixed covariance: beta = (X' S^-1 X)^-1
// X' S^-1 y via triangular solves against the Cholesky factor (S^-1 is
// never formed).  se are the square roots of the diagonal of
// (X' S^-1 X)^-1.  sigma must already be factorized.
GlsResult gls_estimate(const Eigen::MatrixXd& x, const CovMatrix& sigma,
                       const Eigen::VectorXd& y);

// Pooled GLS over all replicates of a dataset (one beta, shared sigma).
GlsResult gls_estimate(const RegressionDataset& data, const CovMatrix& sigma);

// Exact Gaussian negative log likelihood, summed over replicates:
//   1/2 sum_r [ log det S + r' S^-1 r + n log 2 pi ].
double neg_loglik(const RegressionDataset& data, const Eigen::VectorXd& beta,
                  const MaternParams& params);

// Same, against a prebuilt (factorized) covariance.
double neg_loglik(const RegressionDataset& data, const Eigen::VectorXd& beta,
                  const CovMatrix& sigma);

struct FitConfig {
  // Starting point; fields with free_* false are held fixed at these
  // values.  With auto_init the free kappa / sigma / nugget starts are
  // derived from the data instead (median pairwise distance, pooled OLS
  // residual spread).
  MaternParams init{1.0, 1.0, 1.0, 0.0};
  bool auto_init = true;
  bool free_kappa = true;
  bool free_sigma = true;
  bool free_nu = true;
  bool free_nugget = false;
  double nu_min = 0.1;
  double nu_max = 10.0;
  int max_evals = 600;
  double ftol_rel = 1e-9;
};

struct EstimationResult {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd se;
  std::vector<std::pair<double, double>> ci95;
  MaternParams cov_params;
  double loglik = 0.0;
  Eigen::Index n_used = 0;
  int loglik_evals = 0;
  bool converged = false;
};

// Optimizer gave up; carries the best point seen so far.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, EstimationResult best_so_far)
      : Error(what), best(std::move(best_so_far)) {}
  EstimationResult best;
};

// Maximum likelihood fit of the Matern parameters with beta profiled out by
// GLS at every objective evaluation.  Free parameters are optimized on log
// scale with Nelder-Mead; nu is kept inside [nu_min, nu_max] by a smooth
// penalty.  With every free_* false this reduces to a single GLS pass at
// config.init (loglik_evals == 1).
EstimationResult fit_ml(const RegressionDataset& data, const FitConfig& config = {});

// Conditional mean at pred_locations given the fitted coefficients and
// covariance: X_p beta + S_po S_oo^-1 (y - X_o beta), one column per
// replicate.  The nugget enters S_oo only, so with nugget_var == 0 the
// prediction interpolates the observations.  pred_covariates follows the
// same shared-or-per-replicate convention as RegressionDataset.
Eigen::MatrixXd krig_predict(const EstimationResult& fitted, const RegressionDataset& observed,
                             const Eigen::MatrixXd& pred_locations,
                             const std::vector<Eigen::MatrixXd>& pred_covariates);

// Root mean squared difference over all entries.
double rmse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual);

}  // namespace smoothreg
