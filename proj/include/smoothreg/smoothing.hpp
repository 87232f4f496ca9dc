#pragma once

#include <Eigen/Core>

#include "smoothreg/cov_matrix.hpp"
#include "smoothreg/matern.hpp"

namespace smoothreg {

struct LowessConfig {
  double span = 0.1;   // fraction of points in each local window
  int iterations = 3;  // robustness reweighting passes after the first fit

  void validate() const;  // span in (0, 1], iterations >= 0
};

// Locally weighted scatterplot smoothing (local linear fits with tricube
// weights, bisquare robustness iterations).  xs must be strictly
// increasing; returns the fitted value at every xs[i].  Windows hold
// ceil(span * n) points, at least 3, chosen nearest to the fit point.
Eigen::VectorXd lowess(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                       const LowessConfig& config);

// Covariance-power smoothing: values -> Sigma(params)^q * values, where
// Sigma is the Matern covariance over the locations (nugget on the
// diagonal as usual).  With rescale_to_unit_var the output is divided by
// its sample standard deviation, so only the shape of the smoother
// matters, not its scale.
Eigen::VectorXd cov_power_smooth(const Eigen::VectorXd& values,
                                 const Eigen::MatrixXd& locations, const MaternParams& params,
                                 double q, bool rescale_to_unit_var = true);

// Same smoother applied through a precomputed power matrix, for repeated
// application to many replicates.
Eigen::VectorXd apply_power_smooth(const Eigen::MatrixXd& power, const Eigen::VectorXd& values,
                                   bool rescale_to_unit_var = true);

}  // namespace smoothreg
