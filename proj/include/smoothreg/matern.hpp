#pragma once

namespace smoothreg {

// Matern covariance parameters for
//
//   r(h) = sigma^2 * 2^(1-nu) / Gamma(nu) * (kappa h)^nu * K_nu(kappa h),
//
// with r(0) = sigma^2.  kappa is the inverse range, nu the smoothness,
// and nugget_var an iid measurement-error variance that enters only on
// the diagonal of assembled covariance matrices, never the function
// matern_cov itself.
struct MaternParams {
  double kappa = 1.0;
  double sigma = 1.0;
  double nu = 1.0;
  double nugget_var = 0.0;

  // Throws ParameterDomainError unless kappa, sigma, nu are positive and
  // finite and nugget_var is nonnegative and finite.
  void validate() const;
};

// Matern covariance at distance h >= 0 (no nugget).  Evaluated in log
// space through the scaled Bessel routine so large nu and extreme kappa*h
// neither overflow nor lose the leading digits.
double matern_cov(double h, const MaternParams& params);

}  // namespace smoothreg
