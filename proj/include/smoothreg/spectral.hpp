#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace smoothreg {

// Coefficient sequence in the operator eigenbasis, indexed from 1.
using CoefficientRule = std::function<double(std::int64_t)>;

// Diagonal spectral model for the bivariate regression
//
//   Y_j = lambda_s(j)^gamma * x(j) * beta + m(j) + lambda(j)^(-alpha/2) * xi_j,
//
// where xi_j are iid standard normals.  lambda are the eigenvalues of the
// base operator (positive, nondecreasing), lambda_s those of the operator
// defining the smoothing, alpha the spectral decay exponent of the error
// covariance, and gamma the smoothing exponent applied to the covariate.
struct SpectralModel {
  CoefficientRule lambda;
  CoefficientRule lambda_s;
  CoefficientRule x_coeff;
  CoefficientRule m_coeff;  // optional baseline mean; empty means zero
  double alpha = 1.0;
  double gamma = 0.0;
  double beta_true = 1.0;

  // Power-law model: lambda(j) = lambda_s(j) = j^eta, x = the canonical
  // coefficients of smoothness p, m = 0.
  static SpectralModel power_law(double eta, double p, double alpha, double gamma, double beta);
};

// Checks positivity and monotonicity of lambda/lambda_s over j <= max_j and
// that x is not identically zero there.
void validate_spectral_model(const SpectralModel& model, std::int64_t max_j = 1000);

enum class RegimeTag {
  ConvergesToTrueBeta,
  ConvergesToZero,
  DivergesSigned,
  RandomFiniteLimit,
  Unspecified,
};

const char* to_string(RegimeTag tag);

enum class ObservationMode { PointObservations, EigenbasisObservations };

struct LimitRegime {
  RegimeTag tag = RegimeTag::Unspecified;
  // Filled only when the tag alone pins the limit down (0 for
  // ConvergesToZero); the true beta or the random-limit mean need the full
  // model, see expected_limit().
  std::optional<double> expected_limit;
};

// Squared Sobolev-type norm sum_{j<=n_terms} lambda(j)^s x(j)^2 of the
// covariate coefficients.
double sobolev_norm_sq(const SpectralModel& model, double s, std::int64_t n_terms);

// Classifies the n -> infinity behaviour of the least-squares slope when
// the covariate has smoothness p, the error covariance decay is alpha, and
// the covariate was smoothed with exponent gamma.  Total over all valid
// (p, alpha, gamma) in eigenbasis mode; point mode returns Unspecified
// where no sharp statement is available.
LimitRegime classify_limit(double p, double alpha, double gamma, ObservationMode mode);

// Mean of the n -> infinity limit in the regimes where it exists
// (ConvergesToTrueBeta, ConvergesToZero, RandomFiniteLimit), evaluated by
// truncation at n_terms coefficients.
double expected_limit(const SpectralModel& model, const LimitRegime& regime,
                      std::int64_t n_terms);

// Generalized least squares slope from the first n eigenbasis observations
// with the model's own error covariance as the weight:
//
//   beta_hat_n = sum_j lambda^alpha Y_j x_j / sum_j lambda^alpha x_j^2.
//
// xi draws are seeded; the same seed gives a common path across n, so
// estimates at increasing n share their prefix draws.
double eigenbasis_beta_hat(const SpectralModel& model, std::int64_t n, std::uint64_t seed);

// beta_hat at several sample sizes from one xi stream.  ns must be
// strictly increasing.
std::vector<double> eigenbasis_beta_hat_path(const SpectralModel& model,
                                             const std::vector<std::int64_t>& ns,
                                             std::uint64_t seed);

// Deterministic bias and variance pieces of beta_hat_n:
//   a_n = sum lambda^alpha lambda_s^gamma x^2 / sum lambda^alpha x^2
//   b_n = 1 / sum lambda^alpha x^2        (the variance of beta_hat_n)
// so that E beta_hat_n = beta * a_n + (m term) and Var beta_hat_n = b_n.
struct AnBn {
  double a_n = 0.0;
  double b_n = 0.0;
};

AnBn an_bn_terms(const SpectralModel& model, std::int64_t n);

// Mean of the random finite limit
//   E beta_inf = beta * (S x, x)_C / ||x||_C^2 + (m, x)_C / ||x||_C^2
// by truncation at n_terms.  Throws RegimeError when the truncated sums
// show no sign of saturating (the limit then does not exist for this
// model).
double beta_infinity_expectation(const SpectralModel& model, std::int64_t n_terms);

// Canonical covariate of smoothness p for eigenvalue growth lambda(j) =
// j^eta: x(j) = j^(-(eta p + 1 + eps)/2) with eps = 0.01, which lies in
// the Sobolev space of order p and in no space of order p + eps/eta.
CoefficientRule canonical_coefficients(double p, double eta);

}  // namespace smoothreg
