#include "smoothreg/spectral.hpp"

#include <cmath>
#include <string>

#include "smoothreg/errors.hpp"
#include "smoothreg/rng.hpp"

namespace smoothreg {

namespace {

constexpr double kCanonicalEps = 0.01;
// Relative growth of a truncated series over its last doubling below which
// we treat the series as saturated.
constexpr double kSaturationTol = 0.02;

void check_exponents(double p, double alpha, double gamma) {
  if (!(std::isfinite(p) && p > 0.0))
    throw ParameterDomainError("smoothness p must be positive and finite");
  if (!(std::isfinite(alpha) && alpha > 0.0))
    throw ParameterDomainError("decay exponent alpha must be positive and finite");
  if (!std::isfinite(gamma))
    throw ParameterDomainError("smoothing exponent gamma must be finite");
}

double eigenvalue_at(const SpectralModel& model, std::int64_t j) {
  const double v = model.lambda(j);
  if (!(std::isfinite(v) && v > 0.0))
    throw ParameterDomainError("lambda(" + std::to_string(j) + ") must be positive and finite");
  return v;
}

}  // namespace

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::ConvergesToTrueBeta: return "ConvergesToTrueBeta";
    case RegimeTag::ConvergesToZero: return "ConvergesToZero";
    case RegimeTag::DivergesSigned: return "DivergesSigned";
    case RegimeTag::RandomFiniteLimit: return "RandomFiniteLimit";
    case RegimeTag::Unspecified: return "Unspecified";
  }
  return "Unspecified";
}

SpectralModel SpectralModel::power_law(double eta, double p, double alpha, double gamma,
                                       double beta) {
  if (!(std::isfinite(eta) && eta > 0.0))
    throw ParameterDomainError("power_law: eta must be positive and finite");
  check_exponents(p, alpha, gamma);
  SpectralModel m;
  m.lambda = [eta](std::int64_t j) { return std::pow(static_cast<double>(j), eta); };
  m.lambda_s = m.lambda;
  m.x_coeff = canonical_coefficients(p, eta);
  m.alpha = alpha;
  m.gamma = gamma;
  m.beta_true = beta;
  return m;
}

void validate_spectral_model(const SpectralModel& model, std::int64_t max_j) {
  if (!model.lambda || !model.lambda_s || !model.x_coeff)
    throw ParameterDomainError("spectral model: lambda, lambda_s and x_coeff must be set");
  if (!(std::isfinite(model.alpha) && model.alpha > 0.0))
    throw ParameterDomainError("spectral model: alpha must be positive and finite");
  if (!std::isfinite(model.gamma))
    throw ParameterDomainError("spectral model: gamma must be finite");
  if (max_j < 1) throw ParameterDomainError("spectral model: max_j must be >= 1");
  double prev = 0.0;
  double prev_s = 0.0;
  bool any_x = false;
  for (std::int64_t j = 1; j <= max_j; ++j) {
    const double l = model.lambda(j);
    const double ls = model.lambda_s(j);
    const double x = model.x_coeff(j);
    if (!(std::isfinite(l) && l > 0.0) || !(std::isfinite(ls) && ls > 0.0))
      throw ParameterDomainError("spectral model: eigenvalues must be positive and finite (j=" +
                                 std::to_string(j) + ")");
    if (l < prev || ls < prev_s)
      throw ParameterDomainError("spectral model: eigenvalues must be nondecreasing (j=" +
                                 std::to_string(j) + ")");
    if (!std::isfinite(x))
      throw ParameterDomainError("spectral model: x_coeff must be finite (j=" +
                                 std::to_string(j) + ")");
    if (x != 0.0) any_x = true;
    prev = l;
    prev_s = ls;
  }
  if (!any_x)
    throw DegenerateDesignError("spectral model: covariate coefficients are identically zero");
}

double sobolev_norm_sq(const SpectralModel& model, double s, std::int64_t n_terms) {
  if (n_terms < 1) throw ParameterDomainError("sobolev_norm_sq: n_terms must be >= 1");
  if (!std::isfinite(s)) throw ParameterDomainError("sobolev_norm_sq: order must be finite");
  double sum = 0.0;
  for (std::int64_t j = 1; j <= n_terms; ++j) {
    const double x = model.x_coeff(j);
    sum += std::pow(eigenvalue_at(model, j), s) * x * x;
  }
  return sum;
}

LimitRegime classify_limit(double p, double alpha, double gamma, ObservationMode mode) {
  check_exponents(p, alpha, gamma);
  LimitRegime out;
  if (mode == ObservationMode::EigenbasisObservations) {
    if (p < alpha) {
      if (gamma == 0.0) {
        out.tag = RegimeTag::ConvergesToTrueBeta;
      } else if (gamma < 0.0) {
        out.tag = RegimeTag::ConvergesToZero;
        out.expected_limit = 0.0;
      } else {
        out.tag = RegimeTag::DivergesSigned;
      }
    } else {
      if (gamma > p - alpha) {
        out.tag = RegimeTag::DivergesSigned;
      } else {
        out.tag = RegimeTag::RandomFiniteLimit;
      }
    }
    return out;
  }
  // Point observations: only the sharp statements, Unspecified elsewhere.
  if (p < alpha && gamma == 0.0) {
    out.tag = RegimeTag::ConvergesToTrueBeta;
  } else if (p < alpha && 2.0 * gamma <= p - alpha) {
    out.tag = RegimeTag::ConvergesToZero;
    out.expected_limit = 0.0;
  } else if (p >= 2.0 * alpha && gamma < 0.0) {
    out.tag = RegimeTag::RandomFiniteLimit;
  } else {
    out.tag = RegimeTag::Unspecified;
  }
  return out;
}

double expected_limit(const SpectralModel& model, const LimitRegime& regime,
                      std::int64_t n_terms) {
  switch (regime.tag) {
    case RegimeTag::ConvergesToTrueBeta: return model.beta_true;
    case RegimeTag::ConvergesToZero: return 0.0;
    case RegimeTag::RandomFiniteLimit: return beta_infinity_expectation(model, n_terms);
    case RegimeTag::DivergesSigned:
      throw RegimeError("expected_limit: the estimator diverges, no limit exists");
    case RegimeTag::Unspecified:
      throw RegimeError("expected_limit: no sharp limit statement in this regime");
  }
  throw RegimeError("expected_limit: unknown regime");
}

double eigenbasis_beta_hat(const SpectralModel& model, std::int64_t n, std::uint64_t seed) {
  const std::vector<std::int64_t> ns{n};
  return eigenbasis_beta_hat_path(model, ns, seed).front();
}

std::vector<double> eigenbasis_beta_hat_path(const SpectralModel& model,
                                             const std::vector<std::int64_t>& ns,
                                             std::uint64_t seed) {
  if (ns.empty()) throw ParameterDomainError("eigenbasis_beta_hat: no sample sizes given");
  for (std::size_t k = 0; k < ns.size(); ++k)
    if (ns[k] < 1 || (k > 0 && ns[k] <= ns[k - 1]))
      throw ParameterDomainError("eigenbasis_beta_hat: sample sizes must be strictly increasing");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(ns.size());
  double num = 0.0;
  double den = 0.0;
  std::size_t next = 0;
  for (std::int64_t j = 1; j <= ns.back(); ++j) {
    const double l = eigenvalue_at(model, j);
    const double x = model.x_coeff(j);
    const double mean =
        std::pow(model.lambda_s(j), model.gamma) * x * model.beta_true +
        (model.m_coeff ? model.m_coeff(j) : 0.0);
    const double w = std::pow(l, model.alpha);
    // w * x * (mean + lambda^{-alpha/2} xi) = w x mean + sqrt(w) x xi
    num += w * x * mean + std::sqrt(w) * x * rng.normal();
    den += w * x * x;
    if (j == ns[next]) {
      if (!(den > 0.0) || !std::isfinite(den))
        throw DegenerateDesignError("eigenbasis_beta_hat: zero spectral design mass");
      out.push_back(num / den);
      ++next;
    }
  }
  return out;
}

AnBn an_bn_terms(const SpectralModel& model, std::int64_t n) {
  if (n < 1) throw ParameterDomainError("an_bn_terms: n must be >= 1");
  double num = 0.0;
  double den = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) {
    const double x = model.x_coeff(j);
    const double w = std::pow(eigenvalue_at(model, j), model.alpha);
    num += w * std::pow(model.lambda_s(j), model.gamma) * x * x;
    den += w * x * x;
  }
  if (!(den > 0.0) || !std::isfinite(den))
    throw DegenerateDesignError("an_bn_terms: zero spectral design mass");
  return AnBn{num / den, 1.0 / den};
}

double beta_infinity_expectation(const SpectralModel& model, std::int64_t n_terms) {
  if (n_terms < 2) throw ParameterDomainError("beta_infinity_expectation: n_terms must be >= 2");
  const std::int64_t half = n_terms / 2;
  double num = 0.0, den = 0.0, mterm = 0.0, mabs = 0.0;
  double num_half = 0.0, den_half = 0.0, mabs_half = 0.0;
  for (std::int64_t j = 1; j <= n_terms; ++j) {
    const double x = model.x_coeff(j);
    const double w = std::pow(eigenvalue_at(model, j), model.alpha);
    const double m = model.m_coeff ? model.m_coeff(j) : 0.0;
    num += w * std::pow(model.lambda_s(j), model.gamma) * x * x;
    den += w * x * x;
    mterm += w * m * x;
    mabs += std::abs(w * m * x);
    if (j == half) {
      num_half = num;
      den_half = den;
      mabs_half = mabs;
    }
  }
  if (!(den > 0.0) || !std::isfinite(den))
    throw DegenerateDesignError("beta_infinity_expectation: zero spectral design mass");
  const auto saturated = [](double part, double full) {
    return std::isfinite(full) && full - part <= kSaturationTol * std::max(full, 1e-300);
  };
  if (!saturated(den_half, den))
    throw RegimeError(
        "beta_infinity_expectation: ||x||_C^2 keeps growing at n_terms, the limit does not "
        "exist in this regime (p < alpha)");
  if (!saturated(num_half, num))
    throw RegimeError(
        "beta_infinity_expectation: (Sx, x)_C keeps growing at n_terms, the estimator "
        "diverges in this regime");
  if (mabs > 0.0 && !saturated(mabs_half, mabs))
    throw RegimeError("beta_infinity_expectation: (m, x)_C has not saturated at n_terms");
  return model.beta_true * num / den + mterm / den;
}

CoefficientRule canonical_coefficients(double p, double eta) {
  if (!(std::isfinite(p) && p > 0.0))
    throw ParameterDomainError("canonical_coefficients: p must be positive and finite");
  if (!(std::isfinite(eta) && eta > 0.0))
    throw ParameterDomainError("canonical_coefficients: eta must be positive and finite");
  const double expo = -(eta * p + 1.0 + kCanonicalEps) / 2.0;
  return [expo](std::int64_t j) { return std::pow(static_cast<double>(j), expo); };
}

}  // namespace smoothreg
