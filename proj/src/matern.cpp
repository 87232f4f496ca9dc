#include "smoothreg/matern.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "smoothreg/errors.hpp"

namespace smoothreg {

namespace {

// GSL aborts the process on domain errors by default; switch that off once
// and handle status codes ourselves.
void disable_gsl_abort() {
  static std::once_flag flag;
  std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

}  // namespace

void MaternParams::validate() const {
  const bool ok = std::isfinite(kappa) && kappa > 0.0 && std::isfinite(sigma) && sigma > 0.0 &&
                  std::isfinite(nu) && nu > 0.0 && std::isfinite(nugget_var) && nugget_var >= 0.0;
  if (!ok)
    throw ParameterDomainError("matern parameters out of domain: kappa=" + std::to_string(kappa) +
                               " sigma=" + std::to_string(sigma) + " nu=" + std::to_string(nu) +
                               " nugget_var=" + std::to_string(nugget_var));
}

double matern_cov(double h, const MaternParams& params) {
  params.validate();
  if (!std::isfinite(h) || h < 0.0)
    throw ParameterDomainError("matern_cov: distance must be finite and nonnegative");
  const double s2 = params.sigma * params.sigma;
  if (h == 0.0) return s2;

  disable_gsl_abort();
  const double t = params.kappa * h;

  // log r(h) = log sigma^2 + (1-nu) log 2 - lgamma(nu) + nu log t + log K_nu(t)
  gsl_sf_result lnk;
  const int status = gsl_sf_bessel_lnKnu_e(params.nu, t, &lnk);
  if (status == GSL_EUNDRFLW) return 0.0;
  if (status != GSL_SUCCESS)
    throw Error("matern_cov: bessel lnKnu failed (nu=" + std::to_string(params.nu) +
                ", t=" + std::to_string(t) + "): " + gsl_strerror(status));

  const double log_r = (1.0 - params.nu) * std::numbers::ln2 - std::lgamma(params.nu) +
                       params.nu * std::log(t) + lnk.val;
  if (log_r < -745.0) return 0.0;  // below the smallest positive double
  return s2 * std::exp(log_r);
}

}  // namespace smoothreg
