#include "smoothreg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "smoothreg/errors.hpp"

namespace smoothreg {

namespace {

double tricube(double u) {
  if (u >= 1.0) return 0.0;
  const double c = 1.0 - u * u * u;
  return c * c * c;
}

double bisquare(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  const double c = 1.0 - a * a;
  return c * c;
}

}  // namespace

void LowessConfig::validate() const {
  if (!(span > 0.0 && span <= 1.0))
    throw ParameterDomainError("lowess: span must lie in (0, 1]");
  if (iterations < 0) throw ParameterDomainError("lowess: iterations must be >= 0");
}

Eigen::VectorXd lowess(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                       const LowessConfig& config) {
  config.validate();
  const Eigen::Index n = xs.size();
  if (n != ys.size()) throw ParameterDomainError("lowess: xs and ys must have equal length");
  if (n < 2) throw ParameterDomainError("lowess: need at least two points");
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1]))
      throw InputOrderError("lowess: abscissae must be strictly increasing");

  const Eigen::Index r =
      std::min<Eigen::Index>(n, std::max<Eigen::Index>(3, static_cast<Eigen::Index>(
                                    std::ceil(config.span * static_cast<double>(n)))));

  Eigen::VectorXd fitted(n);
  Eigen::VectorXd robust = Eigen::VectorXd::Ones(n);

  for (int pass = 0; pass <= config.iterations; ++pass) {
    for (Eigen::Index i = 0; i < n; ++i) {
      // nearest-r window: slide [lo, lo + r) to minimize the max distance
      Eigen::Index lo = std::clamp<Eigen::Index>(i - r / 2, 0, n - r);
      while (lo > 0 && xs[i] - xs[lo - 1] < xs[lo + r - 1] - xs[i]) --lo;
      while (lo + r < n && xs[lo + r] - xs[i] < xs[i] - xs[lo]) ++lo;
      const double dmax = std::max(xs[i] - xs[lo], xs[lo + r - 1] - xs[i]);

      double sw = 0.0, swx = 0.0, swxx = 0.0, swy = 0.0, swxy = 0.0;
      for (Eigen::Index j = lo; j < lo + r; ++j) {
        const double dx = xs[j] - xs[i];
        const double w =
            robust[j] * (dmax > 0.0 ? tricube(std::abs(dx) / dmax) : 1.0);
        sw += w;
        swx += w * dx;
        swxx += w * dx * dx;
        swy += w * ys[j];
        swxy += w * dx * ys[j];
      }
      const double denom = sw * swxx - swx * swx;
      if (sw <= 0.0) {
        // all windowed points downweighted to zero; keep the previous fit
        fitted[i] = pass == 0 ? ys[i] : fitted[i];
      } else if (denom <= 1e-12 * sw * swxx) {
        fitted[i] = swy / sw;
      } else {
        // local line evaluated at dx = 0
        fitted[i] = (swxx * swy - swx * swxy) / denom;
      }
    }
    if (pass == config.iterations) break;

    // bisquare robustness weights from the residuals
    Eigen::VectorXd absres = (ys - fitted).cwiseAbs();
    std::vector<double> sorted(absres.data(), absres.data() + n);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2),
                     sorted.end());
    const double s = sorted[static_cast<std::size_t>(n / 2)];
    if (s <= 0.0) break;  // interpolating fit, nothing left to downweight
    for (Eigen::Index i = 0; i < n; ++i) robust[i] = bisquare(absres[i] / (6.0 * s));
  }
  return fitted;
}

Eigen::VectorXd cov_power_smooth(const Eigen::VectorXd& values,
                                 const Eigen::MatrixXd& locations, const MaternParams& params,
                                 double q, bool rescale_to_unit_var) {
  if (values.size() != locations.rows())
    throw ParameterDomainError("cov_power_smooth: values and locations length mismatch");
  const CovMatrix power = matrix_power(build_cov_matrix(locations, params), q);
  return apply_power_smooth(power.entries(), values, rescale_to_unit_var);
}

Eigen::VectorXd apply_power_smooth(const Eigen::MatrixXd& power, const Eigen::VectorXd& values,
                                   bool rescale_to_unit_var) {
  if (power.rows() != power.cols() || power.rows() != values.size())
    throw ParameterDomainError("apply_power_smooth: shape mismatch");
  Eigen::VectorXd out = power * values;
  if (!rescale_to_unit_var) return out;
  const Eigen::Index n = out.size();
  if (n < 2)
    throw ParameterDomainError("apply_power_smooth: rescaling needs at least two values");
  const double mean = out.mean();
  const double var = (out.array() - mean).square().sum() / static_cast<double>(n - 1);
  if (var <= 0.0)
    throw DegenerateColumnError("apply_power_smooth: smoothed values are constant");
  return out / std::sqrt(var);
}

}  // namespace smoothreg
