#include "smoothreg/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

namespace smoothreg {

namespace {

constexpr double kZ975 = 1.959963984540054;

// Cholesky of the K x K normal matrix with an explicit conditioning check;
// small pivots mean a numerically rank-deficient design.
Eigen::LLT<Eigen::MatrixXd> factor_normal_matrix(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw RankDeficiencyError("gls_estimate: normal matrix is not positive definite");
  // Exactly collinear columns leave a trailing pivot near sqrt(eps)*scale
  // rather than zero, so the cutoff must sit well above that floor.
  const Eigen::VectorXd d = Eigen::MatrixXd(llt.matrixL()).diagonal();
  if (d.minCoeff() <= 1e-7 * d.maxCoeff())
    throw RankDeficiencyError("gls_estimate: design is numerically rank deficient");
  return llt;
}

GlsResult solve_gls(const Eigen::MatrixXd& normal, const Eigen::VectorXd& rhs) {
  const auto llt = factor_normal_matrix(normal);
  GlsResult out;
  out.beta_hat = llt.solve(rhs);
  const Eigen::MatrixXd cov =
      llt.solve(Eigen::MatrixXd::Identity(normal.rows(), normal.cols()));
  out.se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

}  // namespace

const Eigen::MatrixXd& RegressionDataset::covariate(int replicate) const {
  if (covariates.size() == 1) return covariates.front();
  return covariates.at(static_cast<std::size_t>(replicate));
}

void RegressionDataset::validate() const {
  if (locations.rows() == 0) throw ParameterDomainError("dataset: no locations");
  if (responses.empty()) throw ParameterDomainError("dataset: no replicates");
  if (covariates.empty()) throw ParameterDomainError("dataset: no covariates");
  if (covariates.size() != 1 && covariates.size() != responses.size())
    throw ParameterDomainError(
        "dataset: covariates must be shared (one matrix) or given per replicate");
  const Eigen::Index nn = n();
  const Eigen::Index kk = covariates.front().cols();
  if (kk < 1) throw ParameterDomainError("dataset: design needs at least one column");
  if (nn <= kk)
    throw ParameterDomainError("dataset: need more observations than regression coefficients");
  for (const auto& c : covariates)
    if (c.rows() != nn || c.cols() != kk)
      throw ParameterDomainError("dataset: covariate matrix shape mismatch");
  for (const auto& y : responses)
    if (y.size() != nn) throw ParameterDomainError("dataset: response length mismatch");
}

GlsResult gls_estimate(const Eigen::MatrixXd& x, const CovMatrix& sigma,
                       const Eigen::VectorXd& y) {
  if (x.rows() != sigma.n() || y.size() != sigma.n())
    throw ParameterDomainError("gls_estimate: dimension mismatch");
  const Eigen::MatrixXd w = sigma.forward_solve(x);
  const Eigen::VectorXd u = sigma.forward_solve(y);
  return solve_gls(w.transpose() * w, w.transpose() * u);
}

GlsResult gls_estimate(const RegressionDataset& data, const CovMatrix& sigma) {
  data.validate();
  if (sigma.n() != data.n()) throw ParameterDomainError("gls_estimate: dimension mismatch");
  const Eigen::Index kk = data.k();
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(kk, kk);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(kk);
  if (data.covariates.size() == 1) {
    const Eigen::MatrixXd w = sigma.forward_solve(data.covariates.front());
    Eigen::VectorXd usum = Eigen::VectorXd::Zero(data.n());
    for (const auto& y : data.responses) usum += sigma.forward_solve(y);
    normal = static_cast<double>(data.replicates()) * (w.transpose() * w);
    rhs = w.transpose() * usum;
  } else {
    for (int r = 0; r < data.replicates(); ++r) {
      const Eigen::MatrixXd w = sigma.forward_solve(data.covariate(r));
      const Eigen::VectorXd u = sigma.forward_solve(data.responses[static_cast<std::size_t>(r)]);
      normal += w.transpose() * w;
      rhs += w.transpose() * u;
    }
  }
  return solve_gls(normal, rhs);
}

double neg_loglik(const RegressionDataset& data, const Eigen::VectorXd& beta,
                  const CovMatrix& sigma) {
  data.validate();
  if (beta.size() != data.k()) throw ParameterDomainError("neg_loglik: beta length mismatch");
  if (sigma.n() != data.n()) throw ParameterDomainError("neg_loglik: dimension mismatch");
  const double nd = static_cast<double>(data.n());
  const double logdet = sigma.logdet();
  double total = 0.0;
  for (int r = 0; r < data.replicates(); ++r) {
    const Eigen::VectorXd resid =
        data.responses[static_cast<std::size_t>(r)] - data.covariate(r) * beta;
    const double quad = sigma.forward_solve(resid).squaredNorm();
    total += 0.5 * (logdet + quad + nd * std::log(2.0 * std::numbers::pi));
  }
  return total;
}

double neg_loglik(const RegressionDataset& data, const Eigen::VectorXd& beta,
                  const MaternParams& params) {
  CovMatrix sigma = build_cov_matrix(data.locations, params);
  sigma.factorize();
  return neg_loglik(data, beta, sigma);
}

namespace {

struct ActiveParams {
  bool kappa, sigma, nu, nugget;
  int count() const { return int(kappa) + int(sigma) + int(nu) + int(nugget); }
};

// Objective state shared by all Nelder-Mead evaluations of one fit.
struct MlObjective {
  const RegressionDataset& data;
  const FitConfig& config;
  const DistanceProfile& profile;
  ActiveParams active;
  MaternParams base;

  int evals = 0;
  double best_nll = std::numeric_limits<double>::infinity();
  MaternParams best_params{};
  GlsResult best_gls{};

  MaternParams unpack(const Eigen::VectorXd& theta, double* penalty) const {
    MaternParams p = base;
    int i = 0;
    auto bounded = [&](double logv, double lo, double hi) {
      if (logv < lo) {
        *penalty += 1e4 * (lo - logv) * (lo - logv);
        return lo;
      }
      if (logv > hi) {
        *penalty += 1e4 * (logv - hi) * (logv - hi);
        return hi;
      }
      return logv;
    };
    if (active.kappa) p.kappa = std::exp(bounded(theta[i++], -25.0, 25.0));
    if (active.sigma) p.sigma = std::exp(bounded(theta[i++], -25.0, 25.0));
    if (active.nu)
      p.nu = std::exp(bounded(theta[i++], std::log(config.nu_min), std::log(config.nu_max)));
    if (active.nugget) p.nugget_var = std::exp(2.0 * bounded(theta[i++], -25.0, 25.0));
    return p;
  }

  double operator()(const Eigen::VectorXd& theta) {
    double penalty = 0.0;
    const MaternParams p = unpack(theta, &penalty);
    ++evals;
    double nll;
    GlsResult gls;
    try {
      CovMatrix sigma = profile.build(p);
      sigma.factorize();
      gls = gls_estimate(data, sigma);
      nll = neg_loglik(data, gls.beta_hat, sigma);
    } catch (const NotPositiveDefiniteError&) {
      return 1e100;
    } catch (const RankDeficiencyError&) {
      return 1e100;
    }
    if (!std::isfinite(nll)) return 1e100;
    if (nll < best_nll) {
      best_nll = nll;
      best_params = p;
      best_gls = gls;
    }
    return nll + penalty;
  }
};

EstimationResult result_from(const MlObjective& obj, const RegressionDataset& data,
                             bool converged) {
  EstimationResult out;
  out.beta_hat = obj.best_gls.beta_hat;
  out.se = obj.best_gls.se;
  out.ci95.reserve(static_cast<std::size_t>(out.beta_hat.size()));
  for (Eigen::Index i = 0; i < out.beta_hat.size(); ++i)
    out.ci95.emplace_back(out.beta_hat[i] - kZ975 * out.se[i],
                          out.beta_hat[i] + kZ975 * out.se[i]);
  out.cov_params = obj.best_params;
  out.loglik = -obj.best_nll;
  out.n_used = data.n();
  out.loglik_evals = obj.evals;
  out.converged = converged;
  return out;
}

}  // namespace

EstimationResult fit_ml(const RegressionDataset& data, const FitConfig& config) {
  data.validate();
  config.init.validate();
  if (!(config.nu_min > 0.0 && config.nu_max > config.nu_min))
    throw ParameterDomainError("fit_ml: need 0 < nu_min < nu_max");

  const DistanceProfile profile(data.locations);

  MaternParams start = config.init;
  start.nu = std::clamp(start.nu, config.nu_min, config.nu_max);
  if (config.auto_init) {
    const double med = median(profile.unique_distances());
    if (med > 0.0 && config.free_kappa) start.kappa = 2.0 / med;
    // pooled OLS residual spread for the variance starts
    double var = 0.0;
    try {
      Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(data.k(), data.k());
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(data.k());
      for (int r = 0; r < data.replicates(); ++r) {
        const auto& x = data.covariate(r);
        normal += x.transpose() * x;
        rhs += x.transpose() * data.responses[static_cast<std::size_t>(r)];
      }
      const Eigen::VectorXd b = factor_normal_matrix(normal).solve(rhs);
      double ss = 0.0;
      for (int r = 0; r < data.replicates(); ++r)
        ss += (data.responses[static_cast<std::size_t>(r)] - data.covariate(r) * b).squaredNorm();
      var = ss / (static_cast<double>(data.replicates()) * static_cast<double>(data.n()));
    } catch (const RankDeficiencyError&) {
      for (const auto& y : data.responses) var += y.squaredNorm();
      var /= static_cast<double>(data.replicates()) * static_cast<double>(data.n());
    }
    if (var > 0.0) {
      if (config.free_sigma) start.sigma = std::sqrt(config.free_nugget ? 0.9 * var : var);
      if (config.free_nugget) start.nugget_var = 0.1 * var;
    }
  }
  if (config.free_nugget && start.nugget_var <= 0.0)
    start.nugget_var = 1e-4 * start.sigma * start.sigma;

  MlObjective obj{data, config, profile,
                  ActiveParams{config.free_kappa, config.free_sigma, config.free_nu,
                               config.free_nugget},
                  start};

  const int dim = obj.active.count();
  if (dim == 0) {
    Eigen::VectorXd empty(0);
    if (obj(empty) >= 1e100)
      throw NotPositiveDefiniteError("fit_ml: likelihood undefined at the fixed parameters");
    return result_from(obj, data, true);
  }

  Eigen::VectorXd theta0(dim);
  {
    int i = 0;
    if (obj.active.kappa) theta0[i++] = std::log(start.kappa);
    if (obj.active.sigma) theta0[i++] = std::log(start.sigma);
    if (obj.active.nu) theta0[i++] = std::log(start.nu);
    if (obj.active.nugget) theta0[i++] = 0.5 * std::log(start.nugget_var);
  }

  // Nelder-Mead on the log-parameter vector.
  std::vector<Eigen::VectorXd> vertex(static_cast<std::size_t>(dim) + 1, theta0);
  std::vector<double> fval(static_cast<std::size_t>(dim) + 1);
  for (int i = 0; i < dim; ++i) vertex[static_cast<std::size_t>(i) + 1][i] += 0.35;
  for (std::size_t i = 0; i < vertex.size(); ++i) fval[i] = obj(vertex[i]);

  const auto order = [&] {
    std::vector<std::size_t> idx(vertex.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return fval[a] < fval[b];
    });
    std::vector<Eigen::VectorXd> v2(vertex.size());
    std::vector<double> f2(vertex.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      v2[i] = vertex[idx[i]];
      f2[i] = fval[idx[i]];
    }
    vertex.swap(v2);
    fval.swap(f2);
  };

  const std::size_t last = vertex.size() - 1;
  while (true) {
    order();
    const double spread = fval[last] - fval[0];
    if (spread <= config.ftol_rel * (std::abs(fval[0]) + 1.0)) break;
    double width = 0.0;
    for (std::size_t i = 1; i < vertex.size(); ++i)
      width = std::max(width, (vertex[i] - vertex[0]).cwiseAbs().maxCoeff());
    if (width < 1e-8) break;
    if (obj.evals >= config.max_evals)
      throw ConvergenceError("fit_ml: no convergence after " + std::to_string(obj.evals) +
                                 " likelihood evaluations",
                             result_from(obj, data, false));

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < last; ++i) centroid += vertex[i];
    centroid /= static_cast<double>(last);

    const Eigen::VectorXd reflected = centroid + (centroid - vertex[last]);
    const double fr = obj(reflected);
    if (fr < fval[0]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - vertex[last]);
      const double fe = obj(expanded);
      if (fe < fr) {
        vertex[last] = expanded;
        fval[last] = fe;
      } else {
        vertex[last] = reflected;
        fval[last] = fr;
      }
      continue;
    }
    if (fr < fval[last - 1]) {
      vertex[last] = reflected;
      fval[last] = fr;
      continue;
    }
    const bool outside = fr < fval[last];
    const Eigen::VectorXd contracted =
        outside ? centroid + 0.5 * (reflected - centroid) : centroid + 0.5 * (vertex[last] - centroid);
    const double fc = obj(contracted);
    if (fc < (outside ? fr : fval[last])) {
      vertex[last] = contracted;
      fval[last] = fc;
      continue;
    }
    for (std::size_t i = 1; i < vertex.size(); ++i) {
      vertex[i] = vertex[0] + 0.5 * (vertex[i] - vertex[0]);
      fval[i] = obj(vertex[i]);
    }
  }

  if (!std::isfinite(obj.best_nll))
    throw NotPositiveDefiniteError("fit_ml: likelihood undefined everywhere it was evaluated");
  return result_from(obj, data, true);
}

Eigen::MatrixXd krig_predict(const EstimationResult& fitted, const RegressionDataset& observed,
                             const Eigen::MatrixXd& pred_locations,
                             const std::vector<Eigen::MatrixXd>& pred_covariates) {
  observed.validate();
  fitted.cov_params.validate();
  if (fitted.beta_hat.size() != observed.k())
    throw ParameterDomainError("krig_predict: coefficient length does not match the design");
  if (pred_locations.rows() == 0 || pred_locations.cols() != observed.locations.cols())
    throw ParameterDomainError("krig_predict: prediction locations dimension mismatch");
  const std::size_t rr = static_cast<std::size_t>(observed.replicates());
  if (pred_covariates.size() != 1 && pred_covariates.size() != rr)
    throw ParameterDomainError("krig_predict: prediction covariates must be shared or per replicate");
  for (const auto& c : pred_covariates)
    if (c.rows() != pred_locations.rows() || c.cols() != observed.k())
      throw ParameterDomainError("krig_predict: prediction covariate shape mismatch");

  CovMatrix soo = build_cov_matrix(observed.locations, fitted.cov_params);
  soo.factorize();

  const Eigen::Index no = observed.n();
  const Eigen::Index np = pred_locations.rows();
  Eigen::MatrixXd cross(no, np);
  for (Eigen::Index j = 0; j < np; ++j)
    for (Eigen::Index i = 0; i < no; ++i)
      cross(i, j) = matern_cov((observed.locations.row(i) - pred_locations.row(j)).norm(),
                               fitted.cov_params);
  const Eigen::MatrixXd weights = soo.solve(cross);  // no x np

  Eigen::MatrixXd out(np, observed.replicates());
  for (int r = 0; r < observed.replicates(); ++r) {
    const Eigen::MatrixXd& xp =
        pred_covariates.size() == 1 ? pred_covariates.front()
                                    : pred_covariates[static_cast<std::size_t>(r)];
    const Eigen::VectorXd resid =
        observed.responses[static_cast<std::size_t>(r)] - observed.covariate(r) * fitted.beta_hat;
    out.col(r) = xp * fitted.beta_hat + weights.transpose() * resid;
  }
  return out;
}

double rmse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual) {
  if (predicted.rows() != actual.rows() || predicted.cols() != actual.cols())
    throw ParameterDomainError("rmse: shape mismatch");
  if (predicted.size() == 0) throw ParameterDomainError("rmse: empty input");
  return std::sqrt((predicted - actual).squaredNorm() / static_cast<double>(predicted.size()));
}

}  // namespace smoothreg
