#include "smoothreg/cov_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "smoothreg/errors.hpp"

namespace smoothreg {

CovMatrix::CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw ParameterDomainError("CovMatrix: matrix must be square and nonempty");
  const double scale = entries_.cwiseAbs().maxCoeff();
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300))
    throw ParameterDomainError("CovMatrix: matrix is not symmetric");
  if ((entries_.diagonal().array() <= 0.0).any())
    throw ParameterDomainError("CovMatrix: diagonal entries must be positive");
}

void CovMatrix::factorize(double jitter0) {
  if (factorized_) return;
  const double base = jitter0 > 0.0 ? jitter0 : 1e-10 * entries_.diagonal().maxCoeff();
  double jitter = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::MatrixXd m = entries_;
    if (jitter > 0.0) m.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = jitter;
      factorized_ = true;
      return;
    }
    jitter = attempt == 0 ? base : jitter * 10.0;
  }
  throw NotPositiveDefiniteError(
      "CovMatrix::factorize: Cholesky failed even with diagonal jitter up to " +
      std::to_string(jitter / 10.0));
}

void CovMatrix::require_factor() const {
  if (!factorized_) throw Error("CovMatrix: factorize() has not been called");
}

const Eigen::MatrixXd& CovMatrix::chol_lower() const {
  require_factor();
  return chol_;
}

double CovMatrix::logdet() const {
  require_factor();
  return 2.0 * chol_.diagonal().array().log().sum();
}

Eigen::MatrixXd CovMatrix::solve(const Eigen::MatrixXd& rhs) const {
  require_factor();
  Eigen::MatrixXd y = chol_.triangularView<Eigen::Lower>().solve(rhs);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd CovMatrix::forward_solve(const Eigen::MatrixXd& rhs) const {
  require_factor();
  return chol_.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& locations) {
  const Eigen::Index n = locations.rows();
  if (n == 0) throw ParameterDomainError("pairwise_distances: no locations");
  Eigen::MatrixXd d(n, n);
  d.diagonal().setZero();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double dist = (locations.row(i) - locations.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  return d;
}

DistanceProfile::DistanceProfile(const Eigen::MatrixXd& locations) : n_(locations.rows()) {
  const Eigen::MatrixXd d = pairwise_distances(locations);
  const std::size_t pairs = static_cast<std::size_t>(n_) * (n_ - 1) / 2;
  unique_.reserve(pairs);
  for (Eigen::Index j = 0; j < n_; ++j)
    for (Eigen::Index i = j + 1; i < n_; ++i) unique_.push_back(d(i, j));
  std::sort(unique_.begin(), unique_.end());
  if (!unique_.empty() && unique_.front() < kDuplicateLocationTol)
    throw DuplicateLocationError("locations are not pairwise distinct (min distance " +
                                 std::to_string(unique_.front()) + ")");
  unique_.erase(std::unique(unique_.begin(), unique_.end()), unique_.end());
  index_.resize(pairs);
  std::size_t k = 0;
  for (Eigen::Index j = 0; j < n_; ++j)
    for (Eigen::Index i = j + 1; i < n_; ++i) {
      const auto it = std::lower_bound(unique_.begin(), unique_.end(), d(i, j));
      index_[k++] = static_cast<std::int32_t>(it - unique_.begin());
    }
}

CovMatrix DistanceProfile::build(const MaternParams& params) const {
  params.validate();
  std::vector<double> values(unique_.size());
  for (std::size_t u = 0; u < unique_.size(); ++u) values[u] = matern_cov(unique_[u], params);
  const double s2 = params.sigma * params.sigma;
  Eigen::MatrixXd m(n_, n_);
  std::size_t k = 0;
  for (Eigen::Index j = 0; j < n_; ++j) {
    m(j, j) = s2 + params.nugget_var;
    for (Eigen::Index i = j + 1; i < n_; ++i) {
      const double v = values[static_cast<std::size_t>(index_[k++])];
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return CovMatrix(std::move(m));
}

CovMatrix build_cov_matrix(const Eigen::MatrixXd& locations, const MaternParams& params) {
  return DistanceProfile(locations).build(params);
}

CovMatrix matrix_power(const CovMatrix& m, double q) {
  if (!std::isfinite(q)) throw ParameterDomainError("matrix_power: exponent must be finite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.entries());
  if (eig.info() != Eigen::Success)
    throw NotPositiveDefiniteError("matrix_power: eigendecomposition failed");
  const Eigen::VectorXd& d = eig.eigenvalues();
  if (d.minCoeff() <= 0.0)
    throw NotPositiveDefiniteError("matrix_power: matrix has a nonpositive eigenvalue (" +
                                   std::to_string(d.minCoeff()) + ")");
  const Eigen::MatrixXd scaled = eig.eigenvectors() * d.array().pow(q).matrix().asDiagonal();
  Eigen::MatrixXd out = scaled * eig.eigenvectors().transpose();
  // the reconstruction is symmetric only up to roundoff
  out = 0.5 * (out + out.transpose()).eval();
  return CovMatrix(std::move(out));
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success)
    throw NotPositiveDefiniteError("psd_sqrt: eigendecomposition failed");
  const Eigen::VectorXd d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace smoothreg
