#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "smoothreg/matern.hpp"

namespace smoothreg {

// Locations closer than this (in distance units) count as coincident.
inline constexpr double kDuplicateLocationTol = 1e-9;

// Symmetric dense covariance matrix with a cached Cholesky factor.
// Invariants checked on construction: square, symmetric to 1e-12 relative
// to the largest entry, strictly positive diagonal.
class CovMatrix {
 public:
  CovMatrix() = default;
  explicit CovMatrix(Eigen::MatrixXd entries);

  Eigen::Index n() const { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  // Lower-triangular Cholesky factor of entries + jitter * I.  Tries
  // jitter = 0 first, then jitter0 * 10^k for k = 0, 1, 2; throws
  // NotPositiveDefiniteError when all attempts fail.  jitter0 <= 0 picks
  // the default 1e-10 * max diagonal entry.
  void factorize(double jitter0 = 0.0);

  bool factorized() const { return factorized_; }
  const Eigen::MatrixXd& chol_lower() const;

  // Jitter actually added to the diagonal by factorize (0 when the clean
  // factorization succeeded).
  double jitter() const { return jitter_; }

  // log det(entries + jitter * I)
  double logdet() const;

  // (entries + jitter * I)^{-1} * rhs via two triangular solves.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

  // L^{-1} * rhs (forward substitution only), so that squared norms of the
  // result are Mahalanobis forms.
  Eigen::MatrixXd forward_solve(const Eigen::MatrixXd& rhs) const;

 private:
  void require_factor() const;

  Eigen::MatrixXd entries_;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
  bool factorized_ = false;
};

// Dense pairwise distance matrix of n locations given as rows (n x d).
Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& locations);

// Sorted unique pairwise distances plus, for every matrix entry, the index
// of its distance in that list.  Building covariance matrices through a
// profile makes repeated evaluations over the same geometry cheap (one
// Bessel call per distinct distance, which on gridded data is O(n) rather
// than O(n^2)) and guarantees bit-identical entries across call sites.
class DistanceProfile {
 public:
  explicit DistanceProfile(const Eigen::MatrixXd& locations);

  Eigen::Index n() const { return n_; }
  const std::vector<double>& unique_distances() const { return unique_; }

  // Covariance matrix with params.nugget_var added on the diagonal.
  CovMatrix build(const MaternParams& params) const;

 private:
  Eigen::Index n_ = 0;
  std::vector<double> unique_;        // sorted distinct off-diagonal distances
  std::vector<std::int32_t> index_;   // column-major upper triangle i < j
};

// Covariance matrix of the Matern model at the given locations; the nugget
// variance goes on the diagonal only.  Throws DuplicateLocationError when
// two rows of locations are closer than kDuplicateLocationTol.  The result
// is not factorized yet.
CovMatrix build_cov_matrix(const Eigen::MatrixXd& locations, const MaternParams& params);

// Real power of a symmetric positive definite matrix via its spectral
// decomposition.  Throws NotPositiveDefiniteError if any eigenvalue is
// <= 0.  Satisfies matrix_power(m, 1) == m and matrix_power(m, 0) == I up
// to roundoff.
CovMatrix matrix_power(const CovMatrix& m, double q);

// Symmetric positive semidefinite square root with negative eigenvalues
// (roundoff from near-singular smooth kernels) clamped to zero.  Used for
// simulation, where a rank-deficient root is acceptable; matrix_power is
// the strict variant.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

}  // namespace smoothreg
