#pragma once

#include <Eigen/Core>

namespace smoothreg {

// Standardizes each column (replicate) of an n x R matrix to sample mean 0
// and sample variance 1 (divisor n - 1).  Throws DegenerateColumnError on a
// constant column and ParameterDomainError when n < 2.
Eigen::MatrixXd standardize_per_replicate(const Eigen::MatrixXd& values);

}  // namespace smoothreg
