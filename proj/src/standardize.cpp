#include "smoothreg/standardize.hpp"

#include <cmath>
#include <string>

#include "smoothreg/errors.hpp"

namespace smoothreg {

Eigen::MatrixXd standardize_per_replicate(const Eigen::MatrixXd& values) {
  const Eigen::Index n = values.rows();
  if (n < 2)
    throw ParameterDomainError("standardize_per_replicate: need at least two rows");
  Eigen::MatrixXd out(n, values.cols());
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    const double mean = values.col(c).mean();
    const double var =
        (values.col(c).array() - mean).square().sum() / static_cast<double>(n - 1);
    if (var <= 0.0)
      throw DegenerateColumnError("standardize_per_replicate: column " + std::to_string(c) +
                                  " has zero variance");
    out.col(c) = (values.col(c).array() - mean) / std::sqrt(var);
  }
  return out;
}

}  // namespace smoothreg
