#pragma once

#include <Eigen/Dense>

#include "urboot/errors.hpp"

namespace urboot::detail {

// Relative QR pivot threshold on the column-equilibrated design; a ratio
// below this marks the Gram matrix as singular to working precision
// (condition number of Z'Z above 1e12).
inline constexpr double rank_threshold = 1e-6;

// Least squares min |y - Z beta| via a column-pivoted QR of the
// column-equilibrated design. Residuals are invariant under column
// rescaling, so equilibration changes nothing but the conditioning.
inline Eigen::VectorXd solve_least_squares(
    const Eigen::Ref<const Eigen::MatrixXd>& z,
    const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index p = z.cols();
  Eigen::MatrixXd scaled = z;
  Eigen::VectorXd scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    scale[j] = scaled.col(j).norm();
    if (!(scale[j] > 0.0)) {
      throw RankDeficient("regressor column " + std::to_string(j) +
                          " is identically zero");
    }
    scaled.col(j) /= scale[j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(rank_threshold);
  if (qr.rank() < p) {
    throw RankDeficient("regressor matrix singular to working precision");
  }
  const Eigen::VectorXd gamma = qr.solve(y);
  return gamma.cwiseQuotient(scale);
}

}  // namespace urboot::detail
