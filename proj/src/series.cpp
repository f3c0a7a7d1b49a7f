#include "urboot/series.hpp"

#include <string>
#include <utility>

#include "least_squares.hpp"

namespace urboot {

ObservedSeries::ObservedSeries(Eigen::VectorXd values_in, TrendSpec trend_in)
    : values(std::move(values_in)), trend(trend_in) {
  const Eigen::Index m = values.size();
  const Eigen::Index p = trend.regressor_count();
  if (m < p + 4) {
    throw InsufficientData("series has " + std::to_string(m) +
                           " observations, needs at least " +
                           std::to_string(p + 4) +
                           " for this trend");
  }
  if (!values.allFinite()) {
    throw DataError("series contains non-finite values");
  }
}

Eigen::MatrixXd build_trend_matrix(const TrendSpec& trend, Eigen::Index m) {
  if (m < 1) throw ConfigError("trend matrix needs at least one row");
  const Eigen::Index p = trend.regressor_count();
  Eigen::MatrixXd z(m, p);
  for (Eigen::Index t = 0; t < m; ++t) {
    double power = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      z(t, j) = power;
      power *= static_cast<double>(t + 1);
    }
  }
  return z;
}

DetrendedSeries ols_detrend(const ObservedSeries& series) {
  if (series.trend.is_none()) {
    return {series.values, Eigen::VectorXd()};
  }
  const Eigen::MatrixXd z =
      build_trend_matrix(series.trend, series.values.size());
  DetrendedSeries out;
  out.beta = detail::solve_least_squares(z, series.values);
  out.x = series.values - z * out.beta;
  return out;
}

}  // namespace urboot
