#pragma once

#include <Eigen/Dense>
#include <optional>

#include "urboot/errors.hpp"

namespace urboot {

/// @brief Deterministic trend component removed before testing.
///
/// A polynomial of degree d contributes regressors z_t = (1, t, ..., t^d)
/// with t = 1..m; None means no regression is run at all. Constant and
/// Linear are aliases for degrees 0 and 1.
class TrendSpec {
 public:
  static constexpr int max_degree = 5;

  [[nodiscard]] static TrendSpec none() noexcept { return TrendSpec{}; }
  [[nodiscard]] static TrendSpec constant() { return polynomial(0); }
  [[nodiscard]] static TrendSpec linear() { return polynomial(1); }
  [[nodiscard]] static TrendSpec polynomial(int degree) {
    if (degree < 0 || degree > max_degree) {
      throw ConfigError("trend degree must lie in [0, 5]");
    }
    TrendSpec spec;
    spec.degree_ = degree;
    return spec;
  }

  [[nodiscard]] bool is_none() const noexcept { return !degree_.has_value(); }

  /// Polynomial degree; only valid when not None.
  [[nodiscard]] int degree() const {
    if (!degree_) throw ConfigError("degree() called on TrendSpec::none()");
    return *degree_;
  }

  /// Number of regression columns p (0 for None, d+1 otherwise).
  [[nodiscard]] Eigen::Index regressor_count() const noexcept {
    return degree_ ? *degree_ + 1 : 0;
  }

  friend bool operator==(const TrendSpec&, const TrendSpec&) = default;

 private:
  std::optional<int> degree_;
};

/// @brief Raw input series together with its deterministic trend choice.
///
/// Construction validates that every value is finite and that the series is
/// long enough to detrend and difference (m >= p + 4).
struct ObservedSeries {
  ObservedSeries(Eigen::VectorXd values_in, TrendSpec trend_in);

  Eigen::VectorXd values;
  TrendSpec trend;
};

/// @brief Detrended series x = y - Z beta_hat and the fitted coefficients.
///
/// For TrendSpec::none() the residuals equal the input and beta is empty.
/// Residuals are orthogonal to the trend columns up to working precision.
struct DetrendedSeries {
  Eigen::VectorXd x;
  Eigen::VectorXd beta;
};

/// @brief Builds the m x p trend regressor matrix for indices t = 1..m.
///
/// Column j holds t^j in raw powers; orthogonalization happens inside the
/// least-squares solve, not in the basis.
[[nodiscard]] Eigen::MatrixXd build_trend_matrix(const TrendSpec& trend,
                                                 Eigen::Index m);

/// @brief Removes the deterministic component by least squares.
///
/// Solves min_beta |y - Z beta| via a column-pivoted QR of the
/// column-equilibrated regressor matrix, never via the normal equations.
/// Throws RankDeficient when the design is singular to working precision
/// (equilibrated condition number of Z'Z above 1e12).
[[nodiscard]] DetrendedSeries ols_detrend(const ObservedSeries& series);

}  // namespace urboot
