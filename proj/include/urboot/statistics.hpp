#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "urboot/errors.hpp"

namespace urboot {

/// Which test statistic a sample or a table row refers to.
enum class Statistic {
  Coefficient,  ///< T = n_eff (rho_hat - 1)
  Studentized,  ///< t = sqrt(sum x_{t-1}^2) (rho_hat - 1) / s
};

[[nodiscard]] const char* to_string(Statistic stat) noexcept;

/// @brief First-order autoregression summary of a (detrended) series.
///
/// For x = (x_1, ..., x_m) the regression pairs run over t = 2..m, so
/// n_eff = m - 1 transitions enter every sum:
///   rho_hat = sum x_t x_{t-1} / sum x_{t-1}^2
///   T       = n_eff (rho_hat - 1)
///   s_sq    = (n_eff - 2)^{-1} sum (x_t - rho_hat x_{t-1})^2
struct UnitRootStats {
  double rho_hat = 0.0;
  double T = 0.0;
  double s_sq = 0.0;
  double sum_lag_sq = 0.0;  ///< sum of x_{t-1}^2 over the regression pairs
  Eigen::Index n_eff = 0;

  /// Studentized statistic; throws ZeroResidualVariance when s_sq == 0.
  [[nodiscard]] double t() const {
    if (!(s_sq > 0.0)) {
      throw ZeroResidualVariance("studentized statistic undefined: s_sq == 0");
    }
    return std::sqrt(sum_lag_sq) * (rho_hat - 1.0) / std::sqrt(s_sq);
  }

  [[nodiscard]] double value(Statistic stat) const {
    return stat == Statistic::Coefficient ? T : t();
  }
};

/// @brief Computes the autoregression statistics of a detrended series.
///
/// Throws DegenerateSeries when sum x_{t-1}^2 == 0 and InsufficientData for
/// fewer than 4 observations (s_sq needs n_eff >= 3).
[[nodiscard]] UnitRootStats unit_root_statistics(
    const Eigen::Ref<const Eigen::VectorXd>& x);

/// Residuals u_t = x_t - rho x_{t-1} for t = 2..m, re-based to length m - 1.
[[nodiscard]] Eigen::VectorXd ar1_residuals(
    const Eigen::Ref<const Eigen::VectorXd>& x, double rho);

/// @brief Augmented Dickey-Fuller regression fit without intercept.
///
/// Rows are Delta x_t = pi0 x_{t-1} + sum_{i=1..k} pi_i Delta x_{t-i} + u_t
/// over t = fit_start..m (1-based), with sigma_sq = SSR / rows.
struct AdfFit {
  int k = 0;
  double pi0 = 0.0;
  Eigen::VectorXd pi;         ///< lagged-difference coefficients, length k
  Eigen::VectorXd residuals;  ///< one entry per fitted row
  double sigma_sq = 0.0;
  Eigen::Index fit_start = 0;   ///< first fitted time index t (1-based)
  Eigen::Index rows = 0;        ///< fitted row count, m - fit_start + 1
  double sum_lag_sq = 0.0;      ///< sum of x_{t-1}^2 over the fitted rows
};

/// @brief Fits the ADF regression with k lagged differences.
///
/// fit_start must be at least k + 2 so every lagged difference exists, and
/// at least k + 3 rows must remain; violations throw InsufficientData.
/// A design singular to working precision throws RankDeficient.
[[nodiscard]] AdfFit adf_fit(const Eigen::Ref<const Eigen::VectorXd>& x, int k,
                             Eigen::Index fit_start);

/// @brief Result of the modified-AIC lag order scan.
///
/// scores[k] holds the criterion for k = 0..k_max, with +infinity marking
/// lag orders excluded for a degenerate fit; fit is the refit at k_hat over
/// the maximal sample t = k_hat + 2..m.
struct MaicSelection {
  int k_hat = 0;
  int k_max = 0;
  Eigen::VectorXd scores;
  AdfFit fit;
};

/// @brief Selects the ADF lag order by the modified AIC.
///
/// With n = m - 1 and k_max = floor(12 (n/100)^{1/4}), every candidate
/// k = 0..k_max is fitted over the common sample t = k_max + 2..m, so all
/// criteria average the same n - k_max rows:
///   MAIC(k) = ln sigma_k^2 + 2 (tau(k) + k) / (n - k_max)
///   tau(k)  = pi0_k^2 sum x_{t-1}^2 / sigma_k^2
/// The argmin breaks ties toward the smaller k. Candidates whose common
/// fit has zero residual variance or a singular design are excluded; if
/// every candidate is excluded, DegenerateSigma is thrown.
[[nodiscard]] MaicSelection maic_select(
    const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace urboot
