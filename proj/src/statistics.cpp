#include "urboot/statistics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "least_squares.hpp"

namespace urboot {

const char* to_string(Statistic stat) noexcept {
  return stat == Statistic::Coefficient ? "T" : "t";
}

UnitRootStats unit_root_statistics(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index m = x.size();
  if (m < 4) {
    throw InsufficientData(
        "unit root statistics need at least 4 observations, got " +
        std::to_string(m));
  }
  const Eigen::Index n = m - 1;
  const auto lag = x.head(n);
  const auto cur = x.tail(n);
  const double sum_lag_sq = lag.squaredNorm();
  if (!(sum_lag_sq > 0.0)) {
    throw DegenerateSeries("sum of squared lagged levels is zero");
  }
  UnitRootStats stats;
  stats.rho_hat = cur.dot(lag) / sum_lag_sq;
  stats.n_eff = n;
  stats.sum_lag_sq = sum_lag_sq;
  stats.T = static_cast<double>(n) * (stats.rho_hat - 1.0);
  stats.s_sq =
      (cur - stats.rho_hat * lag).squaredNorm() / static_cast<double>(n - 2);
  return stats;
}

Eigen::VectorXd ar1_residuals(const Eigen::Ref<const Eigen::VectorXd>& x,
                              double rho) {
  const Eigen::Index m = x.size();
  if (m < 2) throw InsufficientData("residuals need at least 2 observations");
  return x.tail(m - 1) - rho * x.head(m - 1);
}

AdfFit adf_fit(const Eigen::Ref<const Eigen::VectorXd>& x, int k,
               Eigen::Index fit_start) {
  if (k < 0) throw ConfigError("lag order must be nonnegative");
  const Eigen::Index m = x.size();
  if (fit_start < k + 2) {
    throw InsufficientData("fit_start " + std::to_string(fit_start) +
                           " is below k + 2 = " + std::to_string(k + 2) +
                           ", lagged differences would precede the sample");
  }
  const Eigen::Index rows = m - fit_start + 1;
  if (rows < k + 3) {
    throw InsufficientData("ADF fit with k = " + std::to_string(k) +
                           " needs at least " + std::to_string(k + 3) +
                           " rows, got " + std::to_string(rows));
  }
  const Eigen::Index p = k + 1;
  Eigen::MatrixXd design(rows, p);
  Eigen::VectorXd response(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = fit_start + r;  // 1-based time index, x_t = x[t-1]
    response[r] = x[t - 1] - x[t - 2];
    design(r, 0) = x[t - 2];
    for (int i = 1; i <= k; ++i) {
      design(r, i) = x[t - i - 1] - x[t - i - 2];
    }
  }
  const Eigen::VectorXd coef = detail::solve_least_squares(design, response);

  AdfFit fit;
  fit.k = k;
  fit.fit_start = fit_start;
  fit.rows = rows;
  fit.pi0 = coef[0];
  fit.pi = coef.tail(k);
  fit.residuals = response - design * coef;
  fit.sigma_sq = fit.residuals.squaredNorm() / static_cast<double>(rows);
  fit.sum_lag_sq = design.col(0).squaredNorm();
  return fit;
}

MaicSelection maic_select(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index m = x.size();
  const Eigen::Index n = m - 1;
  if (n < 3) throw InsufficientData("lag selection needs at least 4 observations");
  const int k_max = static_cast<int>(
      std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
  const Eigen::Index common_start = k_max + 2;
  const Eigen::Index rows = m - common_start + 1;  // = n - k_max
  if (rows < k_max + 3) {
    throw InsufficientData(
        "lag selection with k_max = " + std::to_string(k_max) + " needs " +
        std::to_string(2 * k_max + 4) + " observations, got " +
        std::to_string(m));
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  MaicSelection sel;
  sel.k_max = k_max;
  sel.scores = Eigen::VectorXd::Constant(k_max + 1, inf);
  int best_k = -1;
  for (int k = 0; k <= k_max; ++k) {
    AdfFit fit;
    try {
      fit = adf_fit(x, k, common_start);
    } catch (const RankDeficient&) {
      continue;  // excluded, same degeneracy as a zero variance
    }
    if (!(fit.sigma_sq > 0.0)) continue;  // excluded, ln undefined
    const double tau = fit.pi0 * fit.pi0 * fit.sum_lag_sq / fit.sigma_sq;
    const double score = std::log(fit.sigma_sq) +
                         2.0 * (tau + k) / static_cast<double>(rows);
    sel.scores[k] = score;
    if (best_k < 0 || score < sel.scores[best_k]) best_k = k;
  }
  if (best_k < 0) {
    throw DegenerateSigma(
        "every candidate lag order had zero residual variance or a singular "
        "design");
  }
  sel.k_hat = best_k;
  sel.fit = adf_fit(x, best_k, best_k + 2);  // maximal sample refit
  return sel;
}

}  // namespace urboot
