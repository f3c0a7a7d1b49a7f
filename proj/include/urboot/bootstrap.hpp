#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "urboot/kernel.hpp"
#include "urboot/multipliers.hpp"
#include "urboot/series.hpp"
#include "urboot/statistics.hpp"

namespace urboot {

/// Bootstrap procedure.
enum class Method {
  DWB,   ///< dependent wild bootstrap, residuals cumulated as-is
  RWB,   ///< recolored wild bootstrap, iid multipliers (l = 1)
  RDWB,  ///< recolored dependent wild bootstrap
};

[[nodiscard]] const char* to_string(Method method) noexcept;

/// How the multiplier bandwidth l is chosen.
struct Bandwidth {
  enum class Mode {
    Deterministic,       ///< l = floor(6 (n/100)^{1/4}), n = series length
    Fixed,               ///< caller-supplied l
    MinimumVolatility,   ///< data-driven selection over a candidate grid
  };

  Mode mode = Mode::Deterministic;
  int value = 0;  ///< only meaningful for Fixed

  [[nodiscard]] static Bandwidth deterministic() noexcept { return {}; }
  [[nodiscard]] static Bandwidth fixed(int l) {
    if (l < 1) throw ConfigError("fixed bandwidth must be at least 1");
    return {Mode::Fixed, l};
  }
  [[nodiscard]] static Bandwidth minimum_volatility() noexcept {
    return {Mode::MinimumVolatility, 0};
  }

  friend bool operator==(const Bandwidth&, const Bandwidth&) = default;
};

/// Parameters of one bootstrap run.
struct BootstrapConfig {
  Method method = Method::RDWB;
  int B = 399;  ///< replication count
  Bandwidth bandwidth{};
  Kernel kernel = Kernel::Bartlett;
  std::uint64_t seed = 0;
};

/// @brief Output of one bootstrap run.
///
/// T_star and t_star hold the successful replications in replication order;
/// p-values count strictly smaller bootstrap statistics:
///   p = #{b : stat*_b < stat_observed} / #successful.
/// With zero failures (the normal case) the divisor is exactly B.
struct BootstrapResult {
  Method method = Method::RDWB;
  int l_used = 0;
  std::optional<int> k_hat;  ///< MAIC lag order; empty for DWB
  int B = 0;
  UnitRootStats observed;
  Eigen::VectorXd T_star;
  Eigen::VectorXd t_star;
  double p_T = 0.0;
  double p_t = 0.0;
  int failures = 0;
};

/// Left-tail empirical p-value with a strict inequality.
[[nodiscard]] double p_value(const Eigen::Ref<const Eigen::VectorXd>& sample,
                             double observed);

/// @brief The ceil(alpha * B)-th order statistic of the sample.
///
/// The index is clamped to [1, B], so alpha -> 0+ yields the minimum and
/// alpha = 1 the maximum. alpha outside [0, 1] or an empty sample is a
/// ConfigError.
[[nodiscard]] double bootstrap_quantile(
    const Eigen::Ref<const Eigen::VectorXd>& sample, double alpha);

/// Deterministic bandwidth rule floor(6 (n/100)^{1/4}), clamped to >= 1.
/// n is the series length and must be at least 16.
[[nodiscard]] int default_bandwidth(Eigen::Index n);

/// @brief Dependent wild bootstrap run under the imposed null.
///
/// Steps per replication b, all derived from config.seed and b:
///  1. detrend, compute observed statistics and residuals
///     u_t = x_t - rho_hat x_{t-1};
///  2. draw multipliers W with cov(W_t, W_{t+h}) = a(h/l) and perturb
///     u*_t = u_t W_t;
///  3. cumulate under the null, add back the fitted trend, re-detrend,
///     recompute both statistics.
/// Replications whose statistics are undefined are dropped and counted; if
/// more than 1% fail the run aborts with DegenerateBootstrap.
[[nodiscard]] BootstrapResult dwb_run(const ObservedSeries& series,
                                      const BootstrapConfig& config);
[[nodiscard]] BootstrapResult dwb_run(const ObservedSeries& series,
                                      const BootstrapConfig& config,
                                      const MultiplierSource& source);

/// @brief Recolored (dependent) wild bootstrap run.
///
/// On top of dwb_run this selects the ADF lag order k_hat by MAIC once,
/// perturbs the lag-k_hat ADF residuals, and rebuilds the bootstrap series
/// through the recoloring recursion with the unit root imposed (pi0 = 0):
///   Delta xi_t = sum_{i=1..k_hat} pi_hat_i Delta xi_{t-i} + u*_t,
/// seeded with xi_t = u*_t for t <= k_hat. Method RWB forces l = 1 and is
/// bit-identical to RDWB with Bandwidth::fixed(1) under the same seed.
/// Non-finite recursion output throws UnstableRecoloring.
[[nodiscard]] BootstrapResult rdwb_run(const ObservedSeries& series,
                                       const BootstrapConfig& config);
[[nodiscard]] BootstrapResult rdwb_run(const ObservedSeries& series,
                                       const BootstrapConfig& config,
                                       const MultiplierSource& source);

/// @brief Rebuilds a null-imposed bootstrap level from perturbed residuals.
///
/// Empty pi cumulates the inputs (partial sums); otherwise the recoloring
/// recursion runs with the first pi.size() observations seeded by the
/// perturbed residuals. Throws UnstableRecoloring on non-finite output.
[[nodiscard]] Eigen::VectorXd recolor_cumulate(
    const Eigen::Ref<const Eigen::VectorXd>& u_star,
    const Eigen::Ref<const Eigen::VectorXd>& pi);

/// Dispatches on config.method.
[[nodiscard]] BootstrapResult run_bootstrap(const ObservedSeries& series,
                                            const BootstrapConfig& config);
[[nodiscard]] BootstrapResult run_bootstrap(const ObservedSeries& series,
                                            const BootstrapConfig& config,
                                            const MultiplierSource& source);

/// Exact two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
[[nodiscard]] double ks_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                                 const Eigen::Ref<const Eigen::VectorXd>& b);

/// Default candidate grid 1..floor(12 (n/100)^{1/4}) + 1 for the minimum
/// volatility rule; n is the series length.
[[nodiscard]] std::vector<int> default_mv_candidates(Eigen::Index n);

/// Outcome of the minimum volatility bandwidth selection.
struct MvSelection {
  int l_selected = 0;
  std::vector<int> candidates;    ///< surviving candidates, ascending
  std::vector<double> distances;  ///< KS distance between neighbors, size-1
  std::vector<int> dropped;       ///< candidates whose runs failed
};

/// @brief Minimum volatility bandwidth selection.
///
/// Runs the configured bootstrap once per candidate l (same seed, so equal
/// candidates give equal samples), forms the empirical distribution of the
/// chosen statistic, and picks the left end of the most stable neighbor
/// pair: l_selected = candidates[argmin_i distances[i]], ties toward the
/// smaller index. Candidates whose run fails are dropped with a note; fewer
/// than two survivors is a NumericalError. Method RWB has no bandwidth to
/// select and is a ConfigError.
[[nodiscard]] MvSelection mv_select_bandwidth(
    const ObservedSeries& series, const BootstrapConfig& config,
    std::vector<int> candidates,
    Statistic stat = Statistic::Coefficient);

}  // namespace urboot
