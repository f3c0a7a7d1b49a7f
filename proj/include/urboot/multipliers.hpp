#pragma once

#include <Eigen/Dense>

#include "urboot/kernel.hpp"
#include "urboot/rng.hpp"

namespace urboot {

/// @brief Source of multiplier vectors for the wild bootstrap.
///
/// The production source draws the l-dependent Gaussian sequence; tests can
/// substitute deterministic sources (constant multipliers, recorded streams)
/// to pin every replication down exactly.
class MultiplierSource {
 public:
  virtual ~MultiplierSource() = default;

  /// Returns n multipliers with cov(W_t, W_{t+h}) = a(h / l).
  [[nodiscard]] virtual Eigen::VectorXd generate(Eigen::Index n, int l,
                                                 Kernel kernel,
                                                 Engine& rng) const = 0;
};

/// @brief Default source: mean-zero unit-variance Gaussian multipliers.
///
/// Every kernel is sampled through an exact order-(l-1) moving average
/// over iid standard normals. Bartlett has the closed-form window
///   W_t = l^{-1/2} (eta_t + ... + eta_{t+l-1}),
/// whose autocovariance is exactly (1 - |h|/l)^+; other kernels first
/// factor their sampled autocovariance a(h/l) into moving-average weights
/// (spectral factorization of the nonnegative trigonometric polynomial).
/// The sliding-window form is stable for any n: the sampled kernel
/// sequences have unit-circle spectral zeros, so a running Cholesky of
/// the Toeplitz covariance breaks down once n reaches the tens of
/// thousands.
class GaussianMultiplierSource final : public MultiplierSource {
 public:
  [[nodiscard]] Eigen::VectorXd generate(Eigen::Index n, int l, Kernel kernel,
                                         Engine& rng) const override;
};

/// Degenerate source returning a constant vector; W = 1 reproduces the
/// original residuals through the whole bootstrap pipeline.
class ConstantMultiplierSource final : public MultiplierSource {
 public:
  explicit ConstantMultiplierSource(double value) : value_(value) {}

  [[nodiscard]] Eigen::VectorXd generate(Eigen::Index n, int l, Kernel kernel,
                                         Engine& rng) const override;

 private:
  double value_;
};

/// @brief Draws one multiplier vector from the default Gaussian source.
///
/// Requires 1 <= l < n (ConfigError otherwise). l = 1 collapses to iid
/// standard normal multipliers for every kernel.
[[nodiscard]] Eigen::VectorXd generate_multipliers(Eigen::Index n, int l,
                                                   Kernel kernel, Engine& rng);

/// @brief Banded lower Cholesky factor of a Toeplitz covariance.
///
/// acov holds the first column (lags 0..bandwidth); entry (d, j) of the
/// result stores L(j + d, j). Throws NonPsdCovariance on a nonpositive
/// pivot. Cost is O(n bandwidth^2). Standalone utility: exact for
/// moderate n, but sequences whose spectral density touches zero (the
/// sampled kernels above do) make the recursion drift and fail for n in
/// the tens of thousands, which is why the generator uses the
/// moving-average form instead.
[[nodiscard]] Eigen::MatrixXd banded_cholesky_toeplitz(
    const Eigen::Ref<const Eigen::VectorXd>& acov, Eigen::Index n);

}  // namespace urboot
