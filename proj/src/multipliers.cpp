#include "urboot/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include "urboot/errors.hpp"

namespace urboot {

const char* to_string(Kernel kernel) noexcept {
  return kernel == Kernel::Bartlett ? "bartlett" : "parzen";
}

namespace {

void check_bandwidth(Eigen::Index n, int l) {
  if (l < 1 || l >= n) {
    throw ConfigError("bandwidth l = " + std::to_string(l) +
                      " must satisfy 1 <= l < " + std::to_string(n));
  }
}

Eigen::VectorXd draw_normals(Eigen::Index count, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd eta(count);
  for (Eigen::Index i = 0; i < count; ++i) eta[i] = normal(rng);
  return eta;
}

Eigen::VectorXd autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& t) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(t.size());
  for (Eigen::Index h = 0; h < t.size(); ++h) {
    for (Eigen::Index j = 0; j + h < t.size(); ++j) g[h] += t[j] * t[j + h];
  }
  return g;
}

// Spectral factorization of a compactly supported autocovariance: finds
// theta with sum_j theta_j theta_{j+h} = acov[h], so the moving average
// W_t = sum_j theta_j eta_{t+j} over iid normals has covariance acov
// exactly. Exists whenever the trigonometric polynomial with these
// coefficients is nonnegative, which holds for the shipped kernels. The
// sampled kernel sequences have spectral zeros on the unit circle (for
// Bartlett at 2pi k / l, for Parzen at isolated aliasing frequencies), so
// the infinite Toeplitz covariance is singular and a running Cholesky
// recursion drifts and eventually breaks down for n in the tens of
// thousands; the factorization below is immune to the series length.
//
// Roots of the degree-2(L-1) Laurent polynomial come from a companion
// matrix; the L-1 smallest-modulus roots give a first factor, and a damped
// Gauss-Newton pass on the autocorrelation equations polishes the
// coefficients to near machine precision (circle zeros split roots by
// about sqrt(machine epsilon), which polishing repairs).
Eigen::VectorXd ma_weights(const Eigen::Ref<const Eigen::VectorXd>& acov_in) {
  Eigen::Index count = acov_in.size();
  while (count > 1 && acov_in[count - 1] == 0.0) --count;
  const Eigen::VectorXd acov = acov_in.head(count);
  if (count == 1) {
    return Eigen::VectorXd::Constant(1, std::sqrt(acov[0]));
  }

  const Eigen::Index deg = 2 * (count - 1);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (Eigen::Index m = 0; m < deg; ++m) {
    const Eigen::Index h = std::abs(m - (count - 1));
    companion(m, deg - 1) = -acov[h] / acov[count - 1];
  }
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
  if (solver.info() != Eigen::Success) {
    throw NonPsdCovariance("kernel covariance factorization did not converge");
  }
  std::vector<std::complex<double>> roots(
      solver.eigenvalues().data(), solver.eigenvalues().data() + deg);
  std::stable_sort(roots.begin(), roots.end(),
                   [](const std::complex<double>& a,
                      const std::complex<double>& b) {
                     return std::abs(a) < std::abs(b);
                   });

  std::vector<std::complex<double>> poly{1.0};
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] -= roots[static_cast<std::size_t>(i)] * poly[j];
    }
    poly = next;
  }
  Eigen::VectorXd theta(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    theta[j] = poly[static_cast<std::size_t>(j)].real();
  }
  theta *= std::sqrt(acov[0] / theta.squaredNorm());

  double err = (autocorrelation(theta) - acov).cwiseAbs().maxCoeff();
  for (int iter = 0; iter < 60 && err > 1e-14; ++iter) {
    const Eigen::VectorXd gap = autocorrelation(theta) - acov;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(count, count);
    for (Eigen::Index h = 0; h < count; ++h) {
      for (Eigen::Index j = 0; j < count; ++j) {
        if (j + h < count) jac(h, j) += theta[j + h];
        if (j - h >= 0) jac(h, j) += theta[j - h];
      }
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(gap);
    double lambda = 1.0;
    Eigen::VectorXd candidate = theta - step;
    double cand_err = (autocorrelation(candidate) - acov).cwiseAbs().maxCoeff();
    while (cand_err > err && lambda > 1e-4) {
      lambda *= 0.5;
      candidate = theta - lambda * step;
      cand_err = (autocorrelation(candidate) - acov).cwiseAbs().maxCoeff();
    }
    if (cand_err >= err) break;
    theta = candidate;
    err = cand_err;
  }
  if (!(err <= 1e-6) || !theta.allFinite()) {
    throw NonPsdCovariance(
        "kernel covariance admits no stable moving-average factorization");
  }
  return theta;
}

}  // namespace

Eigen::MatrixXd banded_cholesky_toeplitz(
    const Eigen::Ref<const Eigen::VectorXd>& acov, Eigen::Index n) {
  if (acov.size() < 1) throw ConfigError("autocovariance must hold lag 0");
  if (n < 1) throw ConfigError("factor needs at least one row");
  const Eigen::Index bw = acov.size() - 1;
  Eigen::MatrixXd band = Eigen::MatrixXd::Zero(bw + 1, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index col_lo = std::max<Eigen::Index>(0, j - bw);
    double pivot = acov[0];
    for (Eigen::Index c = col_lo; c < j; ++c) {
      const double v = band(j - c, c);
      pivot -= v * v;
    }
    if (!(pivot > 0.0)) {
      throw NonPsdCovariance(
          "multiplier covariance is not positive definite at column " +
          std::to_string(j));
    }
    const double ljj = std::sqrt(pivot);
    band(0, j) = ljj;
    const Eigen::Index row_hi = std::min<Eigen::Index>(n - 1, j + bw);
    for (Eigen::Index i = j + 1; i <= row_hi; ++i) {
      double v = acov[i - j];
      for (Eigen::Index c = std::max(col_lo, i - bw); c < j; ++c) {
        v -= band(i - c, c) * band(j - c, c);
      }
      band(i - j, j) = v / ljj;
    }
  }
  return band;
}

Eigen::VectorXd GaussianMultiplierSource::generate(Eigen::Index n, int l,
                                                   Kernel kernel,
                                                   Engine& rng) const {
  check_bandwidth(n, l);
  if (l == 1) return draw_normals(n, rng);

  if (kernel == Kernel::Bartlett) {
    // W_t = l^{-1/2} (eta_t + ... + eta_{t+l-1}) has covariance exactly
    // (1 - |h|/l)^+, the Bartlett weights, with no factorization needed.
    const Eigen::VectorXd eta = draw_normals(n + l - 1, rng);
    const double root = 1.0 / std::sqrt(static_cast<double>(l));
    Eigen::VectorXd w(n);
    for (Eigen::Index t = 0; t < n; ++t) {
      w[t] = eta.segment(t, l).sum() * root;
    }
    return w;
  }

  Eigen::VectorXd acov(l);
  for (int h = 0; h < l; ++h) {
    acov[h] = kernel_weight(kernel, static_cast<double>(h) / l);
  }
  const Eigen::VectorXd theta = ma_weights(acov);
  const Eigen::Index order = theta.size();
  const Eigen::VectorXd eta = draw_normals(n + order - 1, rng);
  Eigen::VectorXd w(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    w[t] = theta.dot(eta.segment(t, order));
  }
  return w;
}

Eigen::VectorXd ConstantMultiplierSource::generate(Eigen::Index n, int l,
                                                   Kernel /*kernel*/,
                                                   Engine& /*rng*/) const {
  check_bandwidth(n, l);
  return Eigen::VectorXd::Constant(n, value_);
}

Eigen::VectorXd generate_multipliers(Eigen::Index n, int l, Kernel kernel,
                                     Engine& rng) {
  return GaussianMultiplierSource{}.generate(n, l, kernel, rng);
}

}  // namespace urboot
