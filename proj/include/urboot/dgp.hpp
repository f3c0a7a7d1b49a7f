#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "urboot/rng.hpp"

namespace urboot {

/// Error process family for the simulated data.
enum class ErrorModel {
  MA,  ///< u_t = e_t + phi(t/n) e_{t-1}
  AR,  ///< u_t = e_t + phi(t/n) u_{t-1}
};

[[nodiscard]] const char* to_string(ErrorModel model) noexcept;

/// @brief One simulation design: error process plus near-unit-root level.
///
/// The level is X_t = (1 + c/n) X_{t-1} + u_t with X_0 = 0 and c <= 0;
/// c = 0 is the exact null. Innovations are e_t = omega(t/n) eps_t with
/// eps_t iid N(0, 1). phi selects one of six coefficient profiles and
/// omega one of five volatility profiles, each a function of s = t/n:
///   phi_1 = 0.8                    omega_1 = 0.5
///   phi_2 = -0.8                   omega_2 = 0.1 + 0.5 1(s > 0.1)
///   phi_3 = 0.2 + 0.6 1(s > 0.2)   omega_3 = 0.1 + 0.5 1(s > 0.9)
///   phi_4 = 0.2 + 0.6 1(s > 0.8)   omega_4 = 0.1 + 0.5 1(0.4 < s < 0.6)
///   phi_5 = 0.8 - 1.6 s            omega_5 = 0.5 s + 0.1
///   phi_6 = 0.6 s - 0.8
/// All indicator comparisons are strict.
struct DgpSpec {
  ErrorModel model = ErrorModel::MA;
  int phi = 1;    ///< 1..6
  int omega = 1;  ///< 1..5
  Eigen::Index n = 100;
  double c = 0.0;

  DgpSpec() = default;
  DgpSpec(ErrorModel model_in, int phi_in, int omega_in, Eigen::Index n_in,
          double c_in = 0.0);
};

/// Coefficient profile phi_index(s); index in 1..6.
[[nodiscard]] double phi_eval(int index, double s);

/// Volatility profile omega_index(s); index in 1..5.
[[nodiscard]] double omega_eval(int index, double s);

/// Table label, e.g. "MA_1_1".
[[nodiscard]] std::string dgp_name(const DgpSpec& spec);

/// @brief Simulates the error sequence u_1..u_n for given profiles.
///
/// The MA recursion starts from e_0 = omega(0) eps_0 (one extra draw); the
/// AR recursion starts from u_0 = 0. Exposed with free-function profiles so
/// tests can force phi = 0 and recover u_t = omega(t/n) eps_t exactly.
[[nodiscard]] Eigen::VectorXd simulate_errors_with(
    ErrorModel model, const std::function<double(double)>& phi,
    const std::function<double(double)>& omega, Eigen::Index n, Engine& rng);

/// Error sequence for the indexed phi/omega profiles.
[[nodiscard]] Eigen::VectorXd simulate_errors(const DgpSpec& spec, Engine& rng);

/// Cumulates errors into the level: X_t = rho X_{t-1} + u_t, X_0 = 0.
[[nodiscard]] Eigen::VectorXd integrate_near_unit(
    const Eigen::Ref<const Eigen::VectorXd>& u, double rho);

/// Simulated level series X_1..X_n with rho = 1 + c/n.
[[nodiscard]] Eigen::VectorXd simulate_series(const DgpSpec& spec, Engine& rng);

}  // namespace urboot
