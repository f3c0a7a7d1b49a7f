#include "urboot/dgp.hpp"

#include <string>

#include "urboot/errors.hpp"

namespace urboot {

const char* to_string(ErrorModel model) noexcept {
  return model == ErrorModel::MA ? "MA" : "AR";
}

DgpSpec::DgpSpec(ErrorModel model_in, int phi_in, int omega_in,
                 Eigen::Index n_in, double c_in)
    : model(model_in), phi(phi_in), omega(omega_in), n(n_in), c(c_in) {
  if (phi < 1 || phi > 6) {
    throw ConfigError("unknown phi index " + std::to_string(phi) +
                      ", expected 1..6");
  }
  if (omega < 1 || omega > 5) {
    throw ConfigError("unknown omega index " + std::to_string(omega) +
                      ", expected 1..5");
  }
  if (n < 20) {
    throw ConfigError("simulated length n = " + std::to_string(n) +
                      " is below the minimum of 20");
  }
  if (!(c <= 0.0)) {
    throw ConfigError("level exponent c must be nonpositive, got " +
                      std::to_string(c));
  }
}

double phi_eval(int index, double s) {
  switch (index) {
    case 1: return 0.8;
    case 2: return -0.8;
    case 3: return 0.2 + 0.6 * (s > 0.2 ? 1.0 : 0.0);
    case 4: return 0.2 + 0.6 * (s > 0.8 ? 1.0 : 0.0);
    case 5: return 0.8 - 1.6 * s;
    case 6: return 0.6 * s - 0.8;
    default:
      throw ConfigError("unknown phi index " + std::to_string(index) +
                        ", expected 1..6");
  }
}

double omega_eval(int index, double s) {
  switch (index) {
    case 1: return 0.5;
    case 2: return 0.1 + 0.5 * (s > 0.1 ? 1.0 : 0.0);
    case 3: return 0.1 + 0.5 * (s > 0.9 ? 1.0 : 0.0);
    case 4: return 0.1 + 0.5 * (s > 0.4 && s < 0.6 ? 1.0 : 0.0);
    case 5: return 0.5 * s + 0.1;
    default:
      throw ConfigError("unknown omega index " + std::to_string(index) +
                        ", expected 1..5");
  }
}

std::string dgp_name(const DgpSpec& spec) {
  return std::string(to_string(spec.model)) + "_" + std::to_string(spec.phi) +
         "_" + std::to_string(spec.omega);
}

Eigen::VectorXd simulate_errors_with(ErrorModel model,
                                     const std::function<double(double)>& phi,
                                     const std::function<double(double)>& omega,
                                     Eigen::Index n, Engine& rng) {
  if (n < 1) throw ConfigError("error sequence needs n >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd u(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  if (model == ErrorModel::MA) {
    double e_prev = omega(0.0) * normal(rng);  // e_0
    for (Eigen::Index t = 1; t <= n; ++t) {
      const double s = static_cast<double>(t) * inv_n;
      const double e = omega(s) * normal(rng);
      u[t - 1] = e + phi(s) * e_prev;
      e_prev = e;
    }
  } else {
    double u_prev = 0.0;  // u_0
    for (Eigen::Index t = 1; t <= n; ++t) {
      const double s = static_cast<double>(t) * inv_n;
      const double e = omega(s) * normal(rng);
      u[t - 1] = e + phi(s) * u_prev;
      u_prev = u[t - 1];
    }
  }
  return u;
}

Eigen::VectorXd simulate_errors(const DgpSpec& spec, Engine& rng) {
  const int pi = spec.phi;
  const int oi = spec.omega;
  return simulate_errors_with(
      spec.model, [pi](double s) { return phi_eval(pi, s); },
      [oi](double s) { return omega_eval(oi, s); }, spec.n, rng);
}

Eigen::VectorXd integrate_near_unit(const Eigen::Ref<const Eigen::VectorXd>& u,
                                    double rho) {
  Eigen::VectorXd x(u.size());
  double level = 0.0;  // X_0
  for (Eigen::Index t = 0; t < u.size(); ++t) {
    level = rho * level + u[t];
    x[t] = level;
  }
  return x;
}

Eigen::VectorXd simulate_series(const DgpSpec& spec, Engine& rng) {
  if (!(spec.c <= 0.0)) {
    throw ConfigError("level exponent c must be nonpositive, got " +
                      std::to_string(spec.c));
  }
  const Eigen::VectorXd u = simulate_errors(spec, rng);
  const double rho = 1.0 + spec.c / static_cast<double>(spec.n);
  return integrate_near_unit(u, rho);
}

}  // namespace urboot
