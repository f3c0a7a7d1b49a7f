#pragma once

#include <cmath>

namespace urboot {

/// Window generating the multiplier autocovariance a(h / l).
enum class Kernel {
  Bartlett,
  Parzen,
};

[[nodiscard]] const char* to_string(Kernel kernel) noexcept;

/// @brief Evaluates the kernel weight a(x).
///
/// Bartlett: (1 - |x|) on |x| <= 1.
/// Parzen:   1 - 6x^2 + 6|x|^3 on |x| <= 1/2, 2(1 - |x|)^3 on 1/2 < |x| <= 1.
/// Both vanish outside [-1, 1], are 1 at 0, and are positive semidefinite,
/// so a(h / l) is a valid l-dependent autocovariance.
[[nodiscard]] inline double kernel_weight(Kernel kernel, double x) noexcept {
  const double ax = std::fabs(x);
  if (ax > 1.0) return 0.0;
  switch (kernel) {
    case Kernel::Bartlett:
      return 1.0 - ax;
    case Kernel::Parzen:
      if (ax <= 0.5) return 1.0 - 6.0 * ax * ax + 6.0 * ax * ax * ax;
      return 2.0 * (1.0 - ax) * (1.0 - ax) * (1.0 - ax);
  }
  return 0.0;
}

}  // namespace urboot
