#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "urboot/bootstrap.hpp"
#include "urboot/dgp.hpp"

namespace urboot {

/// One bootstrap method entry of an experiment.
struct MethodSpec {
  Method method = Method::RDWB;
  Bandwidth bandwidth{};
  Kernel kernel = Kernel::Bartlett;
  std::string label;  ///< table label; defaults to the method name

  [[nodiscard]] std::string effective_label() const {
    return label.empty() ? to_string(method) : label;
  }
};

/// @brief Full description of a Monte Carlo experiment.
///
/// dgps are design templates (their c field is ignored); the level exponent
/// comes from c_grid. Every method runs on the same simulated data within a
/// (dgp, c, replication) cell, and every random stream is keyed by cell
/// identity, so removing one dgp or method leaves all other cells' numbers
/// unchanged.
struct ExperimentSpec {
  std::vector<DgpSpec> dgps;
  std::vector<double> c_grid{0.0};
  std::vector<MethodSpec> methods;
  int N = 500;    ///< Monte Carlo replications per cell
  int B = 399;    ///< bootstrap replications within each MC replication
  double alpha = 0.05;
  std::uint64_t seed = 0;
  TrendSpec trend = TrendSpec::none();
};

/// One row of a rejection table.
struct RejectionRow {
  DgpSpec dgp;          ///< c field set to the row's c
  std::string method;
  Statistic statistic = Statistic::Coefficient;
  double c = 0.0;
  double rate = 0.0;
  int failures = 0;
  bool flagged = false;  ///< more than 1% of replications failed
};

/// Size-correction diagnostics for one (dgp, method, statistic) cell.
struct PowerDiagnostics {
  std::string dgp;
  std::string method;
  Statistic statistic = Statistic::Coefficient;
  double critical_value = 0.0;     ///< infeasible null critical value L_hat
  double alpha_corrected = 0.0;    ///< mean bootstrap mass below L_hat
  double null_recheck_rate = 0.0;  ///< corrected rule applied to stage 1
};

/// @brief Rejection rates of an experiment, row order canonical.
///
/// Rows iterate dgps, then methods, then statistics (coefficient before
/// studentized), then c in grid order. rate = rejections / N.
struct RejectionTable {
  ExperimentSpec spec;
  std::vector<RejectionRow> rows;
  std::vector<PowerDiagnostics> diagnostics;  ///< power runs only
};

/// Progress callback, invoked once per finished table row.
using ProgressFn = std::function<void(const std::string& line)>;

/// @brief Empirical rejection rates at the nominal level.
///
/// For every dgp, method, and c in the grid, N series are simulated, the
/// bootstrap p-values are computed for both statistics, and the table
/// records the share of p < alpha; with the default grid {0} this is the
/// empirical size under the exact null. threads <= 0 means hardware
/// concurrency; results are identical for every thread count.
[[nodiscard]] RejectionTable run_size_experiment(const ExperimentSpec& spec,
                                                 int threads = 0,
                                                 const ProgressFn& progress = {});

/// The ceil(alpha * N)-th order statistic of simulated null statistics.
[[nodiscard]] double infeasible_critical_value(
    const Eigen::Ref<const Eigen::VectorXd>& null_stats, double alpha);

/// @brief Size-corrected power study.
///
/// Stage 1 simulates N null replications per (dgp, method) and both
/// statistics: the infeasible critical value L_hat is the ceil(alpha N)-th
/// order statistic of the observed null statistics, and the corrected level
/// is the mean bootstrap mass strictly below L_hat. Stage 2 simulates N
/// fresh replications per c < 0 and rejects when the observed statistic
/// lies strictly below the corrected-level quantile of its own bootstrap
/// sample. Rows at c = 0 report the raw (uncorrected) size from stage 1;
/// c_grid must contain 0.
[[nodiscard]] RejectionTable size_corrected_power(const ExperimentSpec& spec,
                                                  int threads = 0,
                                                  const ProgressFn& progress = {});

}  // namespace urboot
