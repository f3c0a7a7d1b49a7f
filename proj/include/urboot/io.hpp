#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "urboot/bootstrap.hpp"
#include "urboot/montecarlo.hpp"

namespace urboot {

/// @brief Reads a single-column numeric CSV into a vector.
///
/// Dialect: comma-free single column, '.' decimal separator, LF or CRLF
/// endings, one optional header line, blank lines ignored. Any other
/// malformed content throws CsvError carrying the 1-based line number.
[[nodiscard]] Eigen::VectorXd read_series_csv(std::istream& in,
                                              const std::string& name);
[[nodiscard]] Eigen::VectorXd read_series_csv(const std::string& path);

/// Serializes one bootstrap run at full precision:
/// {method, l_used, k_hat, B, observed {rho, T, t, s_sq}, p_T, p_t}.
[[nodiscard]] nlohmann::json to_json(const BootstrapResult& result);

/// Method entry serialization {method, bandwidth, kernel, label?} where
/// bandwidth is "auto", "mv", or an integer.
[[nodiscard]] nlohmann::json to_json(const MethodSpec& method);
[[nodiscard]] MethodSpec method_from_json(const nlohmann::json& j);

/// Experiment serialization used for config files and metadata sidecars:
/// {dgps [{model, phi, omega, n}], c_grid, methods, N, B, alpha, seed,
///  trend?}. Unknown keys or out-of-range values throw ConfigError.
[[nodiscard]] nlohmann::json to_json(const ExperimentSpec& spec);
[[nodiscard]] ExperimentSpec experiment_from_json(const nlohmann::json& j);

/// @brief Writes a rejection table as CSV.
///
/// Header model,phi,omega,n,method,statistic,c,rate,failures; LF endings,
/// '.' decimals, full-precision numbers, rows in the table's canonical
/// order. Bytes are a pure function of the table.
void write_rejection_csv(const RejectionTable& table, std::ostream& out);
void write_rejection_csv(const RejectionTable& table, const std::string& path);

/// Metadata sidecar {experiment, diagnostics} for a written table.
[[nodiscard]] nlohmann::json table_metadata(const RejectionTable& table);

/// @brief Reads a table back from CSV plus its metadata sidecar.
///
/// Inverse of write_rejection_csv + table_metadata: the reconstructed
/// table equals the written one field for field, bit for bit on rates.
[[nodiscard]] RejectionTable read_rejection_csv(const std::string& csv_path,
                                                const std::string& meta_path);

/// Trend serialization: "none", "constant", "linear", or "poly:d".
[[nodiscard]] std::string trend_to_string(const TrendSpec& trend);
[[nodiscard]] TrendSpec trend_from_string(const std::string& text);

/// Statistic / method / kernel parsing (lowercase names); ConfigError on
/// unknown input.
[[nodiscard]] Method method_from_string(const std::string& text);
[[nodiscard]] Kernel kernel_from_string(const std::string& text);

}  // namespace urboot
