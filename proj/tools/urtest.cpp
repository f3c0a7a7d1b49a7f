// urtest: command line front end.
//
// Subcommands
//   test         bootstrap unit root test on a CSV series
//   simulate     Monte Carlo rejection table from a JSON experiment config
//   mv           minimum volatility bandwidth selection on a CSV series
//   power-curve  size-corrected power across the config's c grid
//
// Exit codes: 0 success, 1 configuration fault (including flag misuse),
// 2 data fault (unreadable or malformed input), 3 numerical failure.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "urboot/bootstrap.hpp"
#include "urboot/errors.hpp"
#include "urboot/io.hpp"
#include "urboot/montecarlo.hpp"
#include "urboot/series.hpp"
#include "urboot/statistics.hpp"

namespace {

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

int parse_int(const std::string& text) {
  int value = 0;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || ptr != last)
    throw urboot::ConfigError("not an integer: '" + text + "'");
  return value;
}

urboot::Bandwidth parse_bandwidth_flag(const std::string& text) {
  if (text == "auto") return urboot::Bandwidth::deterministic();
  if (text == "mv") return urboot::Bandwidth::minimum_volatility();
  return urboot::Bandwidth::fixed(parse_int(text));
}

// "--candidates" accepts an inclusive range "1..13" or a comma list "2,4,6".
std::vector<int> parse_candidate_list(const std::string& text) {
  std::vector<int> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = parse_int(text.substr(0, dots));
    const int hi = parse_int(text.substr(dots + 2));
    if (lo > hi)
      throw urboot::ConfigError("empty candidate range: '" + text + "'");
    for (int l = lo; l <= hi; ++l) out.push_back(l);
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::size_t stop = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_int(text.substr(start, stop - start)));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw urboot::ConfigError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw urboot::ConfigError("config file " + path + " is not valid JSON: " +
                              e.what());
  }
}

std::string metadata_path(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size()) + ".meta.json";
  return out + ".meta.json";
}

// Writes through a temporary and renames into place, so a failure never
// leaves a truncated file under the final name.
void commit_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw urboot::DataError("cannot open output file: " + tmp);
    out << content;
    out.flush();
    if (!out.good()) {
      std::remove(tmp.c_str());
      throw urboot::DataError("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw urboot::DataError("cannot move output into place: " + path);
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw urboot::ConfigError("alpha must lie strictly between 0 and 1, got " +
                              format_full(alpha));
}

urboot::ProgressFn stderr_progress() {
  return [](const std::string& line) { std::cerr << line << "\n"; };
}

struct TestArgs {
  std::string input;
  std::string method = "rdwb";
  std::string trend = "none";
  std::string l = "auto";
  std::string kernel = "bartlett";
  int B = 399;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

urboot::BootstrapConfig make_config(const TestArgs& args) {
  urboot::BootstrapConfig config;
  config.method = urboot::method_from_string(args.method);
  config.B = args.B;
  config.bandwidth = parse_bandwidth_flag(args.l);
  config.kernel = urboot::kernel_from_string(args.kernel);
  config.seed = args.seed;
  return config;
}

int cmd_test(const TestArgs& args) {
  check_alpha(args.alpha);
  const urboot::BootstrapConfig config = make_config(args);
  const urboot::TrendSpec trend = urboot::trend_from_string(args.trend);
  const Eigen::VectorXd values = urboot::read_series_csv(args.input);
  if (values.size() < 20)
    throw urboot::InsufficientData("need at least 20 observations, got " +
                                   std::to_string(values.size()));
  const urboot::ObservedSeries series(values, trend);
  const urboot::BootstrapResult result = urboot::run_bootstrap(series, config);

  std::cout << urboot::to_json(result).dump(2) << "\n";
  const auto verdict = [&](const char* name, double p) {
    char line[160];
    std::snprintf(line, sizeof line, "%s: %s the unit root at alpha = %g (p = %.4g)",
                  name, p < args.alpha ? "reject" : "fail to reject", args.alpha, p);
    std::cout << line << "\n";
  };
  verdict("T", result.p_T);
  verdict("t", result.p_t);
  return 0;
}

int cmd_mv(const TestArgs& args, const std::string& candidates_text) {
  const urboot::BootstrapConfig config = make_config(args);
  const urboot::TrendSpec trend = urboot::trend_from_string(args.trend);
  const Eigen::VectorXd values = urboot::read_series_csv(args.input);
  const urboot::ObservedSeries series(values, trend);
  const std::vector<int> candidates =
      candidates_text.empty() ? urboot::default_mv_candidates(values.size())
                              : parse_candidate_list(candidates_text);
  const urboot::MvSelection sel =
      urboot::mv_select_bandwidth(series, config, candidates);

  const nlohmann::json j{{"l_selected", sel.l_selected},
                         {"candidates", sel.candidates},
                         {"H", sel.distances},
                         {"dropped", sel.dropped}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 int threads) {
  const urboot::ExperimentSpec spec =
      urboot::experiment_from_json(load_config(config_path));
  const urboot::RejectionTable table =
      urboot::run_size_experiment(spec, threads, stderr_progress());

  std::ostringstream csv;
  urboot::write_rejection_csv(table, csv);
  const std::string meta = metadata_path(out_path);
  bool csv_committed = false;
  try {
    commit_file(out_path, csv.str());
    csv_committed = true;
    commit_file(meta, urboot::table_metadata(table).dump(2) + "\n");
  } catch (...) {
    if (csv_committed) std::remove(out_path.c_str());
    throw;
  }
  std::cerr << "wrote " << out_path << " and " << meta << "\n";
  return 0;
}

int cmd_power_curve(const std::string& config_path, const std::string& out_path,
                    int threads) {
  const urboot::ExperimentSpec spec =
      urboot::experiment_from_json(load_config(config_path));
  if (spec.dgps.size() != 1)
    throw urboot::ConfigError("power-curve needs exactly one dgp, got " +
                              std::to_string(spec.dgps.size()));
  const urboot::RejectionTable table =
      urboot::size_corrected_power(spec, threads, stderr_progress());

  std::ostringstream csv;
  csv << "c,method,statistic,rate\n";
  for (const auto& row : table.rows)
    csv << format_full(row.c) << ',' << row.method << ','
        << urboot::to_string(row.statistic) << ',' << format_full(row.rate)
        << "\n";
  commit_file(out_path, csv.str());

  for (const auto& d : table.diagnostics)
    std::cerr << d.dgp << ' ' << d.method << '/' << urboot::to_string(d.statistic)
              << ": critical value " << d.critical_value << ", corrected alpha "
              << d.alpha_corrected << ", null recheck rate "
              << d.null_recheck_rate << "\n";
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap unit root tests under locally stationary errors"};
  app.require_subcommand(1);

  TestArgs test_args;
  CLI::App* test_cmd =
      app.add_subcommand("test", "Bootstrap unit root test on a CSV series");
  test_cmd->add_option("input", test_args.input, "CSV file, one value per row")
      ->required();
  test_cmd->add_option("--method", test_args.method, "dwb, rwb, or rdwb")
      ->capture_default_str();
  test_cmd->add_option("--trend", test_args.trend,
                       "none, constant, linear, or poly:d")
      ->capture_default_str();
  test_cmd->add_option("--B", test_args.B, "bootstrap replications")
      ->capture_default_str();
  test_cmd->add_option("--l", test_args.l, "block bandwidth: auto, mv, or an integer")
      ->capture_default_str();
  test_cmd->add_option("--kernel", test_args.kernel, "bartlett or parzen")
      ->capture_default_str();
  test_cmd->add_option("--alpha", test_args.alpha, "nominal level for the verdict")
      ->capture_default_str();
  test_cmd->add_option("--seed", test_args.seed, "bootstrap seed")
      ->capture_default_str();

  TestArgs mv_args;
  std::string mv_candidates;
  CLI::App* mv_cmd = app.add_subcommand(
      "mv", "Minimum volatility bandwidth selection on a CSV series");
  mv_cmd->add_option("input", mv_args.input, "CSV file, one value per row")
      ->required();
  mv_cmd->add_option("--method", mv_args.method, "dwb or rdwb")
      ->capture_default_str();
  mv_cmd->add_option("--trend", mv_args.trend,
                     "none, constant, linear, or poly:d")
      ->capture_default_str();
  mv_cmd->add_option("--B", mv_args.B, "bootstrap replications per candidate")
      ->capture_default_str();
  mv_cmd->add_option("--kernel", mv_args.kernel, "bartlett or parzen")
      ->capture_default_str();
  mv_cmd->add_option("--seed", mv_args.seed, "bootstrap seed")
      ->capture_default_str();
  mv_cmd->add_option("--candidates", mv_candidates,
                     "bandwidth grid, \"1..13\" or \"2,4,6\" (default: rule of thumb)");

  std::string sim_config, sim_out;
  int sim_threads = 0;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo rejection table from an experiment config");
  sim_cmd->add_option("--config", sim_config, "experiment JSON file")->required();
  sim_cmd->add_option("--out", sim_out, "output CSV path")->required();
  sim_cmd
      ->add_option("--threads", sim_threads,
                   "worker threads, 0 = hardware concurrency")
      ->envname("URTEST_THREADS");

  std::string pc_config, pc_out;
  int pc_threads = 0;
  CLI::App* pc_cmd = app.add_subcommand(
      "power-curve", "Size-corrected power across the config's c grid");
  pc_cmd->add_option("--config", pc_config, "experiment JSON file")->required();
  pc_cmd->add_option("--out", pc_out, "output CSV path")->required();
  pc_cmd
      ->add_option("--threads", pc_threads,
                   "worker threads, 0 = hardware concurrency")
      ->envname("URTEST_THREADS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (test_cmd->parsed()) return cmd_test(test_args);
    if (mv_cmd->parsed()) return cmd_mv(mv_args, mv_candidates);
    if (sim_cmd->parsed()) return cmd_simulate(sim_config, sim_out, sim_threads);
    if (pc_cmd->parsed()) return cmd_power_curve(pc_config, pc_out, pc_threads);
  } catch (const urboot::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const urboot::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const urboot::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
