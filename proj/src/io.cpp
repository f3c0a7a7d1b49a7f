#include "urboot/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace urboot {

namespace {

std::string trimmed(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Eigen::VectorXd read_series_csv(std::istream& in, const std::string& name) {
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string cell = trimmed(line);
    if (cell.empty()) continue;
    double v = 0.0;
    if (parse_double(cell, v)) {
      if (!std::isfinite(v)) {
        throw CsvError(name + ": line " + std::to_string(line_no) +
                           ": non-finite value '" + cell + "'",
                       line_no);
      }
      values.push_back(v);
      seen_content = true;
      continue;
    }
    if (!seen_content) {
      seen_content = true;  // single optional header line
      continue;
    }
    throw CsvError(name + ": line " + std::to_string(line_no) +
                       ": not a number: '" + cell + "'",
                   line_no);
  }
  if (values.empty()) {
    throw CsvError(name + ": no numeric rows", line_no);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(
                                               values.size()));
}

Eigen::VectorXd read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_series_csv(in, path);
}

nlohmann::json to_json(const BootstrapResult& result) {
  nlohmann::json j;
  j["method"] = to_string(result.method);
  j["l_used"] = result.l_used;
  j["k_hat"] = result.k_hat ? nlohmann::json(*result.k_hat)
                            : nlohmann::json(nullptr);
  j["B"] = result.B;
  j["observed"] = {{"rho", result.observed.rho_hat},
                   {"T", result.observed.T},
                   {"t", result.observed.t()},
                   {"s_sq", result.observed.s_sq}};
  j["p_T"] = result.p_T;
  j["p_t"] = result.p_t;
  return j;
}

std::string trend_to_string(const TrendSpec& trend) {
  if (trend.is_none()) return "none";
  switch (trend.degree()) {
    case 0: return "constant";
    case 1: return "linear";
    default: return "poly:" + std::to_string(trend.degree());
  }
}

TrendSpec trend_from_string(const std::string& text) {
  if (text == "none") return TrendSpec::none();
  if (text == "constant") return TrendSpec::constant();
  if (text == "linear") return TrendSpec::linear();
  if (text.rfind("poly:", 0) == 0) {
    int degree = -1;
    const std::string tail = text.substr(5);
    const auto res =
        std::from_chars(tail.data(), tail.data() + tail.size(), degree);
    if (res.ec == std::errc() && res.ptr == tail.data() + tail.size()) {
      return TrendSpec::polynomial(degree);
    }
  }
  throw ConfigError("unknown trend '" + text +
                    "', expected none|constant|linear|poly:d");
}

Method method_from_string(const std::string& text) {
  if (text == "dwb") return Method::DWB;
  if (text == "rwb") return Method::RWB;
  if (text == "rdwb") return Method::RDWB;
  throw ConfigError("unknown method '" + text + "', expected dwb|rwb|rdwb");
}

Kernel kernel_from_string(const std::string& text) {
  if (text == "bartlett") return Kernel::Bartlett;
  if (text == "parzen") return Kernel::Parzen;
  throw ConfigError("unknown kernel '" + text + "', expected bartlett|parzen");
}

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

nlohmann::json bandwidth_to_json(const Bandwidth& bw) {
  switch (bw.mode) {
    case Bandwidth::Mode::Deterministic: return "auto";
    case Bandwidth::Mode::MinimumVolatility: return "mv";
    case Bandwidth::Mode::Fixed: return bw.value;
  }
  throw ConfigError("unknown bandwidth mode");
}

Bandwidth bandwidth_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (text == "auto") return Bandwidth::deterministic();
    if (text == "mv") return Bandwidth::minimum_volatility();
    throw ConfigError("unknown bandwidth '" + text +
                      "', expected auto|mv|integer");
  }
  if (j.is_number_integer()) {
    return Bandwidth::fixed(j.get<int>());
  }
  throw ConfigError("bandwidth must be \"auto\", \"mv\", or an integer");
}

ErrorModel model_from_string(const std::string& text) {
  if (text == "MA") return ErrorModel::MA;
  if (text == "AR") return ErrorModel::AR;
  throw ConfigError("unknown model '" + text + "', expected MA|AR");
}

}  // namespace

nlohmann::json to_json(const MethodSpec& method) {
  nlohmann::json j;
  j["method"] = to_string(method.method);
  j["bandwidth"] = bandwidth_to_json(method.bandwidth);
  j["kernel"] = to_string(method.kernel);
  if (!method.label.empty()) j["label"] = method.label;
  return j;
}

MethodSpec method_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("method entry must be an object");
  reject_unknown_keys(j, {"method", "bandwidth", "kernel", "label"},
                      "method entry");
  if (!j.contains("method")) {
    throw ConfigError("method entry needs a 'method' key");
  }
  MethodSpec m;
  m.method = method_from_string(j.at("method").get<std::string>());
  if (j.contains("bandwidth")) {
    m.bandwidth = bandwidth_from_json(j.at("bandwidth"));
  }
  if (j.contains("kernel")) {
    m.kernel = kernel_from_string(j.at("kernel").get<std::string>());
  }
  if (j.contains("label")) m.label = j.at("label").get<std::string>();
  return m;
}

nlohmann::json to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["dgps"] = nlohmann::json::array();
  for (const DgpSpec& d : spec.dgps) {
    j["dgps"].push_back({{"model", to_string(d.model)},
                         {"phi", d.phi},
                         {"omega", d.omega},
                         {"n", d.n}});
  }
  j["c_grid"] = spec.c_grid;
  j["methods"] = nlohmann::json::array();
  for (const MethodSpec& m : spec.methods) j["methods"].push_back(to_json(m));
  j["N"] = spec.N;
  j["B"] = spec.B;
  j["alpha"] = spec.alpha;
  j["seed"] = spec.seed;
  j["trend"] = trend_to_string(spec.trend);
  return j;
}

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be an object");
  reject_unknown_keys(
      j, {"dgps", "c_grid", "methods", "N", "B", "alpha", "seed", "trend"},
      "experiment config");
  for (const char* key : {"dgps", "methods", "N", "B", "alpha", "seed"}) {
    if (!j.contains(key)) {
      throw ConfigError(std::string("experiment config needs '") + key + "'");
    }
  }
  ExperimentSpec spec;
  spec.dgps.clear();
  if (!j.at("dgps").is_array()) throw ConfigError("'dgps' must be an array");
  for (const auto& d : j.at("dgps")) {
    reject_unknown_keys(d, {"model", "phi", "omega", "n"}, "dgp entry");
    for (const char* key : {"model", "phi", "omega", "n"}) {
      if (!d.contains(key)) {
        throw ConfigError(std::string("dgp entry needs '") + key + "'");
      }
    }
    spec.dgps.emplace_back(model_from_string(d.at("model").get<std::string>()),
                           d.at("phi").get<int>(), d.at("omega").get<int>(),
                           d.at("n").get<Eigen::Index>());
  }
  if (j.contains("c_grid")) {
    if (!j.at("c_grid").is_array()) {
      throw ConfigError("'c_grid' must be an array");
    }
    spec.c_grid = j.at("c_grid").get<std::vector<double>>();
  }
  if (!j.at("methods").is_array()) {
    throw ConfigError("'methods' must be an array");
  }
  spec.methods.clear();
  for (const auto& m : j.at("methods")) {
    spec.methods.push_back(method_from_json(m));
  }
  spec.N = j.at("N").get<int>();
  spec.B = j.at("B").get<int>();
  spec.alpha = j.at("alpha").get<double>();
  if (!j.at("seed").is_number_unsigned()) {
    throw ConfigError("'seed' must be a nonnegative integer");
  }
  spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("trend")) {
    spec.trend = trend_from_string(j.at("trend").get<std::string>());
  }
  return spec;
}

void write_rejection_csv(const RejectionTable& table, std::ostream& out) {
  out << "model,phi,omega,n,method,statistic,c,rate,failures\n";
  for (const RejectionRow& row : table.rows) {
    out << to_string(row.dgp.model) << ',' << row.dgp.phi << ','
        << row.dgp.omega << ',' << row.dgp.n << ',' << row.method << ','
        << to_string(row.statistic) << ',' << format_full(row.c) << ','
        << format_full(row.rate) << ',' << row.failures << '\n';
  }
}

void write_rejection_csv(const RejectionTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_rejection_csv(table, out);
  if (!out.good()) throw DataError("failed writing '" + path + "'");
}

nlohmann::json table_metadata(const RejectionTable& table) {
  nlohmann::json j;
  j["experiment"] = to_json(table.spec);
  j["diagnostics"] = nlohmann::json::array();
  for (const PowerDiagnostics& d : table.diagnostics) {
    j["diagnostics"].push_back({{"dgp", d.dgp},
                                {"method", d.method},
                                {"statistic", to_string(d.statistic)},
                                {"critical_value", d.critical_value},
                                {"alpha_corrected", d.alpha_corrected},
                                {"null_recheck_rate", d.null_recheck_rate}});
  }
  return j;
}

RejectionTable read_rejection_csv(const std::string& csv_path,
                                  const std::string& meta_path) {
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw DataError("cannot open '" + meta_path + "'");
  nlohmann::json meta;
  try {
    meta_in >> meta;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed metadata '" + meta_path + "': " + e.what());
  }
  if (!meta.contains("experiment")) {
    throw DataError("metadata '" + meta_path + "' lacks 'experiment'");
  }

  RejectionTable table;
  table.spec = experiment_from_json(meta.at("experiment"));
  if (meta.contains("diagnostics")) {
    for (const auto& d : meta.at("diagnostics")) {
      PowerDiagnostics diag;
      diag.dgp = d.at("dgp").get<std::string>();
      diag.method = d.at("method").get<std::string>();
      diag.statistic = d.at("statistic").get<std::string>() == "T"
                           ? Statistic::Coefficient
                           : Statistic::Studentized;
      diag.critical_value = d.at("critical_value").get<double>();
      diag.alpha_corrected = d.at("alpha_corrected").get<double>();
      diag.null_recheck_rate = d.at("null_recheck_rate").get<double>();
      table.diagnostics.push_back(diag);
    }
  }

  std::ifstream in(csv_path);
  if (!in) throw DataError("cannot open '" + csv_path + "'");
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw CsvError(csv_path + ": empty file", 1);
  ++line_no;
  if (trimmed(line) != "model,phi,omega,n,method,statistic,c,rate,failures") {
    throw CsvError(csv_path + ": unexpected header '" + trimmed(line) + "'",
                   line_no);
  }
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row_text = trimmed(line);
    if (row_text.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream split(row_text);
    while (std::getline(split, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw CsvError(csv_path + ": line " + std::to_string(line_no) +
                         ": expected 9 fields, got " +
                         std::to_string(fields.size()),
                     line_no);
    }
    try {
      RejectionRow row;
      const ErrorModel model = model_from_string(fields[0]);
      const int phi = std::stoi(fields[1]);
      const int omega = std::stoi(fields[2]);
      const Eigen::Index n = std::stol(fields[3]);
      double c = 0.0;
      double rate = 0.0;
      if (!parse_double(fields[6], c) || !parse_double(fields[7], rate)) {
        throw CsvError(csv_path + ": line " + std::to_string(line_no) +
                           ": bad numeric field",
                       line_no);
      }
      row.dgp = DgpSpec(model, phi, omega, n, c);
      row.method = fields[4];
      if (fields[5] != "T" && fields[5] != "t") {
        throw CsvError(csv_path + ": line " + std::to_string(line_no) +
                           ": unknown statistic '" + fields[5] + "'",
                       line_no);
      }
      row.statistic = fields[5] == "T" ? Statistic::Coefficient
                                       : Statistic::Studentized;
      row.c = c;
      row.rate = rate;
      row.failures = std::stoi(fields[8]);
      row.flagged = row.failures > 0.01 * table.spec.N;
      table.rows.push_back(row);
    } catch (const std::invalid_argument&) {
      throw CsvError(csv_path + ": line " + std::to_string(line_no) +
                         ": bad integer field",
                     line_no);
    } catch (const std::out_of_range&) {
      throw CsvError(csv_path + ": line " + std::to_string(line_no) +
                         ": integer field out of range",
                     line_no);
    }
  }
  return table;
}

}  // namespace urboot
