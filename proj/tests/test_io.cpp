#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "urboot/bootstrap.hpp"
#include "urboot/errors.hpp"
#include "urboot/io.hpp"
#include "urboot/montecarlo.hpp"

using urboot::Bandwidth;
using urboot::BootstrapConfig;
using urboot::CsvError;
using urboot::DgpSpec;
using urboot::ErrorModel;
using urboot::experiment_from_json;
using urboot::ExperimentSpec;
using urboot::Kernel;
using urboot::kernel_from_string;
using urboot::Method;
using urboot::method_from_json;
using urboot::method_from_string;
using urboot::MethodSpec;
using urboot::ObservedSeries;
using urboot::read_rejection_csv;
using urboot::read_series_csv;
using urboot::run_size_experiment;
using urboot::table_metadata;
using urboot::to_json;
using urboot::trend_from_string;
using urboot::trend_to_string;
using urboot::TrendSpec;
using urboot::write_rejection_csv;

namespace {

Eigen::VectorXd parse(const std::string& text) {
  std::istringstream in(text);
  return read_series_csv(in, "test");
}

std::string temp_path(const std::string& stem) {
  return std::string("/tmp/urboot_io_") + stem;
}

}  // namespace

TEST_CASE("csv reader accepts plain columns, headers, and crlf") {
  const auto plain = parse("1.5\n-2\n3e-1\n");
  CHECK(plain.size() == 3);
  CHECK(plain[0] == 1.5);
  CHECK(plain[1] == -2.0);
  CHECK(plain[2] == 0.3);

  const auto header = parse("value\n1\n2\n");
  CHECK(header.size() == 2);

  const auto crlf = parse("x\r\n1\r\n2\r\n");
  CHECK(crlf.size() == 2);
  CHECK(crlf[1] == 2.0);

  const auto blanks = parse("\n1\n\n2\n\n");
  CHECK(blanks.size() == 2);

  const auto no_final_newline = parse("1\n2");
  CHECK(no_final_newline.size() == 2);

  const auto padded = parse("  1.5 \n\t2\n");
  CHECK(padded[0] == 1.5);
}

TEST_CASE("csv reader reports the offending line") {
  try {
    (void)parse("1\n2\nbad\n4\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 3);
  }

  try {
    (void)parse("x\n1\n2,3\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 3);  // multi-column rows are rejected
  }

  CHECK_THROWS_AS((void)parse("1\nnan\n2\n"), CsvError);
  CHECK_THROWS_AS((void)parse("1\ninf\n"), CsvError);
  CHECK_THROWS_AS((void)parse(""), CsvError);
  CHECK_THROWS_AS((void)parse("header_only\n"), CsvError);
  // a file that cannot be opened has no line to blame
  CHECK_THROWS_AS((void)read_series_csv("/nonexistent/u.csv"),
                  urboot::DataError);
}

TEST_CASE("csv reader round-trips through a file") {
  const std::string path = temp_path("series.csv");
  {
    std::ofstream out(path);
    out << "1.25\n-3.5\n0.125\n";
  }
  const auto v = read_series_csv(path);
  REQUIRE(v.size() == 3);
  CHECK(v[1] == -3.5);
  std::remove(path.c_str());
}

TEST_CASE("trend strings round trip") {
  for (const auto& text : {"none", "constant", "linear", "poly:3", "poly:5"}) {
    CHECK(trend_to_string(trend_from_string(text)) == text);
  }
  CHECK(trend_from_string("poly:0") == TrendSpec::constant());
  CHECK(trend_to_string(TrendSpec::constant()) == "constant");
  CHECK(trend_to_string(TrendSpec::linear()) == "linear");
  CHECK_THROWS_AS((void)trend_from_string("quadratic"), urboot::ConfigError);
  CHECK_THROWS_AS((void)trend_from_string("poly:6"), urboot::ConfigError);
  CHECK_THROWS_AS((void)trend_from_string("poly:x"), urboot::ConfigError);
  CHECK_THROWS_AS((void)trend_from_string(""), urboot::ConfigError);
}

TEST_CASE("method and kernel parsing") {
  CHECK(method_from_string("dwb") == Method::DWB);
  CHECK(method_from_string("rwb") == Method::RWB);
  CHECK(method_from_string("rdwb") == Method::RDWB);
  CHECK_THROWS_AS((void)method_from_string("DWB"), urboot::ConfigError);
  CHECK(kernel_from_string("bartlett") == Kernel::Bartlett);
  CHECK(kernel_from_string("parzen") == Kernel::Parzen);
  CHECK_THROWS_AS((void)kernel_from_string("tukey"), urboot::ConfigError);
}

TEST_CASE("bootstrap result serialization has the exact schema") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(60);
  double level = 0.0;
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    level += normal(rng);
    x[t] = level;
  }
  const ObservedSeries series(x, TrendSpec::constant());

  BootstrapConfig cfg;
  cfg.method = Method::DWB;
  cfg.B = 49;
  const auto res = urboot::dwb_run(series, cfg);
  const auto j = to_json(res);

  REQUIRE(j.is_object());
  CHECK(j.size() == 7);
  CHECK(j["method"] == "dwb");
  CHECK(j["l_used"].is_number_integer());
  CHECK(j["k_hat"].is_null());
  CHECK(j["B"] == 49);
  CHECK(j["observed"].size() == 4);
  CHECK(j["observed"]["rho"].get<double>() == res.observed.rho_hat);
  CHECK(j["observed"]["T"].get<double>() == res.observed.T);
  CHECK(j["observed"]["t"].get<double>() == res.observed.t());
  CHECK(j["observed"]["s_sq"].get<double>() == res.observed.s_sq);
  CHECK(j["p_T"].get<double>() == res.p_T);
  CHECK(j["p_t"].get<double>() == res.p_t);

  BootstrapConfig rcfg;
  rcfg.method = Method::RDWB;
  rcfg.B = 49;
  const auto rres = urboot::rdwb_run(series, rcfg);
  const auto rj = to_json(rres);
  CHECK(rj["k_hat"].is_number_integer());
  CHECK(rj["k_hat"].get<int>() == *rres.k_hat);
}

TEST_CASE("method specs round trip through json") {
  MethodSpec m;
  m.method = Method::RDWB;
  m.bandwidth = Bandwidth::fixed(4);
  m.kernel = Kernel::Parzen;
  m.label = "rdwb-parzen";
  const auto j = to_json(m);
  const auto back = method_from_json(j);
  CHECK(back.method == m.method);
  CHECK(back.bandwidth == m.bandwidth);
  CHECK(back.kernel == m.kernel);
  CHECK(back.label == m.label);

  const auto plain = method_from_json({{"method", "dwb"}});
  CHECK(plain.method == Method::DWB);
  CHECK(plain.bandwidth == Bandwidth::deterministic());
  CHECK(plain.kernel == Kernel::Bartlett);
  CHECK(plain.label.empty());

  const auto mv = method_from_json({{"method", "dwb"}, {"bandwidth", "mv"}});
  CHECK(mv.bandwidth == Bandwidth::minimum_volatility());
  const auto fixed =
      method_from_json({{"method", "dwb"}, {"bandwidth", 6}});
  CHECK(fixed.bandwidth == Bandwidth::fixed(6));

  CHECK_THROWS_AS((void)method_from_json({{"bandwidth", 6}}),
                  urboot::ConfigError);
  CHECK_THROWS_AS(
      (void)method_from_json({{"method", "dwb"}, {"mystery", 1}}),
      urboot::ConfigError);
  CHECK_THROWS_AS(
      (void)method_from_json({{"method", "dwb"}, {"bandwidth", "wide"}}),
      urboot::ConfigError);
}

TEST_CASE("experiment specs round trip through json") {
  ExperimentSpec spec;
  spec.dgps = {DgpSpec(ErrorModel::MA, 2, 3, 100),
               DgpSpec(ErrorModel::AR, 1, 1, 400)};
  spec.c_grid = {0.0, -10.0};
  spec.methods = {MethodSpec{Method::DWB, Bandwidth::deterministic()},
                  MethodSpec{Method::RDWB, Bandwidth::fixed(6), Kernel::Parzen,
                             "rdwb6"}};
  spec.N = 250;
  spec.B = 199;
  spec.alpha = 0.1;
  spec.seed = 777;
  spec.trend = TrendSpec::linear();

  const auto j = to_json(spec);
  const auto back = experiment_from_json(j);
  CHECK(back.dgps.size() == 2);
  CHECK(back.dgps[0].model == ErrorModel::MA);
  CHECK(back.dgps[0].phi == 2);
  CHECK(back.dgps[0].omega == 3);
  CHECK(back.dgps[1].n == 400);
  CHECK(back.c_grid == spec.c_grid);
  CHECK(back.methods.size() == 2);
  CHECK(back.methods[1].label == "rdwb6");
  CHECK(back.methods[1].bandwidth == Bandwidth::fixed(6));
  CHECK(back.N == 250);
  CHECK(back.B == 199);
  CHECK(back.alpha == 0.1);
  CHECK(back.seed == 777);
  CHECK(back.trend == TrendSpec::linear());

  auto missing = j;
  missing.erase("seed");
  CHECK_THROWS_AS((void)experiment_from_json(missing), urboot::ConfigError);

  auto unknown = j;
  unknown["extra"] = 1;
  CHECK_THROWS_AS((void)experiment_from_json(unknown), urboot::ConfigError);

  auto bad_phi = j;
  bad_phi["dgps"][0]["phi"] = 7;
  try {
    (void)experiment_from_json(bad_phi);
    FAIL("expected ConfigError");
  } catch (const urboot::ConfigError& e) {
    CHECK(std::string(e.what()).find("phi") != std::string::npos);
  }

  auto bad_seed = j;
  bad_seed["seed"] = -1;
  CHECK_THROWS_AS((void)experiment_from_json(bad_seed), urboot::ConfigError);
}

TEST_CASE("rejection tables round trip bit-exactly") {
  ExperimentSpec spec;
  spec.dgps = {DgpSpec(ErrorModel::MA, 1, 1, 40)};
  spec.methods = {MethodSpec{Method::DWB, Bandwidth::fixed(2)},
                  MethodSpec{Method::RWB, Bandwidth::deterministic()}};
  spec.N = 7;
  spec.B = 19;
  spec.seed = 5;
  const auto table = run_size_experiment(spec, 2);

  std::ostringstream out;
  write_rejection_csv(table, out);
  const std::string text = out.str();
  CHECK(text.rfind("model,phi,omega,n,method,statistic,c,rate,failures\n",
                   0) == 0);
  CHECK(text.find("MA") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);

  // byte determinism
  std::ostringstream out2;
  write_rejection_csv(table, out2);
  CHECK(out2.str() == text);

  const std::string csv = temp_path("table.csv");
  const std::string meta = temp_path("table.meta.json");
  write_rejection_csv(table, csv);
  {
    std::ofstream m(meta);
    m << table_metadata(table).dump(2) << "\n";
  }
  const auto back = read_rejection_csv(csv, meta);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(back.rows[i].rate == table.rows[i].rate);
    CHECK(back.rows[i].c == table.rows[i].c);
    CHECK(back.rows[i].method == table.rows[i].method);
    CHECK(back.rows[i].statistic == table.rows[i].statistic);
    CHECK(back.rows[i].failures == table.rows[i].failures);
    CHECK(back.rows[i].flagged == table.rows[i].flagged);
    CHECK(urboot::dgp_name(back.rows[i].dgp) ==
          urboot::dgp_name(table.rows[i].dgp));
  }
  CHECK(back.spec.N == spec.N);
  CHECK(back.spec.seed == spec.seed);

  std::remove(csv.c_str());
  std::remove(meta.c_str());
}

TEST_CASE("metadata sidecar carries the experiment and diagnostics") {
  ExperimentSpec spec;
  spec.dgps = {DgpSpec(ErrorModel::MA, 1, 1, 40)};
  spec.methods = {MethodSpec{Method::RWB, Bandwidth::deterministic()}};
  spec.N = 5;
  spec.B = 19;
  spec.c_grid = {0.0, -5.0};
  const auto table = urboot::size_corrected_power(spec, 2);
  const auto meta = table_metadata(table);
  CHECK(meta.contains("experiment"));
  CHECK(meta.contains("diagnostics"));
  REQUIRE(meta["diagnostics"].size() == 2);
  CHECK(meta["diagnostics"][0].contains("critical_value"));
  CHECK(meta["diagnostics"][0].contains("alpha_corrected"));
  CHECK(meta["diagnostics"][0].contains("null_recheck_rate"));
}
