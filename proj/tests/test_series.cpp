#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "urboot/errors.hpp"
#include "urboot/series.hpp"

using urboot::build_trend_matrix;
using urboot::ObservedSeries;
using urboot::ols_detrend;
using urboot::TrendSpec;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double v : values) out[i++] = v;
  return out;
}

}  // namespace

TEST_CASE("trend spec factories and accessors") {
  CHECK(TrendSpec::none().is_none());
  CHECK(TrendSpec::none().regressor_count() == 0);
  CHECK_THROWS_AS((void)TrendSpec::none().degree(), urboot::ConfigError);

  CHECK(TrendSpec::constant().degree() == 0);
  CHECK(TrendSpec::constant().regressor_count() == 1);
  CHECK(TrendSpec::linear().degree() == 1);
  CHECK(TrendSpec::linear().regressor_count() == 2);
  CHECK(TrendSpec::polynomial(5).regressor_count() == 6);

  CHECK(TrendSpec::constant() == TrendSpec::polynomial(0));
  CHECK(TrendSpec::linear() != TrendSpec::constant());
  CHECK(TrendSpec::none() != TrendSpec::constant());

  CHECK_THROWS_AS((void)TrendSpec::polynomial(-1), urboot::ConfigError);
  CHECK_THROWS_AS((void)TrendSpec::polynomial(6), urboot::ConfigError);
}

TEST_CASE("trend matrix holds raw powers of t = 1..m") {
  const Eigen::MatrixXd z = build_trend_matrix(TrendSpec::linear(), 4);
  REQUIRE(z.rows() == 4);
  REQUIRE(z.cols() == 2);
  CHECK(z.col(0).isApprox(vec({1, 1, 1, 1})));
  CHECK(z.col(1).isApprox(vec({1, 2, 3, 4})));

  const Eigen::MatrixXd q = build_trend_matrix(TrendSpec::polynomial(2), 3);
  CHECK(q(2, 2) == 9.0);
  CHECK(q(1, 2) == 4.0);

  CHECK(build_trend_matrix(TrendSpec::none(), 5).cols() == 0);
  CHECK(build_trend_matrix(TrendSpec::none(), 5).rows() == 5);
}

TEST_CASE("constant detrend subtracts the sample mean") {
  // mean of (1, 2, 2, 4, 3) is 12/5 = 2.4
  const ObservedSeries series(vec({1, 2, 2, 4, 3}), TrendSpec::constant());
  const auto fit = ols_detrend(series);
  REQUIRE(fit.beta.size() == 1);
  CHECK(fit.beta[0] == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(fit.x.isApprox(vec({-1.4, -0.4, -0.4, 1.6, 0.6}), 1e-12));
}

TEST_CASE("none trend passes values through untouched") {
  const ObservedSeries series(vec({1, 2, 2, 4, 3}), TrendSpec::none());
  const auto fit = ols_detrend(series);
  CHECK(fit.beta.size() == 0);
  CHECK(fit.x == series.values);
}

TEST_CASE("residuals are orthogonal to the trend columns") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::VectorXd y(60);
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    y[t] = 0.3 * static_cast<double>(t + 1) + normal(rng);
  }
  const ObservedSeries series(y, TrendSpec::linear());
  const auto fit = ols_detrend(series);
  const Eigen::MatrixXd z = build_trend_matrix(series.trend, y.size());
  CHECK((z.transpose() * fit.x).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("detrending is idempotent and removes spanned trends exactly") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  Eigen::VectorXd noise(50);
  for (Eigen::Index t = 0; t < noise.size(); ++t) noise[t] = normal(rng);

  const auto base = ols_detrend(ObservedSeries(noise, TrendSpec::linear()));
  const auto again = ols_detrend(ObservedSeries(base.x, TrendSpec::linear()));
  CHECK((again.x - base.x).cwiseAbs().maxCoeff() < 1e-10);

  // Adding any vector in the span of the regressors must not change x.
  const Eigen::MatrixXd z = build_trend_matrix(TrendSpec::linear(), 50);
  const Eigen::VectorXd shifted = noise + z * vec({5.0, -2.5});
  const auto moved = ols_detrend(ObservedSeries(shifted, TrendSpec::linear()));
  CHECK((moved.x - base.x).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("series validation enforces length and finiteness") {
  CHECK_THROWS_AS(ObservedSeries(vec({1, 2, 3}), TrendSpec::none()),
                  urboot::InsufficientData);
  // p = 2 for a linear trend, so m = 6 is the shortest legal series.
  CHECK_NOTHROW(ObservedSeries(vec({1, 2, 3, 4, 5, 6}), TrendSpec::linear()));
  CHECK_THROWS_AS(ObservedSeries(vec({1, 2, 3, 4, 5}), TrendSpec::linear()),
                  urboot::InsufficientData);

  Eigen::VectorXd bad = vec({1, 2, 3, 4, 5});
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ObservedSeries(bad, TrendSpec::none()), urboot::DataError);
  bad[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ObservedSeries(bad, TrendSpec::none()), urboot::DataError);
}

TEST_CASE("zero series detrends to zero") {
  const ObservedSeries ok(vec({0, 0, 0, 0, 0}), TrendSpec::constant());
  const auto fit = ols_detrend(ok);
  CHECK(fit.x.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.beta[0] == 0.0);
}
