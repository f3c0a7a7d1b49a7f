#include "urboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

namespace urboot {

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::DWB: return "dwb";
    case Method::RWB: return "rwb";
    case Method::RDWB: return "rdwb";
  }
  return "?";
}

double p_value(const Eigen::Ref<const Eigen::VectorXd>& sample,
               double observed) {
  if (sample.size() == 0) throw ConfigError("p_value needs a nonempty sample");
  const Eigen::Index below = (sample.array() < observed).count();
  return static_cast<double>(below) / static_cast<double>(sample.size());
}

double bootstrap_quantile(const Eigen::Ref<const Eigen::VectorXd>& sample,
                          double alpha) {
  const Eigen::Index size = sample.size();
  if (size == 0) throw ConfigError("quantile of an empty sample");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("quantile level must lie in [0, 1], got " +
                      std::to_string(alpha));
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  auto idx = static_cast<Eigen::Index>(
      std::ceil(alpha * static_cast<double>(size)));
  idx = std::clamp<Eigen::Index>(idx, 1, size);
  return sorted[static_cast<std::size_t>(idx - 1)];
}

int default_bandwidth(Eigen::Index n) {
  if (n < 16) {
    throw ConfigError("bandwidth rule needs n >= 16, got " +
                      std::to_string(n));
  }
  const int l = static_cast<int>(
      std::floor(6.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
  return std::max(l, 1);
}

double ks_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw ConfigError("KS distance needs two nonempty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double dist = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (i < sa.size() && j < sb.size()) {
      x = std::min(sa[i], sb[j]);
    } else if (i < sa.size()) {
      x = sa[i];
    } else {
      x = sb[j];
    }
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    dist = std::max(dist, std::fabs(static_cast<double>(i) / na -
                                    static_cast<double>(j) / nb));
  }
  return dist;
}

std::vector<int> default_mv_candidates(Eigen::Index n) {
  if (n < 16) {
    throw ConfigError("candidate rule needs n >= 16, got " +
                      std::to_string(n));
  }
  const int top = static_cast<int>(std::floor(
                      12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))) +
                  1;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(top));
  for (int l = 1; l <= top; ++l) out.push_back(l);
  return out;
}

Eigen::VectorXd recolor_cumulate(const Eigen::Ref<const Eigen::VectorXd>& u_star,
                                 const Eigen::Ref<const Eigen::VectorXd>& pi) {
  const Eigen::Index M = u_star.size();
  const Eigen::Index k = pi.size();
  Eigen::VectorXd xi(M);
  if (k == 0) {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < M; ++t) {
      acc += u_star[t];
      xi[t] = acc;
    }
    return xi;
  }
  // delta[t] = xi_t - xi_{t-1} with xi_0 = 0; the first k observations are
  // seeded with the perturbed residuals, the recursion takes over after.
  Eigen::VectorXd delta(M);
  const Eigen::Index seed_len = std::min(k, M);
  for (Eigen::Index t = 0; t < seed_len; ++t) {
    xi[t] = u_star[t];
    delta[t] = t == 0 ? xi[t] : xi[t] - xi[t - 1];
  }
  for (Eigen::Index t = k; t < M; ++t) {
    double d = u_star[t];
    for (Eigen::Index i = 1; i <= k; ++i) {
      d += pi[i - 1] * delta[t - i];
    }
    delta[t] = d;
    xi[t] = xi[t - 1] + d;
  }
  if (!xi.allFinite()) {
    std::ostringstream msg;
    msg << "recoloring recursion produced non-finite values; pi =";
    for (Eigen::Index i = 0; i < k; ++i) msg << ' ' << pi[i];
    throw UnstableRecoloring(msg.str());
  }
  return xi;
}

namespace {

struct Prepared {
  Eigen::VectorXd u;          // residuals to perturb, length M
  Eigen::VectorXd pi;         // recoloring coefficients, empty for DWB
  Eigen::VectorXd trend_fit;  // fitted trend on the re-based index, length M
  TrendSpec trend;
  int l = 0;
};

void check_rwb_bandwidth(const BootstrapConfig& config) {
  if (config.method != Method::RWB) return;
  switch (config.bandwidth.mode) {
    case Bandwidth::Mode::Deterministic:
      return;
    case Bandwidth::Mode::Fixed:
      if (config.bandwidth.value != 1) {
        throw ConfigError(
            "rwb uses iid multipliers; only bandwidth 1 is allowed");
      }
      return;
    case Bandwidth::Mode::MinimumVolatility:
      throw ConfigError("rwb has no bandwidth to select");
  }
}

int resolve_bandwidth(const ObservedSeries& series,
                      const BootstrapConfig& config) {
  if (config.method == Method::RWB) return 1;
  switch (config.bandwidth.mode) {
    case Bandwidth::Mode::Fixed:
      return config.bandwidth.value;
    case Bandwidth::Mode::Deterministic:
      return default_bandwidth(series.values.size());
    case Bandwidth::Mode::MinimumVolatility:
      return mv_select_bandwidth(series, config,
                                 default_mv_candidates(series.values.size()))
          .l_selected;
  }
  throw ConfigError("unknown bandwidth mode");
}

BootstrapResult run_impl(const ObservedSeries& series,
                         const BootstrapConfig& config,
                         const MultiplierSource& source) {
  if (config.B < 1) {
    throw ConfigError("replication count B must be positive");
  }
  check_rwb_bandwidth(config);

  const DetrendedSeries det = ols_detrend(series);
  const UnitRootStats observed = unit_root_statistics(det.x);
  const double observed_t = observed.t();

  Prepared prep;
  prep.trend = series.trend;
  std::optional<int> k_hat;
  if (config.method == Method::DWB) {
    prep.u = ar1_residuals(det.x, observed.rho_hat);
  } else {
    const MaicSelection sel = maic_select(det.x);
    k_hat = sel.k_hat;
    prep.u = sel.fit.residuals;
    prep.pi = sel.fit.pi;
  }
  const Eigen::Index M = prep.u.size();

  const int l = resolve_bandwidth(series, config);
  if (l < 1 || l >= M) {
    throw ConfigError("bandwidth l = " + std::to_string(l) +
                      " must satisfy 1 <= l < " + std::to_string(M) +
                      " (residual count)");
  }
  prep.l = l;

  if (series.trend.is_none()) {
    prep.trend_fit = Eigen::VectorXd::Zero(M);
  } else {
    prep.trend_fit = build_trend_matrix(series.trend, M) * det.beta;
  }

  Eigen::VectorXd T_buf(config.B);
  Eigen::VectorXd t_buf(config.B);
  std::vector<char> ok(static_cast<std::size_t>(config.B), 0);
  int failures = 0;
  for (int b = 0; b < config.B; ++b) {
    Engine rng = make_engine(derive_stream(
        config.seed,
        {stream_tag::replication, static_cast<std::uint64_t>(b)}));
    try {
      const Eigen::VectorXd w = source.generate(M, l, config.kernel, rng);
      const Eigen::VectorXd u_star = prep.u.cwiseProduct(w);
      Eigen::VectorXd y_star =
          prep.trend_fit + recolor_cumulate(u_star, prep.pi);
      ObservedSeries boot(std::move(y_star), prep.trend);
      const DetrendedSeries bdet = ols_detrend(boot);
      const UnitRootStats bstats = unit_root_statistics(bdet.x);
      T_buf[b] = bstats.T;
      t_buf[b] = bstats.t();
      ok[static_cast<std::size_t>(b)] = 1;
    } catch (const UnstableRecoloring&) {
      throw;  // systematic, every replication would explode the same way
    } catch (const NumericalError&) {
      ++failures;
    } catch (const DataError&) {
      ++failures;
    }
  }
  if (static_cast<double>(failures) > 0.01 * config.B) {
    throw DegenerateBootstrap(std::to_string(failures) + " of " +
                              std::to_string(config.B) +
                              " bootstrap replications failed");
  }

  BootstrapResult result;
  result.method = config.method;
  result.l_used = l;
  result.k_hat = k_hat;
  result.B = config.B;
  result.observed = observed;
  result.failures = failures;
  const Eigen::Index kept = config.B - failures;
  result.T_star.resize(kept);
  result.t_star.resize(kept);
  Eigen::Index out = 0;
  for (int b = 0; b < config.B; ++b) {
    if (!ok[static_cast<std::size_t>(b)]) continue;
    result.T_star[out] = T_buf[b];
    result.t_star[out] = t_buf[b];
    ++out;
  }
  result.p_T = p_value(result.T_star, observed.T);
  result.p_t = p_value(result.t_star, observed_t);
  return result;
}

}  // namespace

BootstrapResult dwb_run(const ObservedSeries& series,
                        const BootstrapConfig& config,
                        const MultiplierSource& source) {
  if (config.method != Method::DWB) {
    throw ConfigError("dwb_run requires config.method == DWB");
  }
  return run_impl(series, config, source);
}

BootstrapResult dwb_run(const ObservedSeries& series,
                        const BootstrapConfig& config) {
  return dwb_run(series, config, GaussianMultiplierSource{});
}

BootstrapResult rdwb_run(const ObservedSeries& series,
                         const BootstrapConfig& config,
                         const MultiplierSource& source) {
  if (config.method != Method::RWB && config.method != Method::RDWB) {
    throw ConfigError("rdwb_run requires config.method == RWB or RDWB");
  }
  return run_impl(series, config, source);
}

BootstrapResult rdwb_run(const ObservedSeries& series,
                         const BootstrapConfig& config) {
  return rdwb_run(series, config, GaussianMultiplierSource{});
}

BootstrapResult run_bootstrap(const ObservedSeries& series,
                              const BootstrapConfig& config,
                              const MultiplierSource& source) {
  return config.method == Method::DWB ? dwb_run(series, config, source)
                                      : rdwb_run(series, config, source);
}

BootstrapResult run_bootstrap(const ObservedSeries& series,
                              const BootstrapConfig& config) {
  return run_bootstrap(series, config, GaussianMultiplierSource{});
}

MvSelection mv_select_bandwidth(const ObservedSeries& series,
                                const BootstrapConfig& config,
                                std::vector<int> candidates, Statistic stat) {
  if (config.method == Method::RWB) {
    throw ConfigError("rwb has no bandwidth to select");
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  if (candidates.size() < 2) {
    throw ConfigError(
        "minimum volatility selection needs at least 2 distinct candidates");
  }

  MvSelection sel;
  std::vector<Eigen::VectorXd> samples;
  for (int l : candidates) {
    BootstrapConfig candidate = config;
    try {
      candidate.bandwidth = Bandwidth::fixed(l);
      BootstrapResult run = config.method == Method::DWB
                                ? dwb_run(series, candidate)
                                : rdwb_run(series, candidate);
      sel.candidates.push_back(l);
      samples.push_back(stat == Statistic::Coefficient ? std::move(run.T_star)
                                                       : std::move(run.t_star));
    } catch (const Error&) {
      sel.dropped.push_back(l);
    }
  }
  if (sel.candidates.size() < 2) {
    throw NumericalError(
        "fewer than two bandwidth candidates produced a usable bootstrap "
        "sample");
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    sel.distances.push_back(ks_distance(samples[i], samples[i + 1]));
    if (sel.distances[i] < sel.distances[best]) best = i;
  }
  sel.l_selected = sel.candidates[best];
  return sel;
}

}  // namespace urboot
