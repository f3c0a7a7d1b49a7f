#include "urboot/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace urboot {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
  const int workers = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(resolve_threads(threads)),
      count > 0 ? count : 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t bits_of(double v) {
  std::uint64_t b = 0;
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

std::uint64_t dgp_key(const DgpSpec& d) {
  return derive_stream(0x646770ULL,
                       {static_cast<std::uint64_t>(d.model),
                        static_cast<std::uint64_t>(d.phi),
                        static_cast<std::uint64_t>(d.omega),
                        static_cast<std::uint64_t>(d.n)});
}

std::uint64_t method_key(const MethodSpec& m, int B) {
  std::uint64_t h =
      derive_stream(0x6d6574ULL, {static_cast<std::uint64_t>(m.method),
                                  static_cast<std::uint64_t>(m.bandwidth.mode),
                                  static_cast<std::uint64_t>(m.bandwidth.value),
                                  static_cast<std::uint64_t>(m.kernel),
                                  static_cast<std::uint64_t>(B)});
  for (const char ch : m.effective_label()) {
    h = mix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(ch)));
  }
  return h;
}

void validate(const ExperimentSpec& spec) {
  if (spec.dgps.empty()) throw ConfigError("experiment needs at least one dgp");
  if (spec.methods.empty()) {
    throw ConfigError("experiment needs at least one method");
  }
  if (spec.c_grid.empty()) throw ConfigError("c_grid must be nonempty");
  for (const double c : spec.c_grid) {
    if (!(c <= 0.0)) {
      throw ConfigError("c_grid entries must be nonpositive, got " +
                        std::to_string(c));
    }
  }
  if (spec.N < 1) throw ConfigError("replication count N must be positive");
  if (spec.B < 1) throw ConfigError("replication count B must be positive");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1), got " +
                      std::to_string(spec.alpha));
  }
  std::set<std::string> labels;
  for (const MethodSpec& m : spec.methods) {
    if (!labels.insert(m.effective_label()).second) {
      throw ConfigError("duplicate method label '" + m.effective_label() +
                        "'; add explicit labels to distinguish entries");
    }
  }
  for (const DgpSpec& d : spec.dgps) {
    // revalidate through the checking constructor; templates ignore c
    (void)DgpSpec(d.model, d.phi, d.omega, d.n, 0.0);
  }
}

struct RepRecord {
  double T_obs = std::numeric_limits<double>::quiet_NaN();
  double t_obs = std::numeric_limits<double>::quiet_NaN();
  double p_T = std::numeric_limits<double>::quiet_NaN();
  double p_t = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd T_star;
  Eigen::VectorXd t_star;
  bool ok = false;
};

// grid[dgp][method][rep]
using PhaseGrid = std::vector<std::vector<std::vector<RepRecord>>>;

PhaseGrid run_phase(const ExperimentSpec& spec, double c, bool keep_samples,
                    int threads) {
  const std::size_t n_dgps = spec.dgps.size();
  const std::size_t n_methods = spec.methods.size();
  const std::size_t reps = static_cast<std::size_t>(spec.N);
  PhaseGrid grid(n_dgps);
  for (auto& per_method : grid) {
    per_method.assign(n_methods, std::vector<RepRecord>(reps));
  }

  parallel_for(n_dgps * reps, threads, [&](std::size_t task) {
    const std::size_t di = task / reps;
    const std::size_t rep = task % reps;
    const DgpSpec base = spec.dgps[di];
    const DgpSpec dgp(base.model, base.phi, base.omega, base.n, c);
    const std::uint64_t dk = dgp_key(dgp);
    Engine data_rng = make_engine(derive_stream(
        spec.seed, {stream_tag::data, dk, bits_of(c),
                    static_cast<std::uint64_t>(rep)}));
    const Eigen::VectorXd y = simulate_series(dgp, data_rng);

    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const MethodSpec& m = spec.methods[mi];
      RepRecord& rec = grid[di][mi][rep];
      try {
        ObservedSeries obs(y, spec.trend);
        BootstrapConfig cfg;
        cfg.method = m.method;
        cfg.bandwidth = m.bandwidth;
        cfg.kernel = m.kernel;
        cfg.B = spec.B;
        cfg.seed = derive_stream(
            spec.seed, {stream_tag::multipliers, dk, bits_of(c),
                        method_key(m, spec.B), static_cast<std::uint64_t>(rep)});
        BootstrapResult run = run_bootstrap(obs, cfg);
        rec.T_obs = run.observed.T;
        rec.t_obs = run.observed.t();
        rec.p_T = run.p_T;
        rec.p_t = run.p_t;
        if (keep_samples) {
          rec.T_star = std::move(run.T_star);
          rec.t_star = std::move(run.t_star);
        }
        rec.ok = true;
      } catch (const Error&) {
        rec.ok = false;
      }
    }
  });
  return grid;
}

constexpr Statistic kStatistics[] = {Statistic::Coefficient,
                                     Statistic::Studentized};

double observed_of(const RepRecord& rec, Statistic stat) {
  return stat == Statistic::Coefficient ? rec.T_obs : rec.t_obs;
}

double p_of(const RepRecord& rec, Statistic stat) {
  return stat == Statistic::Coefficient ? rec.p_T : rec.p_t;
}

const Eigen::VectorXd& sample_of(const RepRecord& rec, Statistic stat) {
  return stat == Statistic::Coefficient ? rec.T_star : rec.t_star;
}

int count_failures(const std::vector<RepRecord>& cell) {
  return static_cast<int>(
      std::count_if(cell.begin(), cell.end(),
                    [](const RepRecord& r) { return !r.ok; }));
}

RejectionRow make_row(const ExperimentSpec& spec, const DgpSpec& dgp,
                      const MethodSpec& method, Statistic stat, double c,
                      double rate, int failures) {
  RejectionRow row;
  row.dgp = DgpSpec(dgp.model, dgp.phi, dgp.omega, dgp.n, c);
  row.method = method.effective_label();
  row.statistic = stat;
  row.c = c;
  row.rate = rate;
  row.failures = failures;
  row.flagged = failures > 0.01 * spec.N;
  return row;
}

void report(const ProgressFn& progress, const RejectionRow& row) {
  if (!progress) return;
  std::ostringstream line;
  line << "cell " << dgp_name(row.dgp) << " method=" << row.method
       << " statistic=" << to_string(row.statistic) << " c=" << row.c
       << " rate=" << row.rate << " failures=" << row.failures;
  progress(line.str());
}

}  // namespace

RejectionTable run_size_experiment(const ExperimentSpec& spec, int threads,
                                   const ProgressFn& progress) {
  validate(spec);
  RejectionTable table;
  table.spec = spec;

  std::vector<PhaseGrid> grids;
  grids.reserve(spec.c_grid.size());
  for (const double c : spec.c_grid) {
    grids.push_back(run_phase(spec, c, false, threads));
  }

  for (std::size_t di = 0; di < spec.dgps.size(); ++di) {
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      for (const Statistic stat : kStatistics) {
        for (std::size_t ci = 0; ci < spec.c_grid.size(); ++ci) {
          const std::vector<RepRecord>& cell = grids[ci][di][mi];
          const int rejections = static_cast<int>(std::count_if(
              cell.begin(), cell.end(), [&](const RepRecord& r) {
                return r.ok && p_of(r, stat) < spec.alpha;
              }));
          const double rate =
              static_cast<double>(rejections) / static_cast<double>(spec.N);
          table.rows.push_back(make_row(spec, spec.dgps[di], spec.methods[mi],
                                        stat, spec.c_grid[ci], rate,
                                        count_failures(cell)));
          report(progress, table.rows.back());
        }
      }
    }
  }
  return table;
}

double infeasible_critical_value(
    const Eigen::Ref<const Eigen::VectorXd>& null_stats, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1), got " +
                      std::to_string(alpha));
  }
  return bootstrap_quantile(null_stats, alpha);
}

RejectionTable size_corrected_power(const ExperimentSpec& spec, int threads,
                                    const ProgressFn& progress) {
  validate(spec);
  if (std::find(spec.c_grid.begin(), spec.c_grid.end(), 0.0) ==
      spec.c_grid.end()) {
    throw ConfigError("size-corrected power needs 0 in c_grid (size row)");
  }

  RejectionTable table;
  table.spec = spec;

  const PhaseGrid stage1 = run_phase(spec, 0.0, true, threads);

  // corrected level per (dgp, method, statistic)
  std::vector<std::vector<std::array<double, 2>>> alpha_c(
      spec.dgps.size(),
      std::vector<std::array<double, 2>>(spec.methods.size()));
  for (std::size_t di = 0; di < spec.dgps.size(); ++di) {
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      const std::vector<RepRecord>& cell = stage1[di][mi];
      std::vector<const RepRecord*> good;
      good.reserve(cell.size());
      for (const RepRecord& r : cell) {
        if (r.ok) good.push_back(&r);
      }
      if (good.empty()) {
        throw DegenerateBootstrap(
            "every stage-1 replication failed for dgp " +
            dgp_name(spec.dgps[di]) + " method " +
            spec.methods[mi].effective_label());
      }
      for (std::size_t si = 0; si < 2; ++si) {
        const Statistic stat = kStatistics[si];
        Eigen::VectorXd null_stats(static_cast<Eigen::Index>(good.size()));
        for (std::size_t i = 0; i < good.size(); ++i) {
          null_stats[static_cast<Eigen::Index>(i)] = observed_of(*good[i], stat);
        }
        const double l_hat = infeasible_critical_value(null_stats, spec.alpha);
        double mass = 0.0;
        double recheck = 0.0;
        for (const RepRecord* r : good) {
          const double a_i = p_value(sample_of(*r, stat), l_hat);
          mass += a_i;
        }
        const double corrected = mass / static_cast<double>(good.size());
        for (const RepRecord* r : good) {
          const double q =
              bootstrap_quantile(sample_of(*r, stat), corrected);
          if (observed_of(*r, stat) < q) recheck += 1.0;
        }
        alpha_c[di][mi][si] = corrected;

        PowerDiagnostics diag;
        diag.dgp = dgp_name(spec.dgps[di]);
        diag.method = spec.methods[mi].effective_label();
        diag.statistic = stat;
        diag.critical_value = l_hat;
        diag.alpha_corrected = corrected;
        diag.null_recheck_rate = recheck / static_cast<double>(good.size());
        table.diagnostics.push_back(diag);
      }
    }
  }

  // stage 2: fresh replications per c < 0, rejection against the corrected
  // level quantile of each replication's own bootstrap sample
  std::vector<PhaseGrid> stage2(spec.c_grid.size());
  for (std::size_t ci = 0; ci < spec.c_grid.size(); ++ci) {
    if (spec.c_grid[ci] < 0.0) {
      stage2[ci] = run_phase(spec, spec.c_grid[ci], true, threads);
    }
  }

  for (std::size_t di = 0; di < spec.dgps.size(); ++di) {
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      for (std::size_t si = 0; si < 2; ++si) {
        const Statistic stat = kStatistics[si];
        for (std::size_t ci = 0; ci < spec.c_grid.size(); ++ci) {
          const double c = spec.c_grid[ci];
          if (c == 0.0) {
            const std::vector<RepRecord>& cell = stage1[di][mi];
            const int rejections = static_cast<int>(std::count_if(
                cell.begin(), cell.end(), [&](const RepRecord& r) {
                  return r.ok && p_of(r, stat) < spec.alpha;
                }));
            const double rate =
                static_cast<double>(rejections) / static_cast<double>(spec.N);
            table.rows.push_back(make_row(spec, spec.dgps[di],
                                          spec.methods[mi], stat, c, rate,
                                          count_failures(cell)));
          } else {
            const std::vector<RepRecord>& cell = stage2[ci][di][mi];
            const double corrected = alpha_c[di][mi][si];
            const int rejections = static_cast<int>(std::count_if(
                cell.begin(), cell.end(), [&](const RepRecord& r) {
                  return r.ok &&
                         observed_of(r, stat) <
                             bootstrap_quantile(sample_of(r, stat), corrected);
                }));
            const double rate =
                static_cast<double>(rejections) / static_cast<double>(spec.N);
            table.rows.push_back(make_row(spec, spec.dgps[di],
                                          spec.methods[mi], stat, c, rate,
                                          count_failures(cell)));
          }
          report(progress, table.rows.back());
        }
      }
    }
  }
  return table;
}

}  // namespace urboot
