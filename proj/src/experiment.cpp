// SPDX-License-Identifier: Apache-2.0

#include "tdsc/experiment.hpp"

#include "tdsc/rng.hpp"
#include "tdsc/theory.hpp"

#include <boost/random/uniform_real_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace tdsc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kLteSymbolsPerSlot = 7;

std::size_t default_fft_size(Standard s) { return s == Standard::WiMAX ? 1024 : 1536; }

std::size_t lte_used_subcarriers(std::size_t fft_size) {
  switch (fft_size) {
    case 128: return 72;
    case 256: return 180;
    case 512: return 300;
    case 1024: return 600;
    case 1536: return 900;
    case 2048: return 1200;
    default: throw std::invalid_argument("lte: no default used_subcarriers for this FFT size");
  }
}

struct Resolved {
  std::size_t fft_size;
  std::size_t used;
  double rho;
};

Resolved resolve(const ExperimentConfig& cfg) {
  Resolved r{};
  r.fft_size = cfg.fft_size ? cfg.fft_size : default_fft_size(cfg.standard);
  if (cfg.used_subcarriers) {
    r.used = cfg.used_subcarriers;
  } else {
    r.used = cfg.standard == Standard::WiMAX ? wimax_used_subcarriers(r.fft_size)
                                             : lte_used_subcarriers(r.fft_size);
  }
  const double boost_db = std::isnan(cfg.pilot_boost_db)
                              ? (cfg.standard == Standard::WiMAX ? kWimaxPilotBoostDb : 0.0)
                              : cfg.pilot_boost_db;
  r.rho = std::pow(10.0, boost_db / 20.0);
  return r;
}

PilotPattern make_pattern(const ExperimentConfig& cfg, const Resolved& r) {
  const auto occupied = centered_occupancy(r.fft_size, r.used);
  if (cfg.standard == Standard::WiMAX) {
    PilotPattern p = wimax_pattern(r.fft_size, r.rho);
    return r.used == wimax_used_subcarriers(r.fft_size) ? p : restrict_to(p, occupied);
  }
  return restrict_to(lte_pattern(r.fft_size, kLteSymbolsPerSlot, cfg.cell_id, r.rho), occupied);
}

std::size_t pattern_period(Standard s) { return s == Standard::WiMAX ? 2 : kLteSymbolsPerSlot; }

std::size_t symbol_len(const ExperimentConfig& cfg, const Resolved& r) {
  const double cp = cfg.cp_ratio * static_cast<double>(r.fft_size);
  return r.fft_size + static_cast<std::size_t>(std::llround(cp));
}

}  // namespace

std::size_t accumulation_length(std::size_t count, std::size_t v, std::size_t period) {
  if (period == 0) throw std::invalid_argument("accumulation_length: zero period");
  if (count < v + period)
    throw std::invalid_argument("sensing window holds " + std::to_string(count) +
                                " symbols, fewer than v + A = " + std::to_string(v + period));
  return (count - v) / period * period;
}

std::size_t symbols_in_window(const ExperimentConfig& cfg) {
  const Resolved r = resolve(cfg);
  const std::size_t m = symbol_len(cfg, r);
  const auto count = static_cast<std::size_t>(
      std::floor(cfg.sensing_time * cfg.sample_rate / static_cast<double>(m) + 1e-9));
  const std::size_t period = pattern_period(cfg.standard);
  accumulation_length(count, cfg.v ? cfg.v : period, period);  // throws if too short
  return count;
}

double Scenario::noise_power(double snr_db) const {
  return noise_power_for_snr(signal_power, snr_db, snr_bandwidth);
}

double Scenario::sigma_h0_sq(double snr_db) const { return tdsc::sigma_h0_sq(noise_power(snr_db), tdsc); }

double Scenario::pmd_theory(double snr_db) const {
  if (!lambda_mean) return kNaN;
  const double s2 = sigma_h0_sq(snr_db);
  return pmd_analytic(threshold(s2, config.p_fa), make_hypothesis(s2, *lambda_mean));
}

double Scenario::pd_theory(double snr_db, double p_fa) const {
  if (!lambda_mean) return kNaN;
  const double s2 = sigma_h0_sq(snr_db);
  return 1.0 - pmd_analytic(threshold(s2, p_fa), make_hypothesis(s2, *lambda_mean));
}

Scenario make_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  const Resolved r = resolve(cfg);
  PilotPattern pattern = make_pattern(cfg, r);
  const OfdmConfig ofdm = make_ofdm_config(r.fft_size, cfg.cp_ratio, cfg.sample_rate, cfg.rolloff, r.used);
  const std::size_t count = symbols_in_window(cfg);
  const std::size_t v = cfg.v ? cfg.v : pattern.period();
  const TdscConfig tdsc = make_tdsc_config(ofdm, v, accumulation_length(count, v, pattern.period()));
  tdsc.validate(pattern.period());

  ChannelProfile channel = profile_by_name(cfg.channel, cfg.k_factor_db);
  const double guard = 2.0 * ReceiveFilter::kDefaultTransition * cfg.sample_rate;
  const double passband = std::min(1.0, (ofdm.occupied_bandwidth() + guard) / cfg.sample_rate);

  std::optional<double> lambda;
  if (channel.single_path() && channel.fading == FadingKind::Static) {
    const double gain2 = channel.normalized_powers()(0);
    const ComplexVector h = ComplexVector::Constant(static_cast<Eigen::Index>(r.fft_size), std::sqrt(gain2));
    lambda = lambda_mean(h, pattern);
  }

  const double power = nominal_symbol_power(ofdm, pattern);
  const double bandwidth = ofdm.occupied_bandwidth() / cfg.sample_rate;
  return Scenario{cfg,   ofdm,  std::move(pattern),       std::move(channel), tdsc, count,
                  power, bandwidth, ReceiveFilter(passband), lambda};
}

std::uint64_t trial_seed(std::uint64_t master, Hypothesis hypothesis, std::size_t snr_index,
                         std::size_t trial) {
  return derive_seed({master, static_cast<std::uint64_t>(hypothesis), snr_index, trial});
}

DetectionResult run_trial(const Scenario& sc, double snr_db, Hypothesis hypothesis, std::uint64_t seed) {
  const std::size_t m = sc.ofdm.symbol_len();
  const double sigma2 = sc.noise_power(snr_db);

  ComplexVector samples;
  if (hypothesis == Hypothesis::H1) {
    Baseband bb = build_burst(sc.ofdm, sc.pattern, sc.num_symbols, seed);
    const bool passthrough = sc.channel.single_path() && sc.channel.fading == FadingKind::Static &&
                             sc.channel.taps[0].delay == 0.0;
    if (!passthrough) bb = apply_multipath(bb, sc.channel, seed);
    Engine phase_engine(derive_seed(seed, Stream::Phase));
    const double phase = boost::random::uniform_real_distribution<double>(-kPi, kPi)(phase_engine);
    apply_cfo_phase_inplace(bb.samples, sc.config.cfo_normalized, phase, sc.ofdm.num_subcarriers);
    sc.filter.apply(bb.samples);
    samples = std::move(bb.samples);
  } else {
    samples = ComplexVector::Zero(static_cast<Eigen::Index>(sc.num_symbols * m));
  }

  IndexList starts(sc.num_symbols);
  for (std::size_t l = 0; l < sc.num_symbols; ++l) starts[l] = l * m;

  // The noise is white, so only the correlation windows need it.
  Engine noise_engine(derive_seed(seed, Stream::Noise));
  const std::size_t used_symbols = sc.tdsc.v + sc.tdsc.s_v;
  for (std::size_t l = 0; l < used_symbols; ++l) {
    const auto begin = static_cast<Eigen::Index>(starts[l] + sc.tdsc.cp_skip);
    add_complex_gaussian(samples, begin, begin + static_cast<Eigen::Index>(sc.tdsc.N), sigma2, noise_engine);
  }
  return sense(samples, starts, sc.tdsc, sc.pattern, sigma2, sc.config.p_fa);
}

DetectionResult run_trial(const ExperimentConfig& cfg, double snr_db, Hypothesis hypothesis,
                          std::uint64_t seed) {
  return run_trial(make_scenario(cfg), snr_db, hypothesis, seed);
}

std::size_t resolve_workers(std::size_t requested) {
  if (requested) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::min(std::max<std::size_t>(workers, 1), std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto work = [&] {
    for (std::size_t i; !failed.load(std::memory_order_relaxed) && (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

StatisticPool simulate_pool(const Scenario& sc, std::size_t snr_index) {
  const std::size_t trials = sc.config.trials;
  const double snr = sc.config.snr_db_list.at(snr_index);
  StatisticPool pool{std::vector<double>(trials), std::vector<double>(trials)};
  parallel_for(2 * trials, resolve_workers(sc.config.workers), [&](std::size_t i) {
    const Hypothesis hyp = i % 2 ? Hypothesis::H0 : Hypothesis::H1;
    const std::size_t t = i / 2;
    const double stat = run_trial(sc, snr, hyp, trial_seed(sc.config.seed, hyp, snr_index, t)).statistic;
    (hyp == Hypothesis::H0 ? pool.h0 : pool.h1)[t] = stat;
  });
  return pool;
}

double wilson_halfwidth(std::size_t hits, std::size_t n) {
  if (n == 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  return z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / (1.0 + z * z / nn);
}

namespace {

std::size_t count_at_least(const std::vector<double>& xs, double gamma) {
  return static_cast<std::size_t>(std::count_if(xs.begin(), xs.end(), [&](double x) { return x >= gamma; }));
}

void check_grid(const std::vector<double>& pfa_grid) {
  if (pfa_grid.empty()) throw std::invalid_argument("roc: empty p_fa grid");
  for (double p : pfa_grid)
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("roc: p_fa grid values must lie in (0, 1]");
}

}  // namespace

CurvePoint curve_point(const Scenario& sc, std::size_t snr_index, const StatisticPool& pool) {
  const double snr = sc.config.snr_db_list.at(snr_index);
  const double gamma = threshold(sc.sigma_h0_sq(snr), sc.config.p_fa);
  const std::size_t trials = pool.h1.size();
  const std::size_t misses = trials - count_at_least(pool.h1, gamma);
  const double n = static_cast<double>(trials);
  return {snr,
          static_cast<double>(misses) / n,
          sc.pmd_theory(snr),
          static_cast<double>(count_at_least(pool.h0, gamma)) / static_cast<double>(pool.h0.size()),
          trials,
          wilson_halfwidth(misses, trials)};
}

std::vector<RocPoint> roc_points(const Scenario& sc, std::size_t snr_index, const StatisticPool& pool,
                                 const std::vector<double>& pfa_grid) {
  check_grid(pfa_grid);
  const double snr = sc.config.snr_db_list.at(snr_index);
  const double s2 = sc.sigma_h0_sq(snr);
  std::vector<RocPoint> out;
  for (double p : pfa_grid) {
    const double gamma = threshold(s2, p);
    out.push_back({snr, p, static_cast<double>(count_at_least(pool.h0, gamma)) / static_cast<double>(pool.h0.size()),
                   static_cast<double>(count_at_least(pool.h1, gamma)) / static_cast<double>(pool.h1.size()),
                   sc.pd_theory(snr, p)});
  }
  return out;
}

std::vector<CurvePoint> sweep_snr(const ExperimentConfig& cfg, const CurveSink& sink) {
  const Scenario sc = make_scenario(cfg);
  std::vector<CurvePoint> out;
  for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i) {
    out.push_back(curve_point(sc, i, simulate_pool(sc, i)));
    if (sink) sink(out.back());
  }
  return out;
}

std::vector<RocPoint> sweep_roc(const ExperimentConfig& cfg, const std::vector<double>& pfa_grid,
                                const RocSink& sink) {
  check_grid(pfa_grid);
  const Scenario sc = make_scenario(cfg);
  std::vector<RocPoint> out;
  for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i)
    for (const RocPoint& point : roc_points(sc, i, simulate_pool(sc, i), pfa_grid)) {
      out.push_back(point);
      if (sink) sink(point);
    }
  return out;
}

}  // namespace tdsc
