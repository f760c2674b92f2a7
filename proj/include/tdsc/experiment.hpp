// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/channel.hpp"
#include "tdsc/config.hpp"
#include "tdsc/detector.hpp"
#include "tdsc/pilot_grid.hpp"
#include "tdsc/waveform.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace tdsc {

/// Everything a trial needs, resolved once per configuration.
///
/// The sensed stream is a continuous downlink burst of `num_symbols` symbols.
/// SNR is in-band: nominal symbol power over the noise power falling in the
/// occupied bandwidth.
struct Scenario {
  ExperimentConfig config;
  OfdmConfig ofdm;
  PilotPattern pattern;
  ChannelProfile channel;
  TdscConfig tdsc;
  std::size_t num_symbols = 0;
  double signal_power = 0.0;   // per sample
  double snr_bandwidth = 1.0;  // occupied bandwidth / sample rate
  ReceiveFilter filter;
  std::optional<double> lambda_mean;  // set for single-path static channels only

  double noise_power(double snr_db) const;
  double sigma_h0_sq(double snr_db) const;
  /// NaN when the channel has no theory overlay.
  double pmd_theory(double snr_db) const;
  double pd_theory(double snr_db, double p_fa) const;
};

Scenario make_scenario(const ExperimentConfig& cfg);

/// floor(sensing_time * sample_rate / M). Throws if fewer than v + A symbols fit.
std::size_t symbols_in_window(const ExperimentConfig& cfg);
/// Largest multiple of the pilot period not exceeding count - v.
std::size_t accumulation_length(std::size_t count, std::size_t v, std::size_t period);

/// Seed of trial t at SNR index snr_index.
std::uint64_t trial_seed(std::uint64_t master, Hypothesis hypothesis, std::size_t snr_index,
                         std::size_t trial);

/// One sensing decision. H1: burst -> multipath -> CFO/phase -> filter -> AWGN.
/// H0: the same noise on an empty stream. Noise outside the correlation
/// windows cannot reach the statistic and is not drawn.
DetectionResult run_trial(const Scenario& scenario, double snr_db, Hypothesis hypothesis,
                          std::uint64_t seed);
DetectionResult run_trial(const ExperimentConfig& cfg, double snr_db, Hypothesis hypothesis,
                          std::uint64_t seed);

struct CurvePoint {
  double snr_db = 0.0;
  double pmd_empirical = 0.0;
  double pmd_theory = 0.0;  // NaN when suppressed
  double pfa_empirical = 0.0;
  std::size_t trials = 0;
  double ci_halfwidth = 0.0;  // 95% Wilson interval on pmd_empirical
};

struct RocPoint {
  double snr_db = 0.0;
  double p_fa_target = 0.0;
  double p_fa_empirical = 0.0;
  double p_d_empirical = 0.0;
  double p_d_theory = 0.0;  // NaN when suppressed
};

/// Statistics |C(v)| of `trials` trials per hypothesis at one SNR.
struct StatisticPool {
  std::vector<double> h0;
  std::vector<double> h1;
};
StatisticPool simulate_pool(const Scenario& scenario, std::size_t snr_index);

/// 95% Wilson score half-width for `hits` out of `n`.
double wilson_halfwidth(std::size_t hits, std::size_t n);

/// One curve row / the ROC rows of one SNR, from a pool at that SNR.
CurvePoint curve_point(const Scenario& scenario, std::size_t snr_index, const StatisticPool& pool);
std::vector<RocPoint> roc_points(const Scenario& scenario, std::size_t snr_index, const StatisticPool& pool,
                                 const std::vector<double>& pfa_grid);

using CurveSink = std::function<void(const CurvePoint&)>;
using RocSink = std::function<void(const RocPoint&)>;

/// Rows are delivered to `sink` in SNR order as soon as each SNR is done.
std::vector<CurvePoint> sweep_snr(const ExperimentConfig& cfg, const CurveSink& sink = {});
/// Threshold sweep over one H0 and one H1 pool per SNR.
std::vector<RocPoint> sweep_roc(const ExperimentConfig& cfg, const std::vector<double>& pfa_grid,
                                const RocSink& sink = {});

/// Worker count actually used: cfg.workers, or the hardware concurrency when 0.
std::size_t resolve_workers(std::size_t requested);

/// Calls fn(i) for i in [0, n) on up to `workers` threads. The first
/// exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace tdsc
