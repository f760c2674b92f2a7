// SPDX-License-Identifier: Apache-2.0

#include "tdsc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tdsc {

void TdscConfig::validate(std::size_t pattern_period) const {
  if (pattern_period == 0) throw std::invalid_argument("tdsc: pattern period must be positive");
  if (v < 1) throw std::invalid_argument("tdsc: v must be at least 1");
  if (s_v < 1) throw std::invalid_argument("tdsc: s_v must be at least 1");
  if (v % pattern_period != 0)
    throw std::invalid_argument("tdsc: v = " + std::to_string(v) +
                                " is not a multiple of the pilot period " + std::to_string(pattern_period));
  if (s_v % pattern_period != 0)
    throw std::invalid_argument("tdsc: s_v = " + std::to_string(s_v) +
                                " is not a multiple of the pilot period " + std::to_string(pattern_period));
  if (N == 0 || cp_skip + N > M) throw std::invalid_argument("tdsc: correlation window exceeds the symbol");
}

TdscConfig make_tdsc_config(const OfdmConfig& ofdm, std::size_t v, std::size_t s_v) {
  return TdscConfig{v, s_v, ofdm.num_subcarriers, ofdm.symbol_len(), ofdm.cp_len};
}

Complex accumulate(const ComplexVector& samples, std::span<const std::size_t> symbol_starts,
                   const TdscConfig& cfg, std::size_t pattern_period) {
  cfg.validate(pattern_period);
  if (samples.size() == 0) throw std::invalid_argument("accumulate: empty stream");
  if (symbol_starts.size() < cfg.s_v + cfg.v)
    throw std::invalid_argument("accumulate: need " + std::to_string(cfg.s_v + cfg.v) +
                                " symbols, stream has " + std::to_string(symbol_starts.size()));
  const auto n = static_cast<Eigen::Index>(cfg.N);
  auto window = [&](std::size_t symbol) {
    const std::size_t begin = symbol_starts[symbol] + cfg.cp_skip;
    if (begin + cfg.N > static_cast<std::size_t>(samples.size()))
      throw std::invalid_argument("accumulate: symbol window runs past the end of the stream");
    return samples.segment(static_cast<Eigen::Index>(begin), n);
  };

  Complex sum(0.0, 0.0);
  for (std::size_t l = cfg.v; l < cfg.v + cfg.s_v; ++l) sum += tdsc_corr(window(l), window(l - cfg.v));
  return sum / static_cast<double>(cfg.s_v);
}

Complex accumulate(const Baseband& stream, const TdscConfig& cfg, std::size_t pattern_period) {
  return accumulate(stream.samples, stream.symbol_starts, cfg, pattern_period);
}

double sigma_h0_sq(double noise_power, const TdscConfig& cfg) {
  if (!(noise_power >= 0.0)) throw std::invalid_argument("sigma_h0_sq: negative noise power");
  return noise_power * noise_power / (static_cast<double>(cfg.N) * static_cast<double>(cfg.s_v));
}

double estimate_noise_power(const ComplexVector& silent_capture) {
  if (silent_capture.size() == 0) throw std::invalid_argument("estimate_noise_power: empty capture");
  return silent_capture.squaredNorm() / static_cast<double>(silent_capture.size());
}

double threshold(double sigma_h0_sq, double p_fa) {
  if (!(p_fa > 0.0 && p_fa <= 1.0)) throw std::invalid_argument("threshold: p_fa must lie in (0, 1]");
  if (!(sigma_h0_sq >= 0.0)) throw std::invalid_argument("threshold: negative variance");
  return std::sqrt(std::max(0.0, -sigma_h0_sq * std::log(p_fa)));  // no -0 at p_fa = 1
}

DetectionResult decide(Complex c_value, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("decide: threshold must be non-negative");
  DetectionResult r;
  r.c_value = c_value;
  r.statistic = std::abs(c_value);
  r.threshold = gamma;
  r.decision = r.statistic >= gamma ? Hypothesis::H1 : Hypothesis::H0;
  return r;
}

DetectionResult sense(const ComplexVector& samples, std::span<const std::size_t> symbol_starts,
                      const TdscConfig& cfg, const PilotPattern& pattern, double noise_power,
                      double p_fa) {
  const Complex c = accumulate(samples, symbol_starts, cfg, pattern.period());
  const double var = sigma_h0_sq(noise_power, cfg);
  DetectionResult r = decide(c, threshold(var, p_fa));
  r.sigma_h0_sq = var;
  return r;
}

DetectionResult sense(const Baseband& stream, const TdscConfig& cfg, const PilotPattern& pattern,
                      double noise_power, double p_fa) {
  return sense(stream.samples, stream.symbol_starts, cfg, pattern, noise_power, p_fa);
}

}  // namespace tdsc
