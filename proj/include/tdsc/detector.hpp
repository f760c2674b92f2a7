// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/pilot_grid.hpp"
#include "tdsc/types.hpp"
#include "tdsc/waveform.hpp"

#include <span>
#include <stdexcept>

namespace tdsc {

struct TdscConfig {
  std::size_t v = 2;          // symbol-index difference of each correlated pair
  std::size_t s_v = 2;        // number of accumulated pairs
  std::size_t N = 1024;       // correlation length (subcarriers)
  std::size_t M = 1280;       // symbol length
  std::size_t cp_skip = 256;  // samples skipped at each symbol head

  /// Checks v >= 1, s_v >= 1 and both multiples of the pattern period.
  void validate(std::size_t pattern_period) const;
};

/// Defaults for a grid: cp_skip = L, so the cyclic prefix is discarded.
TdscConfig make_tdsc_config(const OfdmConfig& ofdm, std::size_t v, std::size_t s_v);

struct DetectionResult {
  double statistic = 0.0;  // |C(v)|
  Complex c_value{0.0, 0.0};
  double threshold = 0.0;
  Hypothesis decision = Hypothesis::H0;
  double sigma_h0_sq = 0.0;
};

/// R(l, m) = (1/N) sum_n x_l[n] conj(x_m[n])
template <typename DerivedL, typename DerivedM>
Complex tdsc_corr(const Eigen::MatrixBase<DerivedL>& x_l, const Eigen::MatrixBase<DerivedM>& x_m) {
  if (x_l.size() != x_m.size()) throw std::invalid_argument("tdsc_corr: length mismatch");
  if (x_l.size() == 0) throw std::invalid_argument("tdsc_corr: empty input");
  // dot() conjugates its first argument.
  return x_m.dot(x_l) / static_cast<double>(x_l.size());
}

/// C(v): mean of R(l, l - v) over s_v consecutive l, using the given symbol
/// starts as symbols 0, 1, 2, ... The k-th start is symbol k.
Complex accumulate(const ComplexVector& samples, std::span<const std::size_t> symbol_starts,
                   const TdscConfig& cfg, std::size_t pattern_period);

/// Uses every symbol start of the stream.
Complex accumulate(const Baseband& stream, const TdscConfig& cfg, std::size_t pattern_period);

/// Variance of C(v) under H0 for white noise of per-sample power sigma^2:
/// sigma^4 / (N * s_v).
double sigma_h0_sq(double noise_power, const TdscConfig& cfg);

/// Noise-power estimate from a signal-free capture (mean |x|^2).
double estimate_noise_power(const ComplexVector& silent_capture);

/// gamma = sqrt(-sigma_h0^2 ln p_fa)
double threshold(double sigma_h0_sq, double p_fa);

/// Ties decide H1.
DetectionResult decide(Complex c_value, double gamma);

/// accumulate -> sigma_h0_sq -> threshold -> decide.
DetectionResult sense(const ComplexVector& samples, std::span<const std::size_t> symbol_starts,
                      const TdscConfig& cfg, const PilotPattern& pattern, double noise_power,
                      double p_fa);
DetectionResult sense(const Baseband& stream, const TdscConfig& cfg, const PilotPattern& pattern,
                      double noise_power, double p_fa);

}  // namespace tdsc
