// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/pilot_grid.hpp"
#include "tdsc/types.hpp"

#include <cstdint>
#include <span>

namespace tdsc {

enum class Modulation { QAM16 };

struct OfdmConfig {
  std::size_t num_subcarriers = 1024;  // N
  std::size_t cp_len = 256;            // L
  double sample_rate = 8.4e6;          // Hz
  double rolloff = 0.1;                // taper length = floor(rolloff * N), must not exceed L
  std::size_t used_subcarriers = 840;  // centered, DC null
  Modulation modulation = Modulation::QAM16;

  std::size_t symbol_len() const { return num_subcarriers + cp_len; }  // M
  std::size_t taper_len() const;
  double subcarrier_spacing() const { return sample_rate / static_cast<double>(num_subcarriers); }
  double symbol_duration() const { return static_cast<double>(symbol_len()) / sample_rate; }
  /// Two-sided occupied bandwidth in Hz, DC bin included.
  double occupied_bandwidth() const {
    return static_cast<double>(used_subcarriers + 1) * subcarrier_spacing();
  }

  void validate() const;
};

/// cp_ratio must divide N exactly (1/4 and 1/8 for the usual grids).
OfdmConfig make_ofdm_config(std::size_t fft_size, double cp_ratio, double sample_rate,
                            double rolloff, std::size_t used_subcarriers);

struct FrameConfig {
  std::size_t dl_symbols = 12;
  std::size_t ul_symbols = 35;
  double rtg = 60e-6;       // s
  double ttg = 107.225e-6;  // s

  void validate() const;
};

enum class Link : std::uint8_t { Downlink, Uplink };

/// Complex baseband stream with known symbol timing.
struct Baseband {
  ComplexVector samples;
  double sample_rate = 0.0;
  std::size_t symbol_len = 0;  // M
  IndexList symbol_starts;     // strictly increasing, start + M <= size
  std::vector<Link> links;     // one per symbol start

  Eigen::Index size() const { return samples.size(); }
  IndexList downlink_starts() const;
  void validate() const;
};

/// Gray-mapped 16-QAM, unit average power. Two bits per axis, I first:
/// 00 -> +1, 01 -> +3, 11 -> -3, 10 -> -1, all scaled by 1/sqrt(10).
Complex qam16_point(unsigned nibble);
ComplexVector map_qam16(std::span<const std::uint8_t> bits);

/// Occupied bins of symbol l that are not pilots, in ascending bin order.
IndexList data_subcarriers(const OfdmConfig& cfg, const PilotPattern& pattern, std::size_t l);

ComplexVector build_freq_symbol(const OfdmConfig& cfg, const PilotPattern& pattern, std::size_t l,
                                const ComplexVector& data);

/// x[n] = (1/N) sum_k X[k] e^{j 2 pi k n / N}
ComplexVector ofdm_modulate(const OfdmConfig& cfg, const ComplexVector& freq_symbol);

/// Rising half of the raised-cosine edge window, length W. ramp[i] + ramp[W-1-i] == 1.
RealVector raised_cosine_ramp(std::size_t length);

/// Prepends the cyclic prefix and applies the edge taper. Returns M + W samples:
/// [CP (L) | core (N) | postfix (W)], where the first W samples carry the rising
/// ramp and the postfix (cyclic continuation) carries the falling ramp. The
/// postfix is meant to be overlap-added onto the first W samples of the next
/// symbol. With rolloff 0 this is the plain CP extension.
ComplexVector add_cp_and_window(const OfdmConfig& cfg, const ComplexVector& symbol);

/// Continuous downlink burst of `num_symbols` symbols with pattern indices
/// 0, 1, 2, ...; length num_symbols * M (the last postfix is dropped).
Baseband build_burst(const OfdmConfig& cfg, const PilotPattern& pattern, std::size_t num_symbols,
                     std::uint64_t seed);

/// One TDD frame: DL symbols, TTG silence, UL symbols, RTG silence. UL symbols
/// reuse the OFDM generator with their own pattern indices.
Baseband build_frame(const OfdmConfig& cfg, const FrameConfig& frame, const PilotPattern& pattern,
                     std::uint64_t seed);

/// Gap length rounded to the nearest sample.
std::size_t gap_samples(double seconds, double sample_rate);

/// Mean |x|^2 over the symbol extents [start, start + M).
double mean_symbol_power(const Baseband& signal);

/// Expected per-sample power of the generated symbols (unit-power data,
/// pilots at rho^2), averaged over the pattern period.
double nominal_symbol_power(const OfdmConfig& cfg, const PilotPattern& pattern);

}  // namespace tdsc
