// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tdsc {

inline constexpr double kWimaxPilotBoostDb = 2.5;
inline const double kWimaxPilotAmplitude = std::pow(10.0, kWimaxPilotBoostDb / 20.0);

/// Periodic pilot-tone layout over FFT bins.
///
/// Symbol l uses configuration l mod period(). Pilot values are unit-modulus
/// and fixed per bin, so two symbols sharing a configuration carry identical
/// pilots; the transmitted pilot is pilot_amplitude() * value(k).
class PilotPattern {
 public:
  /// Validating constructor. Every set must be non-empty unless
  /// allow_empty_sets is true (only the LTE slot layout needs that).
  PilotPattern(std::size_t num_subcarriers, std::vector<IndexList> configs, double pilot_amplitude,
               ComplexVector values, bool allow_empty_sets = false);

  std::size_t num_subcarriers() const { return num_subcarriers_; }
  std::size_t period() const { return configs_.size(); }
  double pilot_amplitude() const { return pilot_amplitude_; }
  const std::vector<IndexList>& configs() const { return configs_; }
  const ComplexVector& values() const { return values_; }
  Complex value(std::size_t bin) const { return values_(static_cast<Eigen::Index>(bin)); }

  /// Same layout and values with a different amplitude (rho may be 0 here,
  /// which is useful for pilot-dependence experiments).
  PilotPattern with_amplitude(double pilot_amplitude) const;

 private:
  std::size_t num_subcarriers_;
  std::vector<IndexList> configs_;
  double pilot_amplitude_;
  ComplexVector values_;
};

/// Pilot sets of the symbol with index l.
const IndexList& pilots_for_symbol(const PilotPattern& pattern, std::size_t l);

/// All v in [1, max_v] at which pilot configurations coincide (v = 0 mod A).
std::vector<std::size_t> matching_offsets(const PilotPattern& pattern, std::size_t max_v);

// LTE normal-CP downlink slot: RS on bins {0, 6, 12, ...} in symbol 0 and
// {3, 9, 15, ...} in symbol 4; remaining symbols carry none. RS values are
// unit-modulus QPSK drawn from a generator seeded with cell_id.
PilotPattern lte_pattern(std::size_t fft_size, std::size_t symbols_per_slot = 7,
                         std::uint32_t cell_id = 0, double pilot_amplitude = 1.0);

// Period-2 DL-PUSC-style layout. Used subcarriers are centered with a DC null;
// every 14th used subcarrier is a pilot, starting at used offset 4 on even
// symbols and 8 on odd symbols. Pilot values are BPSK.
PilotPattern wimax_pattern(std::size_t fft_size, double pilot_amplitude = kWimaxPilotAmplitude);

/// Number of used (non-guard, non-DC) subcarriers of the DL-PUSC layout.
std::size_t wimax_used_subcarriers(std::size_t fft_size);

/// Centered occupancy with a DC null: bins 1..used/2 and N-used/2..N-1.
/// `used` must be even and smaller than N.
std::vector<bool> centered_occupancy(std::size_t fft_size, std::size_t used);

/// Copy of `pattern` keeping only pilots on occupied bins. Empty sets are
/// kept as such.
PilotPattern restrict_to(const PilotPattern& pattern, const std::vector<bool>& occupied);

/// Golden-file serialization: one `symbol_phase,index` line per pilot.
std::string to_golden_text(const PilotPattern& pattern);

}  // namespace tdsc
