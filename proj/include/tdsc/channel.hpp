// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/types.hpp"
#include "tdsc/waveform.hpp"

#include <optional>
#include <string>

namespace tdsc {

enum class FadingKind { Static, Rayleigh, Rician };

struct Tap {
  double delay = 0.0;     // s
  double power_db = 0.0;  // relative mean power
};

struct ChannelProfile {
  std::string name;
  std::vector<Tap> taps;
  FadingKind fading = FadingKind::Static;
  double k_factor_db = 6.0;  // Rician only, applied to the first tap
  double max_doppler = 0.0;  // Hz

  bool single_path() const { return taps.size() == 1; }
  /// Linear tap powers scaled to sum to 1.
  RealVector normalized_powers() const;
  void validate() const;
};

enum class ItuProfile { PedestrianA, VehicularA };

inline constexpr double kPedestrianDoppler = 7.28;    // Hz
inline constexpr double kVehicularDoppler = 145.69;  // Hz
inline constexpr double kDefaultRicianK = 6.0;        // dB

/// ITU-R M.1225 tapped-delay-line tables.
ChannelProfile itu_profile(ItuProfile which, FadingKind fading = FadingKind::Rayleigh);

/// awgn, flat_static, flat_rayleigh, rayleigh_ped_a, rician_ped_a,
/// rayleigh_veh_a, rician_veh_a
ChannelProfile profile_by_name(const std::string& name, double k_factor_db = kDefaultRicianK);
const std::vector<std::string>& profile_names();

struct ImpairmentConfig {
  double cfo_normalized = 0.0;  // CFO / subcarrier spacing
  double phase = 0.0;           // rad, in [-pi, pi]
  double snr_db = 0.0;

  void validate() const;
};

/// Sum-of-sinusoids oscillators per Rayleigh tap.
inline constexpr int kFadingOscillators = 32;
/// Fading gains are evaluated every this many samples and linearly interpolated.
inline constexpr std::size_t kFadingGainStride = 128;

/// Tapped delay line with delays rounded to whole samples. Output has the
/// same length and timing as the input.
Baseband apply_multipath(const Baseband& signal, const ChannelProfile& profile, std::uint64_t seed);

/// x[n] * exp(j(2 pi f n / N + theta)) with n the absolute stream index.
Baseband apply_cfo_phase(const Baseband& signal, const ImpairmentConfig& cfg,
                         std::size_t num_subcarriers);
void apply_cfo_phase_inplace(ComplexVector& samples, double cfo_normalized, double phase,
                             std::size_t num_subcarriers);

/// Zero-phase Kaiser-windowed sinc low-pass applied by overlap-save.
/// Cutoff at +-passband/2; the transition band is centered on the cutoff,
/// so content below cutoff - transition/2 passes flat.
class ReceiveFilter {
 public:
  static constexpr double kDefaultTransition = 0.02;  // fraction of the sample rate
  static constexpr double kStopbandDb = 130.0;
  static constexpr std::size_t kBlockSize = 4096;

  /// `passband_fraction` is the two-sided passband over the sample rate. At 1 or
  /// above the filter is the identity.
  explicit ReceiveFilter(double passband_fraction, double transition = kDefaultTransition);

  bool identity() const { return taps_.size() == 0; }
  const RealVector& taps() const { return taps_; }
  double passband_fraction() const { return passband_fraction_; }
  std::size_t block_size() const { return block_size_; }

  void apply(ComplexVector& samples) const;

 private:
  double passband_fraction_;
  RealVector taps_;
  std::size_t block_size_ = kBlockSize;
  ComplexVector response_;  // DFT of the zero-padded taps
};

Baseband receive_filter(const Baseband& signal, double passband_hz);

struct AwgnOptions {
  /// In-band signal power reference; measured over symbol extents when empty.
  std::optional<double> signal_power;
  /// Bandwidth over which SNR is defined, as a fraction of the sample rate.
  double noise_bandwidth = 1.0;
  /// Restrict noise to symbol extents when the stream carries symbol timing.
  bool occupied_only = true;
};

struct NoisyBaseband {
  Baseband signal;
  double noise_power = 0.0;  // per-sample sigma^2
};

/// Per-sample noise power giving `snr_db` in the given bandwidth.
double noise_power_for_snr(double signal_power, double snr_db, double noise_bandwidth = 1.0);

/// snr_db = +infinity adds nothing and reports sigma^2 = 0.
NoisyBaseband add_awgn(const Baseband& signal, double snr_db, std::uint64_t seed,
                       const AwgnOptions& options = {});

/// Pure noise with the length and symbol timing of `like`.
Baseband noise_stream(const Baseband& like, double noise_power, std::uint64_t seed);

}  // namespace tdsc
