// SPDX-License-Identifier: Apache-2.0

#include "tdsc/channel.hpp"

#include "tdsc/fft.hpp"
#include "tdsc/rng.hpp"

#include <boost/random/uniform_real_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tdsc {

RealVector ChannelProfile::normalized_powers() const {
  RealVector p(static_cast<Eigen::Index>(taps.size()));
  for (std::size_t i = 0; i < taps.size(); ++i)
    p(static_cast<Eigen::Index>(i)) = std::pow(10.0, taps[i].power_db / 10.0);
  return p / p.sum();
}

void ChannelProfile::validate() const {
  if (taps.empty()) throw std::invalid_argument("channel profile '" + name + "': no taps");
  if (taps.front().delay != 0.0)
    throw std::invalid_argument("channel profile '" + name + "': first tap delay must be 0");
  for (std::size_t i = 1; i < taps.size(); ++i)
    if (!(taps[i].delay > taps[i - 1].delay))
      throw std::invalid_argument("channel profile '" + name + "': delays must increase strictly");
  if (!(max_doppler >= 0.0))
    throw std::invalid_argument("channel profile '" + name + "': negative Doppler");
}

ChannelProfile itu_profile(ItuProfile which, FadingKind fading) {
  ChannelProfile p;
  p.fading = fading;
  switch (which) {
    case ItuProfile::PedestrianA:
      p.name = "itu_ped_a";
      p.taps = {{0.0, 0.0}, {110e-9, -9.7}, {190e-9, -19.2}, {410e-9, -22.8}};
      p.max_doppler = kPedestrianDoppler;
      break;
    case ItuProfile::VehicularA:
      p.name = "itu_veh_a";
      p.taps = {{0.0, 0.0},      {310e-9, -1.0},   {710e-9, -9.0},
                {1090e-9, -10.0}, {1730e-9, -15.0}, {2510e-9, -20.0}};
      p.max_doppler = kVehicularDoppler;
      break;
  }
  return p;
}

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names = {"awgn",           "flat_static",    "flat_rayleigh",
                                                 "rayleigh_ped_a", "rician_ped_a",   "rayleigh_veh_a",
                                                 "rician_veh_a"};
  return names;
}

ChannelProfile profile_by_name(const std::string& name, double k_factor_db) {
  ChannelProfile p;
  if (name == "awgn" || name == "flat_static") {
    p.taps = {{0.0, 0.0}};
    p.fading = FadingKind::Static;
  } else if (name == "flat_rayleigh") {
    p.taps = {{0.0, 0.0}};
    p.fading = FadingKind::Rayleigh;
    p.max_doppler = kPedestrianDoppler;
  } else if (name == "rayleigh_ped_a") {
    p = itu_profile(ItuProfile::PedestrianA, FadingKind::Rayleigh);
  } else if (name == "rician_ped_a") {
    p = itu_profile(ItuProfile::PedestrianA, FadingKind::Rician);
  } else if (name == "rayleigh_veh_a") {
    p = itu_profile(ItuProfile::VehicularA, FadingKind::Rayleigh);
  } else if (name == "rician_veh_a") {
    p = itu_profile(ItuProfile::VehicularA, FadingKind::Rician);
  } else {
    throw std::invalid_argument("unknown channel profile '" + name + "'");
  }
  p.name = name;
  p.k_factor_db = k_factor_db;
  return p;
}

void ImpairmentConfig::validate() const {
  if (!(phase >= -kPi && phase <= kPi))
    throw std::invalid_argument("impairment: phase must lie in [-pi, pi]");
}

namespace {

// Gain trajectory of one tap sampled every kFadingGainStride samples.
ComplexVector tap_gain_grid(const ChannelProfile& profile, std::size_t tap, double tap_power,
                            std::size_t num_samples, double sample_rate, std::uint64_t seed) {
  const std::size_t grid = num_samples / kFadingGainStride + 2;
  ComplexVector gains(static_cast<Eigen::Index>(grid));
  if (profile.fading == FadingKind::Static) {
    gains.setConstant(Complex(std::sqrt(tap_power), 0.0));
    return gains;
  }

  Engine engine(derive_seed({seed, static_cast<std::uint64_t>(Stream::Fading), tap}));
  boost::random::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::vector<Complex> phasor(kFadingOscillators), step(kFadingOscillators);
  const double dt = static_cast<double>(kFadingGainStride) / sample_rate;
  for (int i = 0; i < kFadingOscillators; ++i) {
    const double arrival = angle(engine);
    const double initial = angle(engine);
    phasor[i] = std::polar(1.0, initial);
    step[i] = std::polar(1.0, 2.0 * kPi * profile.max_doppler * std::cos(arrival) * dt);
  }

  double diffuse = std::sqrt(tap_power);
  Complex los(0.0, 0.0);
  if (profile.fading == FadingKind::Rician && tap == 0) {
    const double k = std::pow(10.0, profile.k_factor_db / 10.0);
    los = Complex(std::sqrt(tap_power * k / (k + 1.0)), 0.0);
    diffuse = std::sqrt(tap_power / (k + 1.0));
  }
  const double scale = diffuse / std::sqrt(static_cast<double>(kFadingOscillators));
  for (std::size_t j = 0; j < grid; ++j) {
    Complex sum(0.0, 0.0);
    for (int i = 0; i < kFadingOscillators; ++i) {
      sum += phasor[i];
      phasor[i] *= step[i];
    }
    gains(static_cast<Eigen::Index>(j)) = los + scale * sum;
  }
  return gains;
}

}  // namespace

Baseband apply_multipath(const Baseband& signal, const ChannelProfile& profile, std::uint64_t seed) {
  profile.validate();
  const RealVector powers = profile.normalized_powers();
  const auto len = static_cast<std::size_t>(signal.size());

  Baseband out = signal;
  out.samples.setZero();
  for (std::size_t t = 0; t < profile.taps.size(); ++t) {
    const auto delay = static_cast<std::size_t>(std::llround(profile.taps[t].delay * signal.sample_rate));
    if (delay >= len && len > 0)
      throw std::invalid_argument("apply_multipath: tap delay beyond the signal length");
    const ComplexVector grid = tap_gain_grid(profile, t, powers(static_cast<Eigen::Index>(t)), len,
                                             signal.sample_rate, seed);
    const bool constant = profile.fading == FadingKind::Static || profile.max_doppler == 0.0;
    for (std::size_t n = delay; n < len; ++n) {
      Complex g;
      if (constant) {
        g = grid(0);
      } else {
        const std::size_t j = n / kFadingGainStride;
        const double frac = static_cast<double>(n % kFadingGainStride) / static_cast<double>(kFadingGainStride);
        const auto ji = static_cast<Eigen::Index>(j);
        g = grid(ji) + (grid(ji + 1) - grid(ji)) * frac;
      }
      out.samples(static_cast<Eigen::Index>(n)) += g * signal.samples(static_cast<Eigen::Index>(n - delay));
    }
  }
  return out;
}

void apply_cfo_phase_inplace(ComplexVector& samples, double cfo_normalized, double phase,
                             std::size_t num_subcarriers) {
  if (num_subcarriers == 0) throw std::invalid_argument("apply_cfo_phase: N must be positive");
  if (cfo_normalized == 0.0 && phase == 0.0) return;
  const double rate = cfo_normalized / static_cast<double>(num_subcarriers);  // cycles per sample
  const Complex step = std::polar(1.0, 2.0 * kPi * rate);
  // Rotation is advanced recursively and re-anchored exactly every kAnchor samples.
  constexpr Eigen::Index kAnchor = 256;
  Complex rotor;
  for (Eigen::Index n = 0; n < samples.size(); ++n) {
    if (n % kAnchor == 0) {
      double cycles = rate * static_cast<double>(n);
      cycles -= std::floor(cycles);
      rotor = std::polar(1.0, 2.0 * kPi * cycles + phase);
    }
    samples(n) *= rotor;
    rotor *= step;
  }
}

Baseband apply_cfo_phase(const Baseband& signal, const ImpairmentConfig& cfg,
                         std::size_t num_subcarriers) {
  cfg.validate();
  Baseband out = signal;
  apply_cfo_phase_inplace(out.samples, cfg.cfo_normalized, cfg.phase, num_subcarriers);
  return out;
}

ReceiveFilter::ReceiveFilter(double passband_fraction, double transition)
    : passband_fraction_(passband_fraction) {
  if (!(passband_fraction > 0.0)) throw std::invalid_argument("receive filter: passband must be positive");
  if (passband_fraction >= 1.0) return;
  if (!(transition > 0.0 && transition < 0.5))
    throw std::invalid_argument("receive filter: transition width out of range");

  // Kaiser design rules for the stopband attenuation.
  const double beta = 0.1102 * (kStopbandDb - 8.7);
  const auto order = static_cast<std::size_t>(std::ceil((kStopbandDb - 7.95) / (2.285 * 2.0 * kPi * transition)));
  const std::size_t half = (order + 1) / 2;
  const std::size_t length = 2 * half + 1;

  const double cutoff = passband_fraction / 2.0;  // cycles per sample
  taps_.resize(static_cast<Eigen::Index>(length));
  const double norm = std::cyl_bessel_i(0.0, beta);
  for (std::size_t i = 0; i < length; ++i) {
    const double m = static_cast<double>(i) - static_cast<double>(half);
    const double arg = 2.0 * cutoff * m;
    const double sinc = m == 0.0 ? 1.0 : std::sin(kPi * arg) / (kPi * arg);
    const double r = m / static_cast<double>(half);
    const double window = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    taps_(static_cast<Eigen::Index>(i)) = 2.0 * cutoff * sinc * window;
  }
  taps_ /= taps_.sum();

  while (block_size_ < 4 * length) block_size_ *= 2;
  ComplexVector padded = ComplexVector::Zero(static_cast<Eigen::Index>(block_size_));
  padded.head(static_cast<Eigen::Index>(length)) = taps_.cast<Complex>();
  response_ = dsp::fft(padded) / static_cast<double>(block_size_);
}

void ReceiveFilter::apply(ComplexVector& samples) const {
  if (identity() || samples.size() == 0) return;
  const auto length = taps_.size();
  const Eigen::Index half = (length - 1) / 2;
  const auto block = static_cast<Eigen::Index>(block_size_);
  const Eigen::Index step = block - (length - 1);
  const Eigen::Index total = samples.size();

  ComplexVector out(total);
  ComplexVector segment(block), spectrum(block), filtered(block);
  for (Eigen::Index start = 0; start < total; start += step) {
    const Eigen::Index first = start - half;
    const Eigen::Index lo = std::max<Eigen::Index>(first, 0);
    const Eigen::Index hi = std::min(first + block, total);
    segment.setZero();
    if (hi > lo) segment.segment(lo - first, hi - lo) = samples.segment(lo, hi - lo);
    dsp::fft_forward(segment.data(), spectrum.data(), block_size_);
    spectrum.array() *= response_.array();
    dsp::fft_backward(spectrum.data(), filtered.data(), block_size_);
    const Eigen::Index count = std::min(step, total - start);
    out.segment(start, count) = filtered.segment(length - 1, count);
  }
  samples = std::move(out);
}

Baseband receive_filter(const Baseband& signal, double passband_hz) {
  if (!(signal.sample_rate > 0.0)) throw std::invalid_argument("receive_filter: unknown sample rate");
  if (passband_hz > signal.sample_rate)
    throw std::invalid_argument("receive_filter: passband exceeds the sample rate");
  Baseband out = signal;
  ReceiveFilter(passband_hz / signal.sample_rate).apply(out.samples);
  return out;
}

double noise_power_for_snr(double signal_power, double snr_db, double noise_bandwidth) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  if (!(noise_bandwidth > 0.0)) throw std::invalid_argument("awgn: noise bandwidth must be positive");
  return signal_power / (std::pow(10.0, snr_db / 10.0) * noise_bandwidth);
}

NoisyBaseband add_awgn(const Baseband& signal, double snr_db, std::uint64_t seed,
                       const AwgnOptions& options) {
  NoisyBaseband result{signal, 0.0};
  if (std::isinf(snr_db) && snr_db > 0) return result;

  const double power = options.signal_power ? *options.signal_power : mean_symbol_power(signal);
  if (!(power > 0.0)) throw std::invalid_argument("add_awgn: signal has zero power");
  result.noise_power = noise_power_for_snr(power, snr_db, options.noise_bandwidth);

  Engine engine(derive_seed(seed, Stream::Noise));
  ComplexVector& x = result.signal.samples;
  if (!options.occupied_only || signal.symbol_starts.empty()) {
    add_complex_gaussian(x, 0, x.size(), result.noise_power, engine);
    return result;
  }
  // Union of symbol extents, walked in order.
  Eigen::Index covered = 0;
  for (std::size_t start : signal.symbol_starts) {
    const auto begin = std::max(static_cast<Eigen::Index>(start), covered);
    const auto end = std::min(static_cast<Eigen::Index>(start + signal.symbol_len), x.size());
    if (begin < end) add_complex_gaussian(x, begin, end, result.noise_power, engine);
    covered = std::max(covered, end);
  }
  return result;
}

Baseband noise_stream(const Baseband& like, double noise_power, std::uint64_t seed) {
  Baseband out;
  out.sample_rate = like.sample_rate;
  out.symbol_len = like.symbol_len;
  out.symbol_starts = like.symbol_starts;
  out.links = like.links;
  out.samples = ComplexVector::Zero(like.size());
  Engine engine(derive_seed(seed, Stream::Noise));
  add_complex_gaussian(out.samples, 0, out.size(), noise_power, engine);
  return out;
}

}  // namespace tdsc
