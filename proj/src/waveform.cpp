// SPDX-License-Identifier: Apache-2.0

#include "tdsc/waveform.hpp"

#include "tdsc/fft.hpp"
#include "tdsc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdsc {

std::size_t OfdmConfig::taper_len() const {
  return static_cast<std::size_t>(std::floor(rolloff * static_cast<double>(num_subcarriers)));
}

void OfdmConfig::validate() const {
  if (num_subcarriers == 0) throw std::invalid_argument("ofdm: zero subcarriers");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("ofdm: sample rate must be positive");
  if (!(rolloff >= 0.0)) throw std::invalid_argument("ofdm: negative rolloff");
  if (rolloff * static_cast<double>(num_subcarriers) > static_cast<double>(cp_len))
    throw std::invalid_argument("ofdm: rolloff exceeds the cyclic prefix ratio L/N");
  if (used_subcarriers % 2 != 0 || used_subcarriers >= num_subcarriers)
    throw std::invalid_argument("ofdm: used subcarriers must be even and below N");
}

OfdmConfig make_ofdm_config(std::size_t fft_size, double cp_ratio, double sample_rate,
                            double rolloff, std::size_t used_subcarriers) {
  const double cp = cp_ratio * static_cast<double>(fft_size);
  if (!(cp_ratio > 0.0) || std::abs(cp - std::round(cp)) > 1e-9)
    throw std::invalid_argument("ofdm: cp_ratio * fft_size must be a whole number of samples");
  OfdmConfig cfg;
  cfg.num_subcarriers = fft_size;
  cfg.cp_len = static_cast<std::size_t>(std::llround(cp));
  cfg.sample_rate = sample_rate;
  cfg.rolloff = rolloff;
  cfg.used_subcarriers = used_subcarriers;
  cfg.validate();
  return cfg;
}

void FrameConfig::validate() const {
  if (dl_symbols == 0 || ul_symbols == 0)
    throw std::invalid_argument("frame: symbol counts must be at least 1");
  if (!(rtg >= 0.0) || !(ttg >= 0.0)) throw std::invalid_argument("frame: negative gap");
}

IndexList Baseband::downlink_starts() const {
  IndexList out;
  for (std::size_t i = 0; i < symbol_starts.size(); ++i)
    if (i >= links.size() || links[i] == Link::Downlink) out.push_back(symbol_starts[i]);
  return out;
}

void Baseband::validate() const {
  for (std::size_t i = 0; i < symbol_starts.size(); ++i) {
    if (i > 0 && symbol_starts[i] <= symbol_starts[i - 1])
      throw std::invalid_argument("baseband: symbol starts must be strictly increasing");
    if (symbol_starts[i] + symbol_len > static_cast<std::size_t>(samples.size()))
      throw std::invalid_argument("baseband: symbol extends past the end of the stream");
  }
  if (!links.empty() && links.size() != symbol_starts.size())
    throw std::invalid_argument("baseband: one link tag per symbol required");
}

Complex qam16_point(unsigned nibble) {
  static constexpr double kLevel[4] = {1.0, 3.0, -1.0, -3.0};  // index = (msb << 1) | lsb
  static const double kScale = 1.0 / std::sqrt(10.0);
  return Complex(kLevel[(nibble >> 2) & 3u] * kScale, kLevel[nibble & 3u] * kScale);
}

ComplexVector map_qam16(std::span<const std::uint8_t> bits) {
  if (bits.size() % 4 != 0) throw std::invalid_argument("map_qam16: bit count must be a multiple of 4");
  ComplexVector out(static_cast<Eigen::Index>(bits.size() / 4));
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      if (bits[i + b] > 1) throw std::invalid_argument("map_qam16: bits must be 0 or 1");
      nibble = (nibble << 1) | bits[i + b];
    }
    out(static_cast<Eigen::Index>(i / 4)) = qam16_point(nibble);
  }
  return out;
}

IndexList data_subcarriers(const OfdmConfig& cfg, const PilotPattern& pattern, std::size_t l) {
  if (pattern.num_subcarriers() != cfg.num_subcarriers)
    throw std::invalid_argument("pilot pattern and OFDM grid disagree on N");
  const auto occupied = centered_occupancy(cfg.num_subcarriers, cfg.used_subcarriers);
  std::vector<bool> pilot(cfg.num_subcarriers, false);
  for (std::size_t k : pilots_for_symbol(pattern, l)) pilot[k] = true;
  IndexList out;
  for (std::size_t k = 0; k < cfg.num_subcarriers; ++k)
    if (occupied[k] && !pilot[k]) out.push_back(k);
  return out;
}

namespace {

void place_pilots(const PilotPattern& pattern, std::size_t l, ComplexVector& freq) {
  const double rho = pattern.pilot_amplitude();
  for (std::size_t k : pilots_for_symbol(pattern, l)) {
    const auto i = static_cast<Eigen::Index>(k);
    freq(i) = rho * pattern.value(k);
  }
}

}  // namespace

ComplexVector build_freq_symbol(const OfdmConfig& cfg, const PilotPattern& pattern, std::size_t l,
                                const ComplexVector& data) {
  const IndexList bins = data_subcarriers(cfg, pattern, l);
  if (static_cast<std::size_t>(data.size()) != bins.size())
    throw std::invalid_argument("build_freq_symbol: expected " + std::to_string(bins.size()) +
                                " data values, got " + std::to_string(data.size()));
  ComplexVector freq = ComplexVector::Zero(static_cast<Eigen::Index>(cfg.num_subcarriers));
  for (std::size_t i = 0; i < bins.size(); ++i)
    freq(static_cast<Eigen::Index>(bins[i])) = data(static_cast<Eigen::Index>(i));
  place_pilots(pattern, l, freq);
  return freq;
}

ComplexVector ofdm_modulate(const OfdmConfig& cfg, const ComplexVector& freq_symbol) {
  if (static_cast<std::size_t>(freq_symbol.size()) != cfg.num_subcarriers)
    throw std::invalid_argument("ofdm_modulate: expected N frequency values");
  return dsp::ifft(freq_symbol);
}

RealVector raised_cosine_ramp(std::size_t length) {
  RealVector ramp(static_cast<Eigen::Index>(length));
  for (std::size_t i = 0; i < length; ++i)
    ramp(static_cast<Eigen::Index>(i)) =
        0.5 * (1.0 - std::cos(kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(length)));
  return ramp;
}

ComplexVector add_cp_and_window(const OfdmConfig& cfg, const ComplexVector& symbol) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.num_subcarriers);
  const auto cp = static_cast<Eigen::Index>(cfg.cp_len);
  const auto w = static_cast<Eigen::Index>(cfg.taper_len());
  if (symbol.size() != n) throw std::invalid_argument("add_cp_and_window: expected N samples");

  ComplexVector out(cp + n + w);
  out.segment(0, cp) = symbol.tail(cp);
  out.segment(cp, n) = symbol;
  out.segment(cp + n, w) = symbol.head(w);
  if (w > 0) {
    const RealVector ramp = raised_cosine_ramp(static_cast<std::size_t>(w));
    out.head(w).array() *= ramp.array();
    out.tail(w).array() *= ramp.reverse().array();
  }
  return out;
}

std::size_t gap_samples(double seconds, double sample_rate) {
  return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

namespace {

// Generates symbols with seeded 16-QAM payload and overlap-adds them into a stream.
class SymbolWriter {
 public:
  SymbolWriter(const OfdmConfig& cfg, const PilotPattern& pattern, std::uint64_t seed)
      : cfg_(cfg), pattern_(pattern), engine_(derive_seed(seed, Stream::Payload)) {
    cfg_.validate();
    if (pattern.num_subcarriers() != cfg.num_subcarriers)
      throw std::invalid_argument("pilot pattern and OFDM grid disagree on N");
    for (std::size_t a = 0; a < pattern.period(); ++a)
      data_bins_.push_back(data_subcarriers(cfg, pattern, a));
    ramp_ = raised_cosine_ramp(cfg.taper_len());
    freq_.resize(static_cast<Eigen::Index>(cfg.num_subcarriers));
    time_.resize(static_cast<Eigen::Index>(cfg.num_subcarriers));
  }

  /// Overlap-adds the symbol with pattern index l at `offset`; same samples as
  /// add_cp_and_window(ofdm_modulate(...)) without the temporaries.
  void write(std::size_t l, std::size_t offset, ComplexVector& out) {
    const IndexList& bins = data_bins_[l % pattern_.period()];
    freq_.setZero();
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (i % 16 == 0) word = engine_();
      freq_(static_cast<Eigen::Index>(bins[i])) = qam16_point(static_cast<unsigned>(word & 0xF));
      word >>= 4;
    }
    place_pilots(pattern_, l, freq_);
    dsp::fft_backward(freq_.data(), time_.data(), cfg_.num_subcarriers);
    time_ /= static_cast<double>(cfg_.num_subcarriers);

    const auto n = static_cast<Eigen::Index>(cfg_.num_subcarriers);
    const auto cp = static_cast<Eigen::Index>(cfg_.cp_len);
    const auto w = ramp_.size();
    const auto start = static_cast<Eigen::Index>(offset);
    const Eigen::Index room = out.size() - start;
    // [CP | core | postfix]; the first W samples and the postfix carry the taper.
    for (Eigen::Index i = 0; i < std::min(cp, room); ++i) {
      const Complex x = time_(n - cp + i);
      out(start + i) += i < w ? x * ramp_(i) : x;
    }
    const Eigen::Index core = std::clamp<Eigen::Index>(room - cp, 0, n);
    out.segment(start + cp, core) += time_.head(core);
    for (Eigen::Index i = 0; i < std::min(w, room - cp - n); ++i)
      out(start + cp + n + i) += time_(i) * ramp_(w - 1 - i);
  }

 private:
  OfdmConfig cfg_;
  const PilotPattern& pattern_;
  Engine engine_;
  RealVector ramp_;
  ComplexVector freq_, time_;
  std::vector<IndexList> data_bins_;
};

}  // namespace

Baseband build_burst(const OfdmConfig& cfg, const PilotPattern& pattern, std::size_t num_symbols,
                     std::uint64_t seed) {
  SymbolWriter writer(cfg, pattern, seed);
  const std::size_t m = cfg.symbol_len();
  Baseband bb;
  bb.sample_rate = cfg.sample_rate;
  bb.symbol_len = m;
  bb.samples = ComplexVector::Zero(static_cast<Eigen::Index>(num_symbols * m));
  for (std::size_t l = 0; l < num_symbols; ++l) {
    writer.write(l, l * m, bb.samples);
    bb.symbol_starts.push_back(l * m);
    bb.links.push_back(Link::Downlink);
  }
  return bb;
}

Baseband build_frame(const OfdmConfig& cfg, const FrameConfig& frame, const PilotPattern& pattern,
                     std::uint64_t seed) {
  frame.validate();
  SymbolWriter writer(cfg, pattern, seed);
  const std::size_t m = cfg.symbol_len();
  const std::size_t ttg = gap_samples(frame.ttg, cfg.sample_rate);
  const std::size_t rtg = gap_samples(frame.rtg, cfg.sample_rate);
  if (cfg.taper_len() > std::min(ttg, rtg) && cfg.taper_len() > 0)
    throw std::invalid_argument("frame: transition gaps shorter than the window postfix");

  Baseband bb;
  bb.sample_rate = cfg.sample_rate;
  bb.symbol_len = m;
  const std::size_t total = (frame.dl_symbols + frame.ul_symbols) * m + ttg + rtg;
  bb.samples = ComplexVector::Zero(static_cast<Eigen::Index>(total));

  std::size_t offset = 0;
  for (std::size_t l = 0; l < frame.dl_symbols; ++l, offset += m) {
    writer.write(l, offset, bb.samples);
    bb.symbol_starts.push_back(offset);
    bb.links.push_back(Link::Downlink);
  }
  offset += ttg;
  for (std::size_t l = 0; l < frame.ul_symbols; ++l, offset += m) {
    writer.write(l, offset, bb.samples);
    bb.symbol_starts.push_back(offset);
    bb.links.push_back(Link::Uplink);
  }
  return bb;
}

double mean_symbol_power(const Baseband& signal) {
  if (signal.symbol_starts.empty()) {
    return signal.samples.size() == 0 ? 0.0 : signal.samples.squaredNorm() / static_cast<double>(signal.samples.size());
  }
  double energy = 0.0;
  const auto m = static_cast<Eigen::Index>(signal.symbol_len);
  for (std::size_t start : signal.symbol_starts)
    energy += signal.samples.segment(static_cast<Eigen::Index>(start), m).squaredNorm();
  return energy / static_cast<double>(signal.symbol_starts.size() * signal.symbol_len);
}

double nominal_symbol_power(const OfdmConfig& cfg, const PilotPattern& pattern) {
  const double rho2 = pattern.pilot_amplitude() * pattern.pilot_amplitude();
  double total = 0.0;
  for (std::size_t a = 0; a < pattern.period(); ++a) {
    const double data = static_cast<double>(data_subcarriers(cfg, pattern, a).size());
    const double pilots = static_cast<double>(pattern.configs()[a].size());
    total += data + rho2 * pilots;
  }
  const double n = static_cast<double>(cfg.num_subcarriers);
  return total / static_cast<double>(pattern.period()) / (n * n);
}

}  // namespace tdsc
