// SPDX-License-Identifier: Apache-2.0

#include "tdsc/pilot_grid.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tdsc {

const char* to_string(Standard standard) {
  switch (standard) {
    case Standard::WiMAX:
      return "wimax";
    case Standard::LTE:
      return "lte";
  }
  return "?";
}

Standard parse_standard(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "wimax") return Standard::WiMAX;
  if (lower == "lte") return Standard::LTE;
  throw std::invalid_argument("unknown standard '" + text + "' (expected wimax or lte)");
}

PilotPattern::PilotPattern(std::size_t num_subcarriers, std::vector<IndexList> configs,
                           double pilot_amplitude, ComplexVector values, bool allow_empty_sets)
    : num_subcarriers_(num_subcarriers),
      configs_(std::move(configs)),
      pilot_amplitude_(pilot_amplitude),
      values_(std::move(values)) {
  if (num_subcarriers_ == 0) throw std::invalid_argument("pilot pattern: zero subcarriers");
  if (configs_.empty()) throw std::invalid_argument("pilot pattern: period must be >= 1");
  if (!(pilot_amplitude_ > 0.0))
    throw std::invalid_argument("pilot pattern: pilot amplitude must be positive");
  if (static_cast<std::size_t>(values_.size()) != num_subcarriers_)
    throw std::invalid_argument("pilot pattern: one pilot value per subcarrier required");
  for (auto& set : configs_) {
    if (set.empty() && !allow_empty_sets)
      throw std::invalid_argument("pilot pattern: empty pilot set");
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
      throw std::invalid_argument("pilot pattern: duplicate pilot index");
    if (!set.empty() && set.back() >= num_subcarriers_)
      throw std::invalid_argument("pilot pattern: pilot index out of range");
  }
}

PilotPattern PilotPattern::with_amplitude(double pilot_amplitude) const {
  if (!(pilot_amplitude >= 0.0)) throw std::invalid_argument("pilot pattern: negative amplitude");
  PilotPattern copy = *this;
  copy.pilot_amplitude_ = pilot_amplitude;
  return copy;
}

const IndexList& pilots_for_symbol(const PilotPattern& pattern, std::size_t l) {
  return pattern.configs()[l % pattern.period()];
}

std::vector<std::size_t> matching_offsets(const PilotPattern& pattern, std::size_t max_v) {
  const std::size_t period = pattern.period();
  if (max_v < period)
    throw std::invalid_argument("matching_offsets: max_v must be at least the pattern period");
  std::vector<std::size_t> offsets;
  for (std::size_t v = period; v <= max_v; v += period) offsets.push_back(v);
  return offsets;
}

PilotPattern lte_pattern(std::size_t fft_size, std::size_t symbols_per_slot, std::uint32_t cell_id,
                         double pilot_amplitude) {
  if (fft_size < 12 || fft_size % 12 != 0)
    throw std::invalid_argument("lte_pattern: fft_size must be a positive multiple of 12");
  if (symbols_per_slot != 7)
    throw std::invalid_argument("lte_pattern: only the 7-symbol normal-CP slot is supported");

  std::vector<IndexList> configs(symbols_per_slot);
  for (std::size_t k = 0; k < fft_size; k += 6) configs[0].push_back(k);
  for (std::size_t k = 3; k < fft_size; k += 6) configs[4].push_back(k);

  std::mt19937 gen(cell_id);
  ComplexVector values(static_cast<Eigen::Index>(fft_size));
  const double a = 1.0 / std::sqrt(2.0);
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const auto bits = gen();
    values(k) = Complex((bits & 1u) ? -a : a, (bits & 2u) ? -a : a);
  }
  return PilotPattern(fft_size, std::move(configs), pilot_amplitude, std::move(values), true);
}

std::size_t wimax_used_subcarriers(std::size_t fft_size) {
  switch (fft_size) {
    case 128:
      return 84;
    case 512:
      return 420;
    case 1024:
      return 840;
    case 2048:
      return 1680;
    default:
      throw std::invalid_argument("wimax: unsupported fft_size " + std::to_string(fft_size) +
                                  " (expected 128, 512, 1024 or 2048)");
  }
}

std::vector<bool> centered_occupancy(std::size_t fft_size, std::size_t used) {
  if (used % 2 != 0 || used >= fft_size)
    throw std::invalid_argument("occupancy: used subcarriers must be even and below the FFT size");
  std::vector<bool> occupied(fft_size, false);
  for (std::size_t k = 1; k <= used / 2; ++k) {
    occupied[k] = true;
    occupied[fft_size - k] = true;
  }
  return occupied;
}

namespace {

// Logical used-subcarrier offset u (lowest frequency first) to FFT bin.
std::size_t used_offset_to_bin(std::size_t u, std::size_t used, std::size_t fft_size) {
  const std::size_t half = used / 2;
  return u < half ? fft_size - half + u : u - half + 1;
}

}  // namespace

PilotPattern wimax_pattern(std::size_t fft_size, double pilot_amplitude) {
  const std::size_t used = wimax_used_subcarriers(fft_size);
  constexpr std::size_t kSpacing = 14;
  std::vector<IndexList> configs(2);
  for (std::size_t u = 4; u < used; u += kSpacing)
    configs[0].push_back(used_offset_to_bin(u, used, fft_size));
  for (std::size_t u = 8; u < used; u += kSpacing)
    configs[1].push_back(used_offset_to_bin(u, used, fft_size));

  // BPSK pilot values from a fixed generator.
  std::mt19937 gen(0x16e);
  ComplexVector values(static_cast<Eigen::Index>(fft_size));
  for (Eigen::Index k = 0; k < values.size(); ++k) values(k) = (gen() & 1u) ? -1.0 : 1.0;
  return PilotPattern(fft_size, std::move(configs), pilot_amplitude, std::move(values));
}

PilotPattern restrict_to(const PilotPattern& pattern, const std::vector<bool>& occupied) {
  if (occupied.size() != pattern.num_subcarriers())
    throw std::invalid_argument("restrict_to: occupancy mask size mismatch");
  std::vector<IndexList> configs;
  configs.reserve(pattern.period());
  for (const auto& set : pattern.configs()) {
    IndexList kept;
    std::copy_if(set.begin(), set.end(), std::back_inserter(kept),
                 [&](std::size_t k) { return occupied[k]; });
    configs.push_back(std::move(kept));
  }
  return PilotPattern(pattern.num_subcarriers(), std::move(configs), 1.0, pattern.values(), true)
      .with_amplitude(pattern.pilot_amplitude());
}

std::string to_golden_text(const PilotPattern& pattern) {
  std::ostringstream out;
  for (std::size_t a = 0; a < pattern.period(); ++a)
    for (std::size_t k : pattern.configs()[a]) out << a << ',' << k << '\n';
  return out.str();
}

}  // namespace tdsc
