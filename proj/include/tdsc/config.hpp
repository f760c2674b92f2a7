// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/types.hpp"

#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace tdsc {

/// One experiment: a standard, a CP ratio and a channel swept over SNR.
/// Zero / NaN fields take the standard's default when the scenario is built.
struct ExperimentConfig {
  Standard standard = Standard::WiMAX;
  std::size_t fft_size = 0;  // 0: 1024 for WiMAX, 1536 for LTE
  double cp_ratio = 0.25;
  double sample_rate = 8.4e6;
  std::vector<double> snr_db_list = {-23, -22, -21, -20, -19, -18, -17, -16, -15, -14};
  double p_fa = 0.01;
  double sensing_time = 0.05;  // s
  std::string channel = "awgn";
  double cfo_normalized = 0.5;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::string output_path;
  std::size_t workers = 0;  // 0: hardware concurrency
  std::vector<double> pfa_grid = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  std::size_t used_subcarriers = 0;  // 0: 840 (WiMAX 1024) / 900 (LTE 1536), else per FFT size
  double pilot_boost_db = std::numeric_limits<double>::quiet_NaN();  // NaN: 2.5 dB WiMAX, 0 dB LTE
  std::size_t v = 0;                                                 // 0: pilot period
  double rolloff = 0.1;
  double k_factor_db = 6.0;
  std::uint32_t cell_id = 0;

  void validate() const;
};

/// Ordered key/value settings; later entries override earlier ones.
using Settings = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; `#` starts a comment. Throws with line context.
Settings parse_settings(const std::string& text, const std::string& source = "<text>");
Settings read_settings_file(const std::filesystem::path& path);

/// Applies one setting. Unknown keys and malformed values throw.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Applies settings in order. `standard`, `cp_ratio` and `channel` may hold
/// comma-separated lists; the result is their cartesian product in
/// standard-major order.
std::vector<ExperimentConfig> build_configs(const Settings& settings);

struct KeyHelp {
  std::string key;
  std::string default_value;
  std::string help;
};
const std::vector<KeyHelp>& config_keys();

/// "1/4", "1/8" or a decimal.
double parse_cp_ratio(const std::string& text);
std::string format_cp_ratio(double ratio);

/// "-23:1:-14" (start:step:stop, inclusive) or a comma list.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace tdsc
