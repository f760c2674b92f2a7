// SPDX-License-Identifier: Apache-2.0

#include "tdsc/config.hpp"

#include "tdsc/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tdsc {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::invalid_argument bad_value(const std::string& key, const std::string& value, const std::string& why) {
  return std::invalid_argument("config key '" + key + "': bad value '" + value + "' (" + why + ")");
}

double to_double(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  double out = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, out);
  if (ec != std::errc() || ptr != end || t.empty()) throw bad_value(key, value, "expected a number");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  std::uint64_t out = 0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, out);
  if (ec != std::errc() || ptr != end || t.empty()) throw bad_value(key, value, "expected a non-negative integer");
  return out;
}

}  // namespace

double parse_cp_ratio(const std::string& text) {
  const std::string t = trim(text);
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    const double num = to_double("cp_ratio", t.substr(0, slash));
    const double den = to_double("cp_ratio", t.substr(slash + 1));
    if (den == 0.0) throw bad_value("cp_ratio", text, "zero denominator");
    return num / den;
  }
  return to_double("cp_ratio", t);
}

std::string format_cp_ratio(double ratio) {
  for (int den : {2, 4, 8, 16, 32})
    if (std::abs(ratio * den - 1.0) < 1e-12) return "1/" + std::to_string(den);
  std::ostringstream out;
  out << ratio;
  return out.str();
}

std::vector<double> parse_number_list(const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw bad_value("list", text, "range must be start:step:stop");
    const double start = to_double("list", parts[0]);
    const double step = to_double("list", parts[1]);
    const double stop = to_double("list", parts[2]);
    if (step == 0.0 || (stop - start) / step < 0.0) throw bad_value("list", text, "empty or infinite range");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  for (const auto& part : split(t, ','))
    if (!part.empty()) out.push_back(to_double("list", part));
  return out;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (!(sensing_time > 0.0)) throw std::invalid_argument("config: sensing_time must be positive");
  if (snr_db_list.empty()) throw std::invalid_argument("config: snr_db_list is empty");
  if (!(p_fa > 0.0 && p_fa <= 1.0)) throw std::invalid_argument("config: p_fa must lie in (0, 1]");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("config: sample_rate must be positive");
  if (!(cp_ratio > 0.0 && cp_ratio < 1.0)) throw std::invalid_argument("config: cp_ratio must lie in (0, 1)");
  for (double p : pfa_grid)
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("config: pfa_grid values must lie in (0, 1]");
  const auto& names = profile_names();
  if (std::find(names.begin(), names.end(), channel) == names.end())
    throw std::invalid_argument("config: unknown channel '" + channel + "'");
}

const std::vector<KeyHelp>& config_keys() {
  static const std::vector<KeyHelp> keys = {
      {"standard", "wimax", "wimax or lte (comma list allowed)"},
      {"fft_size", "1024 (wimax) / 1536 (lte)", "FFT size N"},
      {"cp_ratio", "1/4", "cyclic prefix ratio L/N, 1/4 or 1/8 (comma list allowed)"},
      {"sample_rate", "8.4e6", "sample rate in Hz"},
      {"snr_db_list", "-23:1:-14", "SNR points in dB, start:step:stop or comma list"},
      {"p_fa", "0.01", "target false-alarm probability"},
      {"sensing_time", "0.05", "sensing window in seconds"},
      {"channel", "awgn", "awgn, flat_static, flat_rayleigh, rayleigh_ped_a, rician_ped_a, rayleigh_veh_a, rician_veh_a (comma list allowed)"},
      {"cfo_normalized", "0.5", "carrier frequency offset over subcarrier spacing"},
      {"trials", "1000", "Monte-Carlo trials per point and hypothesis"},
      {"seed", "1", "master seed (TDSC_SEED env var is the fallback)"},
      {"output_path", "", "CSV / IQ output path"},
      {"workers", "0", "worker threads, 0 = all cores"},
      {"pfa_grid", "0.001,...,0.5,1", "ROC false-alarm grid (0.001 0.002 0.005 0.01 0.02 0.05 0.1 0.2 0.5 1)"},
      {"used_subcarriers", "840 (wimax) / 900 (lte)", "occupied subcarriers, centered, DC null"},
      {"pilot_boost_db", "2.5 (wimax) / 0 (lte)", "pilot amplitude rho in dB over unit data power"},
      {"v", "pilot period", "symbol-index difference of correlated pairs"},
      {"rolloff", "0.1", "transmit window roll-off, at most cp_ratio"},
      {"k_factor_db", "6", "Rician K factor on the first tap"},
      {"cell_id", "0", "LTE cell identity seeding the RS values"},
  };
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "standard") {
    cfg.standard = parse_standard(value);
  } else if (key == "fft_size") {
    cfg.fft_size = to_uint(key, value);
  } else if (key == "cp_ratio") {
    cfg.cp_ratio = parse_cp_ratio(value);
  } else if (key == "sample_rate") {
    cfg.sample_rate = to_double(key, value);
  } else if (key == "snr_db_list") {
    cfg.snr_db_list = parse_number_list(value);
  } else if (key == "p_fa") {
    cfg.p_fa = to_double(key, value);
  } else if (key == "sensing_time") {
    cfg.sensing_time = to_double(key, value);
  } else if (key == "channel") {
    const auto& names = profile_names();
    if (std::find(names.begin(), names.end(), value) == names.end())
      throw bad_value(key, value, "unknown channel profile");
    cfg.channel = value;
  } else if (key == "cfo_normalized") {
    cfg.cfo_normalized = to_double(key, value);
  } else if (key == "trials") {
    cfg.trials = to_uint(key, value);
  } else if (key == "seed") {
    cfg.seed = to_uint(key, value);
  } else if (key == "output_path") {
    cfg.output_path = value;
  } else if (key == "workers") {
    cfg.workers = to_uint(key, value);
  } else if (key == "pfa_grid") {
    cfg.pfa_grid = parse_number_list(value);
  } else if (key == "used_subcarriers") {
    cfg.used_subcarriers = to_uint(key, value);
  } else if (key == "pilot_boost_db") {
    cfg.pilot_boost_db = to_double(key, value);
  } else if (key == "v") {
    cfg.v = to_uint(key, value);
  } else if (key == "rolloff") {
    cfg.rolloff = to_double(key, value);
  } else if (key == "k_factor_db") {
    cfg.k_factor_db = to_double(key, value);
  } else if (key == "cell_id") {
    cfg.cell_id = static_cast<std::uint32_t>(to_uint(key, value));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

Settings parse_settings(const std::string& text, const std::string& source) {
  Settings out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = config_keys();
    if (std::none_of(keys.begin(), keys.end(), [&](const KeyHelp& k) { return k.key == key; }))
      throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    out.emplace_back(key, value);
  }
  return out;
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_settings(buffer.str(), path.string());
}

std::vector<ExperimentConfig> build_configs(const Settings& settings) {
  // Last value wins for each key; list-valued keys are expanded afterwards.
  std::vector<std::string> standards = {"wimax"}, cp_ratios = {"1/4"}, channels = {"awgn"};
  ExperimentConfig base;
  for (const auto& [key, value] : settings) {
    if (key == "standard") {
      standards = split(value, ',');
    } else if (key == "cp_ratio") {
      cp_ratios = split(value, ',');
    } else if (key == "channel") {
      channels = split(value, ',');
    } else {
      apply_setting(base, key, value);
    }
  }
  std::vector<ExperimentConfig> out;
  for (const auto& s : standards)
    for (const auto& c : cp_ratios)
      for (const auto& ch : channels) {
        ExperimentConfig cfg = base;
        apply_setting(cfg, "standard", s);
        apply_setting(cfg, "cp_ratio", c);
        apply_setting(cfg, "channel", ch);
        cfg.validate();
        out.push_back(std::move(cfg));
      }
  return out;
}

}  // namespace tdsc
