// SPDX-License-Identifier: Apache-2.0
//
// tdsc: generate, sense, sweep, roc, theory.
//
// Settings precedence, lowest first: built-in defaults, --config file,
// key=value arguments, dedicated flags. TDSC_SEED supplies the seed when none
// of those set it.

#include "tdsc/channel.hpp"
#include "tdsc/config.hpp"
#include "tdsc/csv.hpp"
#include "tdsc/detector.hpp"
#include "tdsc/experiment.hpp"
#include "tdsc/iq_file.hpp"
#include "tdsc/rng.hpp"
#include "tdsc/theory.hpp"

#include <CLI11.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace {

using namespace tdsc;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Errors in what the user asked for, as opposed to failures while doing it.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out, standard, cp_ratio, channel, snr;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials, workers;
  std::optional<double> pfa, sensing_ms;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--config", o.config_path, "Settings file (key = value lines)");
  cmd.add_option("--out", o.out, "Output path (output_path)");
  cmd.add_option("--seed", o.seed, "Master seed (seed)");
  cmd.add_option("--trials", o.trials, "Trials per point and hypothesis (trials)");
  cmd.add_option("--workers", o.workers, "Worker threads, 0 = all cores (workers)");
  cmd.add_option("--standard", o.standard, "wimax, lte or a comma list (standard)");
  cmd.add_option("--cp-ratio", o.cp_ratio, "1/4, 1/8 or a comma list (cp_ratio)");
  cmd.add_option("--channel", o.channel, "Channel profile or a comma list (channel)");
  cmd.add_option("--snr", o.snr, "SNR list in dB, a:step:b or comma list (snr_db_list)");
  cmd.add_option("--pfa", o.pfa, "Target false-alarm probability (p_fa)");
  cmd.add_option("--sensing-ms", o.sensing_ms, "Sensing window in ms (sensing_time)");
  cmd.add_option("overrides", o.overrides, "key=value settings");
}

std::string to_text(double x) { return csv::format_number(x); }

Settings collect_settings(const CommonOptions& o) {
  Settings settings;
  if (!o.config_path.empty()) {
    if (!std::filesystem::exists(o.config_path)) throw UsageError("config file not found: " + o.config_path);
    settings = read_settings_file(o.config_path);
  }
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got '" + kv + "'");
    const auto parsed = parse_settings(kv, "argument");
    settings.insert(settings.end(), parsed.begin(), parsed.end());
  }
  if (o.out) settings.emplace_back("output_path", *o.out);
  if (o.seed) settings.emplace_back("seed", std::to_string(*o.seed));
  if (o.trials) settings.emplace_back("trials", std::to_string(*o.trials));
  if (o.workers) settings.emplace_back("workers", std::to_string(*o.workers));
  if (o.standard) settings.emplace_back("standard", *o.standard);
  if (o.cp_ratio) settings.emplace_back("cp_ratio", *o.cp_ratio);
  if (o.channel) settings.emplace_back("channel", *o.channel);
  if (o.snr) settings.emplace_back("snr_db_list", *o.snr);
  if (o.pfa) settings.emplace_back("p_fa", to_text(*o.pfa));
  if (o.sensing_ms) settings.emplace_back("sensing_time", to_text(*o.sensing_ms / 1000.0));

  const bool has_seed = std::any_of(settings.begin(), settings.end(), [](const auto& kv) { return kv.first == "seed"; });
  if (!has_seed) {
    if (const char* env = std::getenv("TDSC_SEED"); env != nullptr && *env != '\0')
      settings.insert(settings.begin(), {"seed", env});
  }
  return settings;
}

std::vector<ExperimentConfig> configs_from(const CommonOptions& o) {
  try {
    return build_configs(collect_settings(o));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ExperimentConfig single_config(const CommonOptions& o, const char* verb) {
  auto configs = configs_from(o);
  if (configs.size() != 1) throw UsageError(std::string(verb) + " takes a single standard, cp_ratio and channel");
  return configs.front();
}

// CSV goes to output_path when set, otherwise to stdout.
class CsvOut {
 public:
  CsvOut(const std::string& path, const char* header) {
    if (!path.empty()) file_ = std::make_unique<csv::Writer>(path, header);
    else std::cout << header << '\n' << std::flush;
  }
  void row(const std::string& line) {
    if (file_) file_->row(line);
    else std::cout << line << '\n' << std::flush;
  }

 private:
  std::unique_ptr<csv::Writer> file_;
};

int run_sweep(const CommonOptions& o) {
  const auto configs = configs_from(o);
  CsvOut out(configs.front().output_path, csv::kSweepHeader);
  for (const auto& cfg : configs)
    sweep_snr(cfg, [&](const CurvePoint& p) { out.row(csv::sweep_row(p, cfg)); });
  return 0;
}

int run_roc(const CommonOptions& o) {
  const auto configs = configs_from(o);
  CsvOut out(configs.front().output_path, csv::kRocHeader);
  for (const auto& cfg : configs)
    sweep_roc(cfg, cfg.pfa_grid, [&](const RocPoint& p) { out.row(csv::roc_row(p, cfg)); });
  return 0;
}

struct GenerateOptions {
  std::string layout = "burst";
  bool noiseless = false;
};

int run_generate(const CommonOptions& o, const GenerateOptions& g) {
  const ExperimentConfig cfg = single_config(o, "generate");
  if (cfg.output_path.empty()) throw UsageError("generate needs --out");
  if (g.layout != "burst" && g.layout != "frame") throw UsageError("--layout must be burst or frame");
  const Scenario sc = make_scenario(cfg);
  const double snr = cfg.snr_db_list.front();

  // Same chain as a sensing trial: multipath, CFO/phase, receive filter, AWGN.
  Baseband bb = g.layout == "burst" ? build_burst(sc.ofdm, sc.pattern, sc.num_symbols, cfg.seed)
                                    : build_frame(sc.ofdm, FrameConfig{}, sc.pattern, cfg.seed);
  bb = apply_multipath(bb, sc.channel, cfg.seed);
  Engine phase_engine(derive_seed(cfg.seed, Stream::Phase));
  const double phase = boost::random::uniform_real_distribution<double>(-kPi, kPi)(phase_engine);
  apply_cfo_phase_inplace(bb.samples, cfg.cfo_normalized, phase, sc.ofdm.num_subcarriers);
  sc.filter.apply(bb.samples);
  const double noise_power = g.noiseless ? 0.0 : sc.noise_power(snr);
  if (noise_power > 0.0) {
    Engine noise_engine(derive_seed(cfg.seed, Stream::Noise));
    add_complex_gaussian(bb.samples, 0, bb.size(), noise_power, noise_engine);
  }

  const std::filesystem::path path = cfg.output_path;
  io::write_iq(path, bb.samples);
  io::write_symbol_starts(io::starts_path(path), bb.downlink_starts());
  const io::Metadata meta = {
      {"sample_rate", to_text(cfg.sample_rate)},
      {"fft_size", std::to_string(sc.ofdm.num_subcarriers)},
      {"cp_len", std::to_string(sc.ofdm.cp_len)},
      {"standard", to_string(cfg.standard)},
      {"seed", std::to_string(cfg.seed)},
      {"used_subcarriers", std::to_string(sc.ofdm.used_subcarriers)},
      {"pilot_boost_db", to_text(20.0 * std::log10(sc.pattern.pilot_amplitude()))},
      {"cell_id", std::to_string(cfg.cell_id)},
      {"rolloff", to_text(cfg.rolloff)},
      {"v", std::to_string(sc.tdsc.v)},
      {"channel", cfg.channel},
      {"cfo_normalized", to_text(cfg.cfo_normalized)},
      {"phase", to_text(phase)},
      {"snr_db", g.noiseless ? "inf" : to_text(snr)},
      {"noise_power", to_text(noise_power)},
      {"layout", g.layout},
  };
  io::write_metadata(io::metadata_path(path), meta);
  std::cout << "wrote " << bb.size() << " samples (" << bb.downlink_starts().size() << " downlink symbols) to "
            << path.string() << '\n';
  return 0;
}

std::string meta_get(const io::Metadata& meta, const std::string& key) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw std::runtime_error("metadata lacks '" + key + "'");
  return it->second;
}

struct SenseOptions {
  std::string input;
  std::optional<double> noise_power;
  std::optional<std::size_t> v;
};

int run_sense(const CommonOptions& o, const SenseOptions& s) {
  ExperimentConfig cfg = single_config(o, "sense");
  const std::filesystem::path path = s.input;
  const auto meta = io::read_metadata(io::metadata_path(path));
  const ComplexVector samples = io::read_iq(path);
  const IndexList starts = io::read_symbol_starts(io::starts_path(path));

  // The capture defines the grid; the command line only sets p_fa.
  const auto fft = static_cast<std::size_t>(std::stoull(meta_get(meta, "fft_size")));
  const auto cp = static_cast<std::size_t>(std::stoull(meta_get(meta, "cp_len")));
  apply_setting(cfg, "standard", meta_get(meta, "standard"));
  apply_setting(cfg, "fft_size", std::to_string(fft));
  apply_setting(cfg, "cp_ratio", to_text(static_cast<double>(cp) / static_cast<double>(fft)));
  apply_setting(cfg, "sample_rate", meta_get(meta, "sample_rate"));
  for (const char* key : {"used_subcarriers", "pilot_boost_db", "cell_id", "rolloff", "v"})
    if (meta.count(key)) apply_setting(cfg, key, meta.at(key));
  if (s.v) cfg.v = *s.v;
  // The window length is irrelevant here; keep the scenario builder satisfied.
  cfg.sensing_time = std::max(cfg.sensing_time, 1e3 * static_cast<double>(fft + cp) / cfg.sample_rate);
  const Scenario sc = make_scenario(cfg);

  double noise_power = 0.0;
  if (s.noise_power) noise_power = *s.noise_power;
  else noise_power = std::stod(meta_get(meta, "noise_power"));

  const std::size_t v = sc.tdsc.v;
  const std::size_t period = sc.pattern.period();
  const std::size_t s_v = accumulation_length(starts.size(), v, period);
  const TdscConfig tdsc = make_tdsc_config(sc.ofdm, v, s_v);
  const DetectionResult r = sense(samples, starts, tdsc, sc.pattern, noise_power, cfg.p_fa);

  const char* decision = r.decision == Hypothesis::H1 ? "H1" : "H0";
  std::cout << (r.decision == Hypothesis::H1 ? "signal present" : "no signal") << ": |C(v)| = " << r.statistic
            << ", threshold = " << r.threshold << " (p_fa " << cfg.p_fa << ")\n";
  std::cout << std::setprecision(17) << "decision=" << decision << "\nstatistic=" << r.statistic
            << "\nc_real=" << r.c_value.real() << "\nc_imag=" << r.c_value.imag() << "\nthreshold=" << r.threshold
            << "\nsigma_h0_sq=" << r.sigma_h0_sq << "\nnoise_power=" << noise_power << "\np_fa=" << cfg.p_fa
            << "\nv=" << v << "\ns_v=" << s_v << '\n';
  return 0;
}

struct TheoryOptions {
  std::optional<double> lambda;
  bool roc = false;
};

int run_theory(const CommonOptions& o, const TheoryOptions& t) {
  const ExperimentConfig cfg = single_config(o, "theory");
  std::cout << std::setprecision(10);
  if (t.lambda) {
    if (!(*t.lambda >= 0.0)) throw UsageError("--lambda must be non-negative");
    // P_MD depends only on the noncentrality and p_fa; unit H0 variance is arbitrary.
    const HypothesisParams h = hypothesis_from_noncentrality(1.0, *t.lambda);
    if (t.roc) {
      std::cout << "p_fa,p_d\n";
      for (const auto& p : roc_analytic(h, cfg.pfa_grid)) std::cout << p.p_fa << ',' << p.p_d << '\n';
    } else {
      std::cout << "P_MD = " << pmd_analytic(threshold(1.0, cfg.p_fa), h) << '\n';
    }
    return 0;
  }

  const Scenario sc = make_scenario(cfg);
  if (!sc.lambda_mean) throw UsageError("no closed form for channel '" + cfg.channel + "'; use a single-path channel");
  if (t.roc) {
    std::cout << "snr_db,p_fa,p_d_theory\n";
    for (double snr : cfg.snr_db_list)
      for (double p : cfg.pfa_grid) std::cout << snr << ',' << p << ',' << sc.pd_theory(snr, p) << '\n';
  } else {
    std::cout << "snr_db,noncentrality,pmd_theory\n";
    for (double snr : cfg.snr_db_list) {
      const HypothesisParams h = make_hypothesis(sc.sigma_h0_sq(snr), *sc.lambda_mean);
      std::cout << snr << ',' << h.noncentrality << ',' << sc.pmd_theory(snr) << '\n';
    }
  }
  return 0;
}

std::string keys_footer() {
  std::ostringstream s;
  s << "Settings (config file keys; also accepted as key=value arguments):\n";
  for (const auto& k : config_keys())
    s << "  " << std::left << std::setw(18) << k.key << std::setw(28) << ("[" + k.default_value + "]") << k.help
      << '\n';
  s << "\nPrecedence: defaults < --config < key=value < flags. TDSC_SEED sets the seed if nothing else does.\n"
       "Exit codes: 0 success, 1 usage error, 2 runtime error.";
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TDSC spectrum sensing: waveform generation, detection and Monte-Carlo sweeps", "tdsc"};
  app.footer(keys_footer());
  app.require_subcommand(1);

  CommonOptions gen_o, sense_o, sweep_o, roc_o, theory_o;
  GenerateOptions gen;
  SenseOptions sns;
  TheoryOptions th;

  auto* generate = app.add_subcommand("generate", "Write an impaired IQ capture plus .meta and .starts sidecars");
  add_common(*generate, gen_o);
  generate->add_option("--layout", gen.layout, "burst (sensing window) or frame (one TDD frame)")
      ->capture_default_str();
  generate->add_flag("--noiseless", gen.noiseless, "Skip the AWGN stage");

  auto* sense_cmd = app.add_subcommand("sense", "Run the detector on an IQ capture");
  add_common(*sense_cmd, sense_o);
  sense_cmd->add_option("--in", sns.input, "IQ file written by generate")->required();
  sense_cmd->add_option("--noise-power", sns.noise_power, "Per-sample noise power (default: from metadata)");
  sense_cmd->add_option("--v", sns.v, "Symbol offset v (default: pilot period)");

  auto* sweep = app.add_subcommand("sweep", "P_MD / P_FA versus SNR, CSV");
  add_common(*sweep, sweep_o);
  auto* roc = app.add_subcommand("roc", "Empirical and analytic ROC per SNR, CSV");
  add_common(*roc, roc_o);

  auto* theory = app.add_subcommand("theory", "Closed-form P_MD or ROC");
  add_common(*theory, theory_o);
  theory->add_option("--lambda", th.lambda, "Noncentrality Lambda^2 / sigma_H1^2 (skips the scenario)");
  theory->add_flag("--roc", th.roc, "Print the ROC over pfa_grid instead of P_MD");

  for (auto* cmd : {generate, sense_cmd, sweep, roc, theory}) cmd->footer(keys_footer());

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen_o, gen);
    if (*sense_cmd) return run_sense(sense_o, sns);
    if (*sweep) return run_sweep(sweep_o);
    if (*roc) return run_roc(roc_o);
    if (*theory) return run_theory(theory_o, th);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
