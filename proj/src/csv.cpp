// SPDX-License-Identifier: Apache-2.0

#include "tdsc/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tdsc::csv {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    fields.push_back(line.substr(begin, comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return fields;
}

std::string config_columns(const ExperimentConfig& cfg) {
  return std::string(to_string(cfg.standard)) + "," + format_cp_ratio(cfg.cp_ratio) + "," + cfg.channel + "," +
         std::to_string(cfg.seed);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("csv: number formatting failed");
  return std::string(buf.data(), end);
}

std::string sweep_row(const CurvePoint& p, const ExperimentConfig& cfg) {
  return format_number(p.snr_db) + "," + format_number(p.pmd_empirical) + "," + format_number(p.pmd_theory) + "," +
         format_number(p.pfa_empirical) + "," + std::to_string(p.trials) + "," + format_number(p.ci_halfwidth) +
         "," + config_columns(cfg);
}

std::string roc_row(const RocPoint& p, const ExperimentConfig& cfg) {
  return format_number(p.snr_db) + "," + format_number(p.p_fa_target) + "," + format_number(p.p_fa_empirical) +
         "," + format_number(p.p_d_empirical) + "," + format_number(p.p_d_theory) + "," + config_columns(cfg);
}

Writer::Writer(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
  row(header);
}

void Writer::row(const std::string& line) {
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

void emit_csv(const std::vector<CurvePoint>& points, const ExperimentConfig& cfg,
              const std::filesystem::path& path) {
  Writer w(path, kSweepHeader);
  for (const auto& p : points) w.row(sweep_row(p, cfg));
}

void emit_csv(const std::vector<RocPoint>& points, const ExperimentConfig& cfg,
              const std::filesystem::path& path) {
  Writer w(path, kRocHeader);
  for (const auto& p : points) w.row(roc_row(p, cfg));
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path.string());
  t.header = split_fields(line);
  while (std::getline(in, line)) {
    auto fields = split_fields(line);
    if (fields.size() != t.header.size())
      throw std::runtime_error("ragged csv row in " + path.string() + ": " + line);
    t.rows.push_back(std::move(fields));
  }
  return t;
}

}  // namespace tdsc::csv
