// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/config.hpp"
#include "tdsc/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace tdsc::csv {

inline constexpr const char* kSweepHeader =
    "snr_db,pmd_empirical,pmd_theory,pfa_empirical,trials,ci_halfwidth,standard,cp_ratio,channel,seed";
inline constexpr const char* kRocHeader =
    "snr_db,p_fa_target,p_fa_empirical,p_d_empirical,p_d_theory,standard,cp_ratio,channel,seed";

/// Shortest representation that round-trips; NaN becomes an empty field.
std::string format_number(double value);

std::string sweep_row(const CurvePoint& point, const ExperimentConfig& cfg);
std::string roc_row(const RocPoint& point, const ExperimentConfig& cfg);

/// Streams rows to a file, flushing after each row so partial sweeps survive.
class Writer {
 public:
  Writer(const std::filesystem::path& path, const std::string& header);
  void row(const std::string& line);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void emit_csv(const std::vector<CurvePoint>& points, const ExperimentConfig& cfg,
              const std::filesystem::path& path);
void emit_csv(const std::vector<RocPoint>& points, const ExperimentConfig& cfg,
              const std::filesystem::path& path);

/// Header plus rows split on commas; throws on ragged rows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
Table read_table(const std::filesystem::path& path);

}  // namespace tdsc::csv
