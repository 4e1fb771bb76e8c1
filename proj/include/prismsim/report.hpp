#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prismsim/settings.hpp"

namespace prismsim {

// One CSV row. Columns are fixed:
//   algo,phase,latency_us,count,total_us,fps_nominal,fps_achieved,
//   mb_per_s,effective_ii[,threads]
// Microseconds print with 3 decimals, rates with 3, seconds (JSON only)
// with 4. Reports carry no timestamps so identical runs produce identical
// bytes.
struct ReportRow {
  std::string algo;
  std::string phase;
  std::optional<double> latency_us;
  std::optional<std::uint64_t> count;
  std::optional<double> total_us;
  std::optional<double> fps_nominal;
  std::optional<double> fps_achieved;
  std::optional<double> mb_per_s;
  std::optional<std::uint64_t> effective_ii;
  std::optional<int> threads;
};

std::string format_us(double us);      // 3 decimals
std::string format_rate(double v);     // 3 decimals
std::string format_seconds(double s);  // 4 decimals

std::string rows_to_csv(const std::vector<ReportRow>& rows, bool threads_col);

void write_text_file(const std::string& path, const std::string& content);

// manifest.json body: tool + rng identity, command, resolved settings,
// settings hash, list of files the run wrote.
std::string manifest_json(const RunSettings& s, const std::string& command,
                          const std::vector<std::string>& outputs);

}  // namespace prismsim
