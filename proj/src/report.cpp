#include "prismsim/report.hpp"

#include "prismsim/rng.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace prismsim {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string format_us(double us) { return fixed(us, 3); }
std::string format_rate(double v) { return fixed(v, 3); }
std::string format_seconds(double s) { return fixed(s, 4); }

std::string rows_to_csv(const std::vector<ReportRow>& rows, bool threads_col) {
  std::string out =
      "algo,phase,latency_us,count,total_us,fps_nominal,fps_achieved,"
      "mb_per_s,effective_ii";
  if (threads_col) out += ",threads";
  out += '\n';
  for (const ReportRow& r : rows) {
    out += r.algo;
    out += ',';
    out += r.phase;
    out += ',';
    if (r.latency_us) out += format_us(*r.latency_us);
    out += ',';
    if (r.count) out += std::to_string(*r.count);
    out += ',';
    if (r.total_us) out += format_us(*r.total_us);
    out += ',';
    if (r.fps_nominal) out += format_rate(*r.fps_nominal);
    out += ',';
    if (r.fps_achieved) out += format_rate(*r.fps_achieved);
    out += ',';
    if (r.mb_per_s) out += format_rate(*r.mb_per_s);
    out += ',';
    if (r.effective_ii) out += std::to_string(*r.effective_ii);
    if (threads_col) {
      out += ',';
      if (r.threads) out += std::to_string(*r.threads);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), std::streamsize(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string manifest_json(const RunSettings& s, const std::string& command,
                          const std::vector<std::string>& outputs) {
  nlohmann::ordered_json j;
  j["tool"] = {{"name", kToolName},
               {"version", kToolVersion},
               {"rng", kRngName}};
  j["command"] = command;
  nlohmann::ordered_json settings;
  for (const auto& [k, v] : settings_key_values(s)) settings[k] = v;
  j["settings"] = settings;
  j["settings_hash"] = settings_hash_hex(s);
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

}  // namespace prismsim
