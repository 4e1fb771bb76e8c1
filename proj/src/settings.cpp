#include "prismsim/settings.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace prismsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  }
  if (used != v.size() || v[0] == '-')
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

std::uint32_t parse_u32(const std::string& key, const std::string& v) {
  std::uint64_t out = parse_u64(key, v);
  if (out > 0xFFFFFFFFull) throw ConfigError(key + " out of range: " + v);
  return std::uint32_t(out);
}

double parse_f64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

void set_key(RunSettings& s, const std::string& key, const std::string& val) {
  if (key == "groups") s.acq.groups = parse_u32(key, val);
  else if (key == "frames_per_group") s.acq.frames_per_group = parse_u32(key, val);
  else if (key == "height") s.acq.height = parse_u32(key, val);
  else if (key == "width") s.acq.width = parse_u32(key, val);
  else if (key == "pixel_depth") s.acq.pixel_depth = parse_u32(key, val);
  else if (key == "packet_width") s.acq.packet_width = parse_u32(key, val);
  else if (key == "clock_ns") s.acq.clock_ns = parse_f64(key, val);
  else if (key == "trigger_us") s.acq.trigger_us = parse_f64(key, val);
  else if (key == "banks") s.acq.banks = parse_u32(key, val);
  else if (key == "offset") s.acq.offset = parse_u32(key, val);
  else if (key == "axi_single_read") s.axi.single_read = parse_u32(key, val);
  else if (key == "axi_single_write") s.axi.single_write = parse_u32(key, val);
  else if (key == "axi_burst_read_ovh") s.axi.burst_read_overhead = parse_u32(key, val);
  else if (key == "axi_burst_write_ovh") s.axi.burst_write_overhead = parse_u32(key, val);
  else if (key == "axi_ports") s.axi.ports = parse_u32(key, val);
  else if (key == "axi_max_burst_len") s.axi.max_burst_len = parse_u32(key, val);
  else if (key == "scene_base") s.scene_base = val;
  else if (key == "scene_signal") s.scene_signal = parse_f64(key, val);
  else if (key == "scene_noise_sigma") s.scene_noise_sigma = parse_f64(key, val);
  else if (key == "scene_led_hz") s.scene_led_hz = parse_f64(key, val);
  else if (key == "scene_led_phase") s.scene_led_phase = parse_f64(key, val);
  else if (key == "scene_led_amp") s.scene_led_amp = parse_f64(key, val);
  else if (key == "seed") s.seed = parse_u64(key, val);
  else throw ConfigError("unknown configuration key: '" + key + "'");
}

}  // namespace

RunSettings load_settings_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  RunSettings s;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    set_key(s, key, val);
  }
  return s;
}

void apply_override(RunSettings& s, const std::string& key_eq_value) {
  std::size_t eq = key_eq_value.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= key_eq_value.size())
    throw ConfigError("override must be key=value: '" + key_eq_value + "'");
  set_key(s, trim(key_eq_value.substr(0, eq)),
          trim(key_eq_value.substr(eq + 1)));
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::map<std::string, std::string> settings_key_values(const RunSettings& s) {
  std::map<std::string, std::string> kv;
  kv["groups"] = std::to_string(s.acq.groups);
  kv["frames_per_group"] = std::to_string(s.acq.frames_per_group);
  kv["height"] = std::to_string(s.acq.height);
  kv["width"] = std::to_string(s.acq.width);
  kv["pixel_depth"] = std::to_string(s.acq.pixel_depth);
  kv["packet_width"] = std::to_string(s.acq.packet_width);
  kv["clock_ns"] = num(s.acq.clock_ns);
  kv["trigger_us"] = num(s.acq.trigger_us);
  kv["banks"] = std::to_string(s.acq.banks);
  kv["offset"] = std::to_string(
      s.acq.offset.value_or(s.acq.pixel_depth < 32 ? 1u << s.acq.pixel_depth : 0));
  kv["axi_single_read"] = std::to_string(s.axi.single_read);
  kv["axi_single_write"] = std::to_string(s.axi.single_write);
  kv["axi_burst_read_ovh"] = std::to_string(s.axi.burst_read_overhead);
  kv["axi_burst_write_ovh"] = std::to_string(s.axi.burst_write_overhead);
  kv["axi_ports"] = std::to_string(s.axi.ports);
  kv["axi_max_burst_len"] = std::to_string(s.axi.max_burst_len);
  kv["scene_base"] = s.scene_base;
  kv["scene_signal"] = num(s.scene_signal);
  kv["scene_noise_sigma"] = num(s.scene_noise_sigma);
  kv["scene_led_hz"] = num(s.scene_led_hz);
  kv["scene_led_phase"] = num(s.scene_led_phase);
  kv["scene_led_amp"] = num(s.scene_led_amp);
  kv["seed"] = std::to_string(s.seed);
  return kv;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string settings_hash_hex(const RunSettings& s) {
  std::ostringstream flat;
  for (const auto& [k, v] : settings_key_values(s)) flat << k << '=' << v << '\n';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                (unsigned long long)fnv1a64(flat.str()));
  return buf;
}

}  // namespace prismsim
