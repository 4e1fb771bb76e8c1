#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "prismsim/axi.hpp"
#include "prismsim/config.hpp"

namespace prismsim {

// Everything a run needs, as read from a key=value file plus overrides.
// Scene fields stay in string/number form here; the stream module turns
// them into a SceneConfig.
struct RunSettings {
  AcquisitionConfig acq;
  AxiCostModel axi;
  std::string scene_base = "constant:1000";
  double scene_signal = 400.0;
  double scene_noise_sigma = 0.0;
  double scene_led_hz = 0.0;
  double scene_led_phase = 0.0;
  double scene_led_amp = 0.0;
  std::uint64_t seed = 0;
};

// Flat key=value file, one pair per line, '#' comments and blank lines
// allowed. Unknown keys are rejected. Key names match the struct fields:
//   groups frames_per_group height width pixel_depth packet_width clock_ns
//   trigger_us banks offset axi_single_read axi_single_write
//   axi_burst_read_ovh axi_burst_write_ovh axi_ports axi_max_burst_len
//   scene_base scene_signal scene_noise_sigma scene_led_hz scene_led_phase
//   scene_led_amp seed
RunSettings load_settings_file(const std::string& path);

// "key=value", same key set and checking as the file.
void apply_override(RunSettings& s, const std::string& key_eq_value);

// Canonical (sorted, fully resolved) view: feeds the manifest and the hash.
std::map<std::string, std::string> settings_key_values(const RunSettings& s);

std::uint64_t fnv1a64(std::string_view data);
std::string settings_hash_hex(const RunSettings& s);

}  // namespace prismsim
