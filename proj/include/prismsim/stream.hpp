#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prismsim/config.hpp"
#include "prismsim/kernels.hpp"

namespace prismsim {

struct Trigger {
  enum class Mode { Software, Led };
  Mode mode = Mode::Software;
  double software_us = 57.0;
  double led_hz = 0.0;  // Led mode: one frame per LED period
};

double trigger_interval_us(const Trigger& t);

struct LedDrive {
  double hz = 0.0;
  double phase_rad = 0.0;
  double amplitude = 0.0;  // pixel units, modulates both frame kinds
};

// Synthetic scene: static base pattern, an excitation-only signal term, an
// optional LED sinusoid sampled at each frame's arrival time, and i.i.d.
// per-pixel noise. Values are rounded then clamped to the sensor range.
struct SceneConfig {
  std::function<double(std::uint32_t x, std::uint32_t y)> base =
      [](std::uint32_t, std::uint32_t) { return 0.0; };
  double signal_amplitude = 0.0;
  double noise_sigma = 0.0;
  std::optional<LedDrive> led;
  std::uint64_t seed = 0;
};

// Base patterns by name: "constant:V", "gradient:START:STEP" (value
// START + STEP*(x+y)), "checker:A:B:CELL". Used by the CLI config keys.
std::function<double(std::uint32_t, std::uint32_t)> base_pattern_from_string(
    const std::string& s);

// Generates frames in acquisition order: frame index fast, group slow,
// arrivals spaced exactly one trigger interval apart. Deterministic in
// (cfg, scene.seed, bank).
class FrameStream {
 public:
  FrameStream(const ValidConfig& cfg, const SceneConfig& scene,
              double interval_us, std::uint32_t bank = 0);

  bool done() const { return ordinal_ >= total_; }
  std::uint64_t total() const { return total_; }
  TimedFrame next();

 private:
  ValidConfig cfg_;
  SceneConfig scene_;
  double interval_us_;
  std::uint32_t bank_;
  std::uint64_t ordinal_ = 0;
  std::uint64_t total_;
};

std::vector<TimedFrame> generate_stream(const ValidConfig& cfg,
                                        const SceneConfig& scene,
                                        double interval_us,
                                        std::uint32_t bank = 0);

// Little-endian 16-bit raster, row-major.
void write_raw(const std::string& path, const std::vector<std::uint16_t>& px);
// 8-bit binary PGM preview, rescaled from pixel_depth.
void write_pgm(const std::string& path, const std::vector<std::uint16_t>& px,
               std::uint32_t height, std::uint32_t width,
               std::uint32_t pixel_depth);

}  // namespace prismsim
