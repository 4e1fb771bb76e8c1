#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prismsim {

inline constexpr char kToolName[] = "prismsim";
inline constexpr char kToolVersion[] = "1.0.0";

// Pixels travel in fixed 16-bit containers regardless of sensor depth.
inline constexpr std::uint32_t kContainerBits = 16;

// On-chip vs on-board memory budgets, bytes (decimal units throughout).
inline constexpr std::uint64_t kBramBudgetBytes = 12'350'000;
inline constexpr std::uint64_t kDramBudgetBytes = 2'000'000'000;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Acquisition parameters as they arrive from file/CLI. frames_per_group counts
// reference+excitation frames, so it must be even; offset defaults to
// 2^pixel_depth which keeps every pairwise difference strictly positive.
struct AcquisitionConfig {
  std::uint32_t groups = 8;
  std::uint32_t frames_per_group = 1000;
  std::uint32_t height = 256;
  std::uint32_t width = 80;
  std::uint32_t pixel_depth = 12;
  std::uint32_t packet_width = 128;  // bits per stream packet
  double clock_ns = 2.0;
  double trigger_us = 57.0;
  std::uint32_t banks = 1;
  std::optional<std::uint32_t> offset;
};

struct FrameGeometry {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t pixels_per_packet = 0;
  std::uint32_t packets_per_frame = 0;
  std::uint64_t frame_bytes = 0;

  std::uint64_t pixels() const { return std::uint64_t(height) * width; }
};

// Checked configuration. Everything downstream takes this, so invalid
// combinations are rejected in exactly one place.
struct ValidConfig {
  AcquisitionConfig acq;
  FrameGeometry geom;
  std::uint32_t offset = 0;
  std::vector<std::string> warnings;

  std::uint32_t groups() const { return acq.groups; }
  std::uint32_t frames_per_group() const { return acq.frames_per_group; }
  std::uint32_t pairs_per_group() const { return acq.frames_per_group / 2; }
  std::uint64_t total_frames() const {
    return std::uint64_t(acq.groups) * acq.frames_per_group;
  }
  double clock_ns() const { return acq.clock_ns; }
  double interval_us() const { return acq.trigger_us; }
  std::uint16_t pixel_max() const {
    return std::uint16_t((1u << acq.pixel_depth) - 1u);
  }
};

// Rejects: zero dimensions, odd frames_per_group, pixel_depth > container,
// packet width not a container multiple, frame size not a packet multiple
// (frames are never padded), non-positive clock/trigger, offset > 16 bit.
// Warns (does not reject) when offset is small enough that differences can
// go negative and wrap.
ValidConfig validate_config(const AcquisitionConfig& in);

enum class Algo { SingleBeat, BurstWrite, BurstRw, BurstRwV2 };

inline constexpr Algo kAllAlgos[] = {Algo::SingleBeat, Algo::BurstWrite,
                                     Algo::BurstRw, Algo::BurstRwV2};

std::string_view algo_name(Algo a);
// Accepts the canonical names plus alg1/alg2/alg3/alg3v2 aliases.
std::optional<Algo> algo_from_name(std::string_view s);

enum class Placement { Bram, Dram };

struct BufferPlan {
  std::string name;
  std::uint64_t bytes = 0;
  Placement placement = Placement::Bram;
};

struct StoragePlan {
  // Full pair-difference store: (groups-1) * pairs * frame_bytes.
  std::uint64_t intermediate_bytes = 0;
  // Circular running-sum store: pairs * frame_bytes.
  std::uint64_t running_sum_bytes = 0;
  std::uint64_t bram_budget = kBramBudgetBytes;
  std::uint64_t dram_budget = kDramBudgetBytes;
  std::vector<BufferPlan> buffers;

  std::uint64_t bram_bytes() const;
  std::uint64_t dram_bytes() const;
};

// Places each buffer (anything over bram_budget spills to DRAM) and throws
// ConfigError when the DRAM total exceeds dram_budget.
StoragePlan storage_plan(const ValidConfig& cfg, Algo algo,
                         std::uint64_t bram_budget = kBramBudgetBytes,
                         std::uint64_t dram_budget = kDramBudgetBytes);

}  // namespace prismsim
