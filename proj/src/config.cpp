#include "prismsim/config.hpp"

#include <string>

namespace prismsim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

}  // namespace

ValidConfig validate_config(const AcquisitionConfig& in) {
  if (in.groups == 0) fail("groups must be >= 1");
  if (in.frames_per_group == 0) fail("frames_per_group must be >= 2");
  if (in.frames_per_group % 2 != 0)
    fail("frames_per_group must be even (frames pair up as reference/excitation)");
  if (in.height == 0 || in.width == 0) fail("frame dimensions must be nonzero");
  if (in.pixel_depth == 0 || in.pixel_depth > kContainerBits)
    fail("pixel_depth must be in [1, " + std::to_string(kContainerBits) + "]");
  if (in.packet_width == 0 || in.packet_width % kContainerBits != 0)
    fail("packet_width must be a positive multiple of " +
         std::to_string(kContainerBits) + " bits");
  if (!(in.clock_ns > 0.0)) fail("clock_ns must be positive");
  if (!(in.trigger_us > 0.0)) fail("trigger_us must be positive");
  if (in.banks == 0) fail("banks must be >= 1");

  ValidConfig cfg;
  cfg.acq = in;
  cfg.geom.height = in.height;
  cfg.geom.width = in.width;
  cfg.geom.pixels_per_packet = in.packet_width / kContainerBits;

  std::uint64_t px = std::uint64_t(in.height) * in.width;
  if (px % cfg.geom.pixels_per_packet != 0)
    fail("height*width must be a multiple of pixels_per_packet (" +
         std::to_string(cfg.geom.pixels_per_packet) + "); frames are not padded");
  cfg.geom.packets_per_frame = std::uint32_t(px / cfg.geom.pixels_per_packet);
  cfg.geom.frame_bytes = px * (kContainerBits / 8);

  std::uint32_t depth_max = (1u << in.pixel_depth) - 1u;
  cfg.offset = in.offset.value_or(1u << in.pixel_depth);
  if (cfg.offset > 0xFFFFu) fail("offset must fit in the 16-bit container");
  if (cfg.offset < depth_max)
    cfg.warnings.push_back(
        "offset " + std::to_string(cfg.offset) + " is below 2^pixel_depth-1 (" +
        std::to_string(depth_max) +
        "); pairwise differences can go negative and wrap");
  return cfg;
}

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::SingleBeat: return "single-beat";
    case Algo::BurstWrite: return "burst-write";
    case Algo::BurstRw: return "burst-rw";
    case Algo::BurstRwV2: return "burst-rw-v2";
  }
  return "?";
}

std::optional<Algo> algo_from_name(std::string_view s) {
  if (s == "single-beat" || s == "alg1") return Algo::SingleBeat;
  if (s == "burst-write" || s == "alg2") return Algo::BurstWrite;
  if (s == "burst-rw" || s == "alg3") return Algo::BurstRw;
  if (s == "burst-rw-v2" || s == "alg3v2") return Algo::BurstRwV2;
  return std::nullopt;
}

std::uint64_t StoragePlan::bram_bytes() const {
  std::uint64_t n = 0;
  for (const auto& b : buffers)
    if (b.placement == Placement::Bram) n += b.bytes;
  return n;
}

std::uint64_t StoragePlan::dram_bytes() const {
  std::uint64_t n = 0;
  for (const auto& b : buffers)
    if (b.placement == Placement::Dram) n += b.bytes;
  return n;
}

StoragePlan storage_plan(const ValidConfig& cfg, Algo algo,
                         std::uint64_t bram_budget, std::uint64_t dram_budget) {
  StoragePlan p;
  p.bram_budget = bram_budget;
  p.dram_budget = dram_budget;

  std::uint64_t fb = cfg.geom.frame_bytes;
  std::uint64_t pairs = cfg.pairs_per_group();
  p.intermediate_bytes = std::uint64_t(cfg.groups() - 1) * pairs * fb;
  p.running_sum_bytes = pairs * fb;

  auto add = [&](const std::string& name, std::uint64_t bytes) {
    BufferPlan b;
    b.name = name;
    b.bytes = bytes;
    b.placement = bytes > bram_budget ? Placement::Dram : Placement::Bram;
    p.buffers.push_back(b);
  };

  add("prv_frame", fb);
  add("out_frame", fb);
  switch (algo) {
    case Algo::SingleBeat:
      add("pair_store", p.intermediate_bytes);
      break;
    case Algo::BurstWrite:
      add("sub_frame", fb);
      add("pair_store", p.intermediate_bytes);
      break;
    case Algo::BurstRw:
    case Algo::BurstRwV2:
      add("sum_frame", fb);
      add("pair_store", p.running_sum_bytes);
      break;
  }

  if (p.dram_bytes() > dram_budget)
    throw ConfigError("storage infeasible: " + std::to_string(p.dram_bytes()) +
                      " bytes spill to DRAM, budget " +
                      std::to_string(dram_budget));
  return p;
}

}  // namespace prismsim
