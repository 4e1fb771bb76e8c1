#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prismsim/axi.hpp"
#include "prismsim/config.hpp"

namespace prismsim {

struct TimedFrame {
  std::uint32_t frame_index = 1;  // 1..frames_per_group, odd = reference
  std::uint32_t group_index = 1;  // 1..groups
  double arrival_us = 0.0;
  std::vector<std::uint16_t> pixels;
};

struct OutputFrame {
  std::uint32_t pair_index = 0;  // 1..frames_per_group/2
  bool finalized = false;
  bool overflow = false;  // a wrap happened somewhere in this pair's path
  std::vector<std::uint16_t> pixels;
};

struct StepResult {
  MemoryTrace trace;
  std::optional<OutputFrame> output;
};

// Streaming pair-subtract/group-average pipeline. One step consumes one
// frame; outputs appear on the final group's excitation frames. All pixel
// arithmetic is 16-bit with wrap-around; any wrap sets the sticky
// overflow flag (and marks the affected pair).
//
// The three memory strategies, plus a variant:
//   SingleBeat  - per-packet single-beat writes of each pair difference;
//                 final group reads every stored difference back, one
//                 single-beat read per packet per group.
//   BurstWrite  - same dataflow, but each difference frame leaves in one
//                 burst; readback still single-beat.
//   BurstRw     - running sum per pair held off-chip: burst read, add,
//                 burst write back; final group divides by the group count.
//   BurstRwV2   - as BurstRw but each difference is divided by the group
//                 count before accumulating, so the sum never outgrows the
//                 container.
class DenoiseKernel {
 public:
  DenoiseKernel(Algo algo, const ValidConfig& cfg);

  // Frames must arrive in acquisition order (frame index fast, group slow);
  // a mismatched counter or wrong pixel count throws.
  StepResult step(const TimedFrame& frame);

  Algo algo() const { return algo_; }
  std::uint32_t frame_counter() const { return i_; }
  std::uint32_t group_counter() const { return g_; }
  bool overflow_flag() const { return overflow_; }
  const StoragePlan& plan() const { return plan_; }

 private:
  Algo algo_;
  ValidConfig cfg_;
  StoragePlan plan_;
  std::uint32_t i_ = 1;
  std::uint32_t g_ = 1;
  bool overflow_ = false;
  std::vector<std::uint16_t> prv_;         // last reference frame
  std::vector<std::uint16_t> pair_store_;  // off-chip difference/sum store
  std::vector<std::uint8_t> pair_wrapped_;

  void advance();
};

// Batch reference: exact integer arithmetic over the whole stream,
// output[k][p] = floor(sum_g(exc - ref + offset) / groups). Any per-group
// difference outside the container range is an error (reported, not
// wrapped). Frames may be passed in any order; indices identify them.
std::vector<OutputFrame> oracle_denoise(std::span<const TimedFrame> frames,
                                        const ValidConfig& cfg);

// Same computation fed one frame at a time, for callers that do not want
// the stream resident (pairs with a lazy generator).
class OracleAccumulator {
 public:
  explicit OracleAccumulator(const ValidConfig& cfg);
  void feed(const TimedFrame& frame);
  std::vector<OutputFrame> finish();

 private:
  ValidConfig cfg_;
  std::vector<std::int64_t> sums_;
  std::vector<std::uint16_t> ref_;
  std::uint64_t fed_ = 0;  // next expected slot, acquisition order
};

// Host-side reconstruction. Throws if a pixel sits below the offset (means
// the accumulator wrapped upstream or the offset is mis-set).
std::vector<std::uint16_t> remove_offset(const OutputFrame& out,
                                         std::uint32_t offset);

}  // namespace prismsim
