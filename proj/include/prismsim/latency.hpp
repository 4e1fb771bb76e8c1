#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prismsim/axi.hpp"
#include "prismsim/config.hpp"

namespace prismsim {

enum class Parity { Odd, Even };

// What one frame costs depends only on its parity and where its group sits:
//   odd          reference frame, never touches DRAM
//   even-early   SingleBeat/BurstWrite, any group before the last
//   even-first   BurstRw*, group 1 (write only, nothing to read yet)
//   even-middle  BurstRw*, groups 2..G-1 (read, add, write back)
//   even-final   last group (readback/divide, no write)
enum class GroupClass { Early, First, Middle, Final };

struct FramePhase {
  Parity parity = Parity::Odd;
  GroupClass group_class = GroupClass::Final;
};

GroupClass classify_group(Algo algo, std::uint32_t g, std::uint32_t groups);
std::string phase_label(Parity parity, GroupClass gc);

// The memory traffic a frame of this kind generates, built from the phase
// logic alone (the kernels emit theirs packet by packet; tests hold the two
// routes against each other).
MemoryTrace canonical_trace(Algo algo, std::uint32_t g, Parity parity,
                            const ValidConfig& cfg);

// clock_ns * (packets_per_frame * ii + priced DRAM cycles).
double frame_latency_ns(Algo algo, std::uint32_t g, Parity parity,
                        const ValidConfig& cfg, const AxiCostModel& m,
                        std::uint64_t ii = 1);
// Phase-label form; throws ConfigError for a label foreign to the
// algorithm (e.g. "even-middle" for single-beat).
double frame_latency_ns(Algo algo, std::string_view label,
                        const ValidConfig& cfg, const AxiCostModel& m,
                        std::uint64_t ii = 1);

struct PhaseRow {
  std::string label;
  double latency_ns = 0.0;
  std::uint64_t count = 0;
};

// Distinct (parity, class) rows with frame counts; zero-count classes are
// dropped (e.g. no even-middle with fewer than 3 groups).
std::vector<PhaseRow> phase_census(Algo algo, const ValidConfig& cfg,
                                   const AxiCostModel& m, std::uint64_t ii = 1);

// Sum over all frames of max(frame latency, trigger interval).
double total_elapsed_closed_form_ns(Algo algo, const ValidConfig& cfg,
                                    const AxiCostModel& m, std::uint64_t ii = 1);

// Frame-by-frame schedule. Arrivals are paced one interval apart and the
// source never runs ahead of that pace, so the result equals the closed
// form exactly; it exists to cross-check per-frame latencies gathered from
// live kernel traces.
double simulate_schedule_ns(std::span<const double> latencies_ns,
                            double interval_ns);

struct EffectiveIi {
  std::uint64_t ii = 1;
  std::string note;  // set when clamped (negative or sub-cycle gap)
};

// Back-solves the initiation interval a measured run implies:
// round(gap / (clock * total_frames * (packets_per_frame - 1))), floored
// at 1 cycle.
EffectiveIi effective_ii(double measured_s, double estimated_s,
                         const ValidConfig& cfg);

// Inverse of effective_ii: predicted wall time for a hardware run whose
// compute loop stalls `ii` cycles per packet boundary. ii = 1 is the fully
// pipelined baseline (no penalty).
double elapsed_from_effective_ii_s(Algo algo, const ValidConfig& cfg,
                                   const AxiCostModel& m, std::uint64_t ii);

struct Throughput {
  double fps_nominal = 0.0;   // 1e6 / trigger interval
  double fps_achieved = 0.0;  // frames / elapsed
  double mb_per_s = 0.0;      // nominal fps * frame bytes, decimal MB
  double per_frame_us = 0.0;  // elapsed / frames
};

Throughput throughput(const ValidConfig& cfg, double elapsed_ns);

// Independent boards: the slowest one gates the batch.
double bank_aggregate_elapsed_ns(std::span<const double> per_bank_ns);

}  // namespace prismsim
