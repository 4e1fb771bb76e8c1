#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prismsim/config.hpp"
#include "prismsim/kernels.hpp"
#include "prismsim/stream.hpp"

namespace prismsim {

struct BaselineReport {
  int threads = 1;
  double buffer_s = 0.0;   // upfront copy of the stream into the workspace
  double compute_s = 0.0;  // pair loop
  double total_s = 0.0;
  double speedup_vs_1 = 0.0;
};

// Host-side batch path: same exact arithmetic as oracle_denoise, organized
// by pair so it parallelizes embarrassingly. Output is bit-identical to the
// oracle for any thread count.
std::vector<OutputFrame> denoise_pairs_serial(std::span<const TimedFrame> frames,
                                              const ValidConfig& cfg);
std::vector<OutputFrame> denoise_pairs_parallel(std::span<const TimedFrame> frames,
                                                const ValidConfig& cfg,
                                                int threads);

// Generates one stream, then times buffer+compute per thread count,
// averaging over reps. speedup_vs_1 compares mean total times.
std::vector<BaselineReport> run_cpu_bench(const ValidConfig& cfg,
                                          const SceneConfig& scene,
                                          double interval_us,
                                          const std::vector<int>& thread_counts,
                                          int reps);

}  // namespace prismsim
