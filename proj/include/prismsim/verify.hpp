#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prismsim/settings.hpp"

namespace prismsim {

struct VerifyCheck {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyResult {
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
  std::size_t failures() const;
};

// One batch of randomized small-config trials: every trial generates a
// stream, runs all four kernels against the batch reference, and checks
// traces frame by frame against the phase table. Throws nothing; failures
// land in the counters.
struct EquivalenceStats {
  int trials = 0;
  int exact_matches = 0;     // single-beat, burst-write, burst-rw all equal
  int v2_within_bound = 0;   // 0 <= reference - v2 <= groups-1 everywhere
  int traces_canonical = 0;  // per-step traces match the phase table
  int overflow_flags = 0;    // should stay 0 for these configs
  std::string first_mismatch;
};

EquivalenceStats run_equivalence_trials(const AxiCostModel& m,
                                        std::uint64_t seed, int trials);

// Randomized cross-checks:
//   equivalence   all four kernels vs the exact batch reference, plus the
//                 divide-early variant's floor bound
//   overflow      container boundary around the safe group count
//   traces        odd-frame silence, canonical shapes, write-volume parity
//   schedule      frame-by-frame schedule vs closed form
// The AXI cost model from `s` is honored everywhere. The equivalence,
// overflow, and traces suites draw their own small geometries; the final
// schedule check prices the configured acquisition.
VerifyResult run_verify_suites(const RunSettings& s,
                               const std::vector<std::uint64_t>& seeds);

std::string verify_failures_json(const VerifyResult& r);

}  // namespace prismsim
