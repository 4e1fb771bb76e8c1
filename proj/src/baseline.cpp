#include "prismsim/baseline.hpp"

#include <omp.h>

#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>

namespace prismsim {

namespace {

// Frames laid out slot-major (group slow, frame fast), validated once so
// the pair loops can index blindly.
std::vector<const TimedFrame*> index_stream(std::span<const TimedFrame> frames,
                                            const ValidConfig& cfg) {
  if (frames.size() != cfg.total_frames())
    throw std::invalid_argument("expected " +
                                std::to_string(cfg.total_frames()) +
                                " frames, got " + std::to_string(frames.size()));
  const std::uint32_t N = cfg.frames_per_group();
  std::vector<const TimedFrame*> by_slot(frames.size(), nullptr);
  const std::size_t px = std::size_t(cfg.geom.pixels());
  for (const TimedFrame& f : frames) {
    if (f.frame_index < 1 || f.frame_index > N || f.group_index < 1 ||
        f.group_index > cfg.groups())
      throw std::invalid_argument("frame indices out of range");
    if (f.pixels.size() != px)
      throw std::invalid_argument("frame pixel count does not match geometry");
    std::uint64_t slot =
        std::uint64_t(f.group_index - 1) * N + (f.frame_index - 1);
    if (by_slot[slot])
      throw std::invalid_argument("duplicate frame at slot " +
                                  std::to_string(slot));
    by_slot[slot] = &f;
  }
  return by_slot;
}

// One pair across all groups. Returns a nonempty message instead of
// throwing so parallel callers can ferry errors out of the loop.
std::string compute_pair(const std::vector<const TimedFrame*>& by_slot,
                         const ValidConfig& cfg, std::uint32_t k,
                         OutputFrame& out) {
  const std::uint32_t N = cfg.frames_per_group();
  const std::size_t px = std::size_t(cfg.geom.pixels());
  out.pair_index = k;
  out.finalized = true;
  out.overflow = false;
  out.pixels.assign(px, 0);
  std::vector<std::int64_t> sums(px, 0);
  for (std::uint32_t g = 1; g <= cfg.groups(); ++g) {
    const std::uint16_t* ref =
        by_slot[std::uint64_t(g - 1) * N + (2 * k - 2)]->pixels.data();
    const std::uint16_t* exc =
        by_slot[std::uint64_t(g - 1) * N + (2 * k - 1)]->pixels.data();
    for (std::size_t j = 0; j < px; ++j) {
      std::int64_t d = std::int64_t(exc[j]) - ref[j] + cfg.offset;
      if (d < 0 || d > 0xFFFF)
        return "pair " + std::to_string(k) + " group " + std::to_string(g) +
               " pixel " + std::to_string(j) + ": difference " +
               std::to_string(d) + " outside [0, 65535]";
      sums[j] += d;
    }
  }
  for (std::size_t j = 0; j < px; ++j)
    out.pixels[j] = std::uint16_t(sums[j] / cfg.groups());
  return {};
}

}  // namespace

std::vector<OutputFrame> denoise_pairs_serial(std::span<const TimedFrame> frames,
                                              const ValidConfig& cfg) {
  auto by_slot = index_stream(frames, cfg);
  std::vector<OutputFrame> outs(cfg.pairs_per_group());
  for (std::uint32_t k = 1; k <= cfg.pairs_per_group(); ++k) {
    std::string err = compute_pair(by_slot, cfg, k, outs[k - 1]);
    if (!err.empty()) throw std::domain_error(err);
  }
  return outs;
}

std::vector<OutputFrame> denoise_pairs_parallel(std::span<const TimedFrame> frames,
                                                const ValidConfig& cfg,
                                                int threads) {
  if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
  auto by_slot = index_stream(frames, cfg);
  const std::int64_t pairs = cfg.pairs_per_group();
  std::vector<OutputFrame> outs(pairs);
  std::string first_err;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t k = 1; k <= pairs; ++k) {
    std::string err = compute_pair(by_slot, cfg, std::uint32_t(k), outs[k - 1]);
    if (!err.empty()) {
#pragma omp critical
      if (first_err.empty()) first_err = err;
    }
  }
  if (!first_err.empty()) throw std::domain_error(first_err);
  return outs;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::vector<BaselineReport> run_cpu_bench(const ValidConfig& cfg,
                                          const SceneConfig& scene,
                                          double interval_us,
                                          const std::vector<int>& thread_counts,
                                          int reps) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  std::vector<TimedFrame> stream = generate_stream(cfg, scene, interval_us);
  std::vector<OutputFrame> golden;  // first completed run, cross-checked
  std::vector<BaselineReport> reports;
  double mean_total_1 = 0.0;

  for (int t : thread_counts) {
    if (t < 1) throw std::invalid_argument("thread count must be >= 1");
    BaselineReport rep;
    rep.threads = t;
    for (int r = 0; r < reps; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      std::vector<TimedFrame> staged(stream.begin(), stream.end());
      double buf = seconds_since(t0);

      auto t1 = std::chrono::steady_clock::now();
      std::vector<OutputFrame> outs =
          t == 1 ? denoise_pairs_serial(staged, cfg)
                 : denoise_pairs_parallel(staged, cfg, t);
      double cmp = seconds_since(t1);

      rep.buffer_s += buf;
      rep.compute_s += cmp;
      rep.total_s += buf + cmp;
      if (golden.empty()) {
        golden = std::move(outs);
      } else {
        for (std::size_t k = 0; k < golden.size(); ++k)
          if (outs[k].pixels != golden[k].pixels)
            throw std::logic_error("thread count " + std::to_string(t) +
                                   " changed pair " + std::to_string(k + 1));
      }
    }
    rep.buffer_s /= reps;
    rep.compute_s /= reps;
    rep.total_s /= reps;
    if (t == 1 && mean_total_1 == 0.0) mean_total_1 = rep.total_s;
    reports.push_back(rep);
  }
  for (BaselineReport& rep : reports)
    rep.speedup_vs_1 =
        (mean_total_1 > 0.0 && rep.total_s > 0.0) ? mean_total_1 / rep.total_s
                                                  : 0.0;
  return reports;
}

}  // namespace prismsim
