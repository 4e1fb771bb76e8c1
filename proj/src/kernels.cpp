#include "prismsim/kernels.hpp"

#include <cstring>
#include <string>

namespace prismsim {

namespace {

constexpr std::uint32_t kMask = 0xFFFFu;

// val - prv + offset in container arithmetic. Anything leaving [0, 2^16)
// wraps and reports.
inline std::uint16_t wrap_diff(std::uint16_t val, std::uint16_t prv,
                               std::uint32_t offset, bool& wrapped) {
  std::int32_t t = std::int32_t(val) - std::int32_t(prv) + std::int32_t(offset);
  if (t < 0 || t > std::int32_t(kMask)) wrapped = true;
  return std::uint16_t(std::uint32_t(t) & kMask);
}

inline std::uint16_t wrap_add(std::uint16_t a, std::uint16_t b, bool& wrapped) {
  std::uint32_t s = std::uint32_t(a) + b;
  if (s > kMask) wrapped = true;
  return std::uint16_t(s & kMask);
}

[[noreturn]] void sequencing_error(const std::string& msg) {
  throw std::logic_error(msg);
}

}  // namespace

DenoiseKernel::DenoiseKernel(Algo algo, const ValidConfig& cfg)
    : algo_(algo), cfg_(cfg), plan_(storage_plan(cfg, algo)) {
  std::size_t px = std::size_t(cfg_.geom.pixels());
  std::size_t pairs = cfg_.pairs_per_group();
  prv_.assign(px, 0);
  pair_wrapped_.assign(pairs, 0);
  if (algo_ == Algo::SingleBeat || algo_ == Algo::BurstWrite)
    pair_store_.assign(std::size_t(cfg_.groups() - 1) * pairs * px, 0);
  else
    pair_store_.assign(pairs * px, 0);
}

void DenoiseKernel::advance() {
  if (++i_ > cfg_.frames_per_group()) {
    i_ = 1;
    if (++g_ > cfg_.groups()) g_ = 1;  // next experiment reuses the stores
  }
}

StepResult DenoiseKernel::step(const TimedFrame& frame) {
  if (frame.frame_index != i_ || frame.group_index != g_)
    sequencing_error("frame (" + std::to_string(frame.frame_index) + "," +
                     std::to_string(frame.group_index) +
                     ") arrived while expecting (" + std::to_string(i_) + "," +
                     std::to_string(g_) + ")");
  const std::size_t px = std::size_t(cfg_.geom.pixels());
  if (frame.pixels.size() != px)
    sequencing_error("frame carries " + std::to_string(frame.pixels.size()) +
                     " pixels, geometry says " + std::to_string(px));

  StepResult r;
  const std::uint32_t G = cfg_.groups();
  const std::uint32_t ppf = cfg_.geom.packets_per_frame;

  if (i_ % 2 == 1) {  // reference frame: latch and wait
    prv_ = frame.pixels;
    advance();
    return r;
  }

  const std::uint32_t k = i_ / 2;
  const std::size_t pair_base = std::size_t(k - 1) * px;
  bool wrapped = false;
  if (g_ == 1) pair_wrapped_[k - 1] = 0;  // fresh accumulation for this pair

  switch (algo_) {
    case Algo::SingleBeat:
    case Algo::BurstWrite: {
      if (g_ < G) {
        std::size_t slot = (std::size_t(g_ - 1) * cfg_.pairs_per_group() +
                            (k - 1)) * px;
        for (std::size_t j = 0; j < px; ++j)
          pair_store_[slot + j] =
              wrap_diff(frame.pixels[j], prv_[j], cfg_.offset, wrapped);
        if (algo_ == Algo::SingleBeat) {
          r.trace.assign(ppf, single_write());
        } else {
          r.trace.push_back(burst_write(ppf));
        }
      } else {
        // Last group: fold the stored differences back in, packet by packet,
        // one single-beat read per stored group.
        OutputFrame out;
        out.pair_index = k;
        out.finalized = true;
        out.pixels.resize(px);
        for (std::size_t j = 0; j < px; ++j) {
          std::uint16_t acc =
              wrap_diff(frame.pixels[j], prv_[j], cfg_.offset, wrapped);
          for (std::uint32_t h = 1; h < G; ++h) {
            std::size_t slot = (std::size_t(h - 1) * cfg_.pairs_per_group() +
                                (k - 1)) * px;
            acc = wrap_add(acc, pair_store_[slot + j], wrapped);
          }
          out.pixels[j] = std::uint16_t(acc / G);
        }
        for (std::uint32_t p = 0; p < ppf; ++p)
          for (std::uint32_t h = 1; h < G; ++h) r.trace.push_back(single_read());
        if (wrapped) pair_wrapped_[k - 1] = 1;
        out.overflow = pair_wrapped_[k - 1] != 0;
        r.output = std::move(out);
      }
      break;
    }
    case Algo::BurstRw:
    case Algo::BurstRwV2: {
      if (g_ >= 2) r.trace.push_back(burst_read(ppf));
      const bool divide_early = algo_ == Algo::BurstRwV2;
      for (std::size_t j = 0; j < px; ++j) {
        std::uint16_t term =
            wrap_diff(frame.pixels[j], prv_[j], cfg_.offset, wrapped);
        if (divide_early) term = std::uint16_t(term / G);
        if (g_ == 1)
          pair_store_[pair_base + j] = term;
        else
          pair_store_[pair_base + j] =
              wrap_add(pair_store_[pair_base + j], term, wrapped);
      }
      if (wrapped) pair_wrapped_[k - 1] = 1;
      if (g_ < G) {
        r.trace.push_back(burst_write(ppf));
      } else {
        OutputFrame out;
        out.pair_index = k;
        out.finalized = true;
        out.pixels.resize(px);
        for (std::size_t j = 0; j < px; ++j) {
          std::uint16_t s = pair_store_[pair_base + j];
          out.pixels[j] = divide_early ? s : std::uint16_t(s / G);
        }
        out.overflow = pair_wrapped_[k - 1] != 0;
        r.output = std::move(out);
      }
      break;
    }
  }

  if (wrapped) {
    pair_wrapped_[k - 1] = 1;
    overflow_ = true;
  }
  advance();
  return r;
}

OracleAccumulator::OracleAccumulator(const ValidConfig& cfg) : cfg_(cfg) {
  sums_.assign(std::size_t(cfg_.pairs_per_group()) * cfg_.geom.pixels(), 0);
  ref_.assign(cfg_.geom.pixels(), 0);
}

void OracleAccumulator::feed(const TimedFrame& frame) {
  const std::uint32_t N = cfg_.frames_per_group();
  const std::uint32_t G = cfg_.groups();
  const std::size_t px = std::size_t(cfg_.geom.pixels());
  if (frame.frame_index < 1 || frame.frame_index > N || frame.group_index < 1 ||
      frame.group_index > G)
    throw std::invalid_argument("frame indices out of range");
  if (frame.pixels.size() != px)
    throw std::invalid_argument("frame pixel count does not match geometry");
  std::uint64_t slot =
      std::uint64_t(frame.group_index - 1) * N + (frame.frame_index - 1);
  if (fed_ != slot)
    throw std::invalid_argument("frames must arrive in acquisition order");
  ++fed_;

  if (frame.frame_index % 2 == 1) {
    ref_ = frame.pixels;
    return;
  }
  const std::uint32_t k = frame.frame_index / 2;
  std::int64_t* sums = sums_.data() + std::size_t(k - 1) * px;
  for (std::size_t j = 0; j < px; ++j) {
    std::int64_t d = std::int64_t(frame.pixels[j]) - ref_[j] + cfg_.offset;
    if (d < 0 || d > 0xFFFF)
      throw std::domain_error(
          "pair " + std::to_string(k) + " group " +
          std::to_string(frame.group_index) + " pixel " + std::to_string(j) +
          ": difference " + std::to_string(d) + " outside [0, 65535]");
    sums[j] += d;
  }
}

std::vector<OutputFrame> OracleAccumulator::finish() {
  if (fed_ != cfg_.total_frames())
    throw std::invalid_argument("stream incomplete: " + std::to_string(fed_) +
                                " of " + std::to_string(cfg_.total_frames()) +
                                " frames fed");
  const std::size_t px = std::size_t(cfg_.geom.pixels());
  std::vector<OutputFrame> outs(cfg_.pairs_per_group());
  for (std::uint32_t k = 1; k <= cfg_.pairs_per_group(); ++k) {
    OutputFrame& o = outs[k - 1];
    o.pair_index = k;
    o.finalized = true;
    o.pixels.resize(px);
    const std::int64_t* sums = sums_.data() + std::size_t(k - 1) * px;
    for (std::size_t j = 0; j < px; ++j)
      o.pixels[j] = std::uint16_t(sums[j] / cfg_.groups());
  }
  return outs;
}

std::vector<OutputFrame> oracle_denoise(std::span<const TimedFrame> frames,
                                        const ValidConfig& cfg) {
  if (frames.size() != cfg.total_frames())
    throw std::invalid_argument("expected " + std::to_string(cfg.total_frames()) +
                                " frames, got " + std::to_string(frames.size()));
  // Index by slot so callers may hand the stream over in any order.
  std::vector<const TimedFrame*> by_slot(frames.size(), nullptr);
  const std::uint32_t N = cfg.frames_per_group();
  for (const TimedFrame& f : frames) {
    if (f.frame_index < 1 || f.frame_index > N || f.group_index < 1 ||
        f.group_index > cfg.groups())
      throw std::invalid_argument("frame indices out of range");
    std::uint64_t slot = std::uint64_t(f.group_index - 1) * N + (f.frame_index - 1);
    if (by_slot[slot])
      throw std::invalid_argument("duplicate frame at slot " + std::to_string(slot));
    by_slot[slot] = &f;
  }
  OracleAccumulator acc(cfg);
  for (const TimedFrame* f : by_slot) acc.feed(*f);
  return acc.finish();
}

std::vector<std::uint16_t> remove_offset(const OutputFrame& out,
                                         std::uint32_t offset) {
  std::vector<std::uint16_t> px(out.pixels.size());
  for (std::size_t j = 0; j < out.pixels.size(); ++j) {
    if (out.pixels[j] < offset)
      throw std::domain_error("pair " + std::to_string(out.pair_index) +
                              " pixel " + std::to_string(j) + ": value " +
                              std::to_string(out.pixels[j]) +
                              " below offset " + std::to_string(offset) +
                              " (wrap upstream or offset mis-set)");
    px[j] = std::uint16_t(out.pixels[j] - offset);
  }
  return px;
}

}  // namespace prismsim
