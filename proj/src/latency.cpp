#include "prismsim/latency.hpp"

#include <algorithm>
#include <cmath>

namespace prismsim {

GroupClass classify_group(Algo algo, std::uint32_t g, std::uint32_t groups) {
  if (algo == Algo::SingleBeat || algo == Algo::BurstWrite)
    return g < groups ? GroupClass::Early : GroupClass::Final;
  if (g == groups) return GroupClass::Final;
  return g == 1 ? GroupClass::First : GroupClass::Middle;
}

std::string phase_label(Parity parity, GroupClass gc) {
  if (parity == Parity::Odd) return "odd";
  switch (gc) {
    case GroupClass::Early: return "even-early";
    case GroupClass::First: return "even-first";
    case GroupClass::Middle: return "even-middle";
    case GroupClass::Final: return "even-final";
  }
  return "?";
}

MemoryTrace canonical_trace(Algo algo, std::uint32_t g, Parity parity,
                            const ValidConfig& cfg) {
  MemoryTrace t;
  if (parity == Parity::Odd) return t;  // reference frames stay on chip
  const std::uint32_t G = cfg.groups();
  const std::uint32_t ppf = cfg.geom.packets_per_frame;
  switch (algo) {
    case Algo::SingleBeat:
      if (g < G)
        t.assign(ppf, single_write());
      else
        t.assign(std::size_t(ppf) * (G - 1), single_read());
      break;
    case Algo::BurstWrite:
      if (g < G)
        t.push_back(burst_write(ppf));
      else
        t.assign(std::size_t(ppf) * (G - 1), single_read());
      break;
    case Algo::BurstRw:
    case Algo::BurstRwV2:
      if (g >= 2) t.push_back(burst_read(ppf));
      if (g < G) t.push_back(burst_write(ppf));
      break;
  }
  return t;
}

double frame_latency_ns(Algo algo, std::uint32_t g, Parity parity,
                        const ValidConfig& cfg, const AxiCostModel& m,
                        std::uint64_t ii) {
  if (g < 1 || g > cfg.groups())
    throw ConfigError("group index out of range");
  if (ii < 1) throw ConfigError("initiation interval must be >= 1");
  std::uint64_t cycles = std::uint64_t(cfg.geom.packets_per_frame) * ii +
                         price_trace(canonical_trace(algo, g, parity, cfg), m);
  return cfg.clock_ns() * double(cycles);
}

namespace {

// Representative group index for a labeled phase, validated against the
// algorithm's actual phase set.
std::uint32_t group_for_label(Algo algo, std::string_view label,
                              const ValidConfig& cfg, Parity& parity) {
  const std::uint32_t G = cfg.groups();
  bool rw = algo == Algo::BurstRw || algo == Algo::BurstRwV2;
  parity = Parity::Even;
  if (label == "odd") {
    parity = Parity::Odd;
    return 1;
  }
  if (label == "even-early" && !rw && G >= 2) return 1;
  if (label == "even-first" && rw && G >= 2) return 1;
  if (label == "even-middle" && rw && G >= 3) return 2;
  if (label == "even-final") return G;
  throw ConfigError("phase '" + std::string(label) + "' does not occur for " +
                    std::string(algo_name(algo)) + " with " +
                    std::to_string(G) + " group(s)");
}

}  // namespace

double frame_latency_ns(Algo algo, std::string_view label,
                        const ValidConfig& cfg, const AxiCostModel& m,
                        std::uint64_t ii) {
  Parity parity = Parity::Even;
  std::uint32_t g = group_for_label(algo, label, cfg, parity);
  return frame_latency_ns(algo, g, parity, cfg, m, ii);
}

std::vector<PhaseRow> phase_census(Algo algo, const ValidConfig& cfg,
                                   const AxiCostModel& m, std::uint64_t ii) {
  const std::uint64_t half = cfg.pairs_per_group();
  std::vector<PhaseRow> rows;
  rows.push_back({"odd",
                  frame_latency_ns(algo, 1, Parity::Odd, cfg, m, ii),
                  std::uint64_t(cfg.groups()) * half});
  GroupClass seen[4];
  std::size_t nseen = 0;
  for (std::uint32_t g = 1; g <= cfg.groups(); ++g) {
    GroupClass gc = classify_group(algo, g, cfg.groups());
    bool fresh = std::find(seen, seen + nseen, gc) == seen + nseen;
    if (fresh) {
      seen[nseen++] = gc;
      rows.push_back({phase_label(Parity::Even, gc),
                      frame_latency_ns(algo, g, Parity::Even, cfg, m, ii),
                      half});
    } else {
      for (auto& r : rows)
        if (r.label == phase_label(Parity::Even, gc)) r.count += half;
    }
  }
  return rows;
}

double total_elapsed_closed_form_ns(Algo algo, const ValidConfig& cfg,
                                    const AxiCostModel& m, std::uint64_t ii) {
  const double interval_ns = cfg.interval_us() * 1000.0;
  double total = 0.0;
  for (const PhaseRow& r : phase_census(algo, cfg, m, ii))
    total += double(r.count) * std::max(r.latency_ns, interval_ns);
  return total;
}

double simulate_schedule_ns(std::span<const double> latencies_ns,
                            double interval_ns) {
  if (!(interval_ns > 0.0)) throw ConfigError("interval must be positive");
  // The source is paced: frame k is never captured before one interval
  // after frame k-1's capture, and processing is serial. start/finish in
  // ns from the first arrival.
  double start = 0.0, finish = 0.0;
  bool first = true;
  std::uint64_t k = 0;
  for (double lat : latencies_ns) {
    double arrival = double(k++) * interval_ns;
    double s = first ? arrival
                     : std::max({arrival, finish, start + interval_ns});
    finish = s + lat;
    start = s;
    first = false;
  }
  if (first) return 0.0;
  return std::max(finish, start + interval_ns);
}

EffectiveIi effective_ii(double measured_s, double estimated_s,
                         const ValidConfig& cfg) {
  EffectiveIi out;
  if (cfg.geom.packets_per_frame < 2) {
    out.note = "single-packet frames leave no packet boundaries to stall on";
    return out;
  }
  double denom_ns = cfg.clock_ns() * double(cfg.total_frames()) *
                    double(cfg.geom.packets_per_frame - 1);
  double gap_ns = (measured_s - estimated_s) * 1e9;
  if (gap_ns < 0.0) {
    out.note = "measured time below the estimate; clamped to 1";
    return out;
  }
  long long q = std::llround(gap_ns / denom_ns);
  if (q < 1) {
    out.note = "gap below one cycle per packet; clamped to pipeline floor";
    return out;
  }
  out.ii = std::uint64_t(q);
  return out;
}

double elapsed_from_effective_ii_s(Algo algo, const ValidConfig& cfg,
                                   const AxiCostModel& m, std::uint64_t ii) {
  double base_s = total_elapsed_closed_form_ns(algo, cfg, m, 1) * 1e-9;
  if (ii <= 1) return base_s;  // fully pipelined: no stall term
  double stall_ns = double(ii) * cfg.clock_ns() * double(cfg.total_frames()) *
                    double(cfg.geom.packets_per_frame - 1);
  return base_s + stall_ns * 1e-9;
}

Throughput throughput(const ValidConfig& cfg, double elapsed_ns) {
  if (!(elapsed_ns > 0.0)) throw ConfigError("elapsed time must be positive");
  Throughput t;
  t.fps_nominal = 1e6 / cfg.interval_us();
  t.fps_achieved = double(cfg.total_frames()) / (elapsed_ns * 1e-9);
  t.mb_per_s = t.fps_nominal * double(cfg.geom.frame_bytes) / 1e6;
  t.per_frame_us = (elapsed_ns / 1000.0) / double(cfg.total_frames());
  return t;
}

double bank_aggregate_elapsed_ns(std::span<const double> per_bank_ns) {
  double worst = 0.0;
  for (double v : per_bank_ns) worst = std::max(worst, v);
  return worst;
}

}  // namespace prismsim
