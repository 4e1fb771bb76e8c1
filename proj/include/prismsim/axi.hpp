#pragma once

#include <cstdint>
#include <vector>

namespace prismsim {

// One memory request as the pipeline would issue it. `beats` counts packets
// (one container-sized beat per packet); singles always carry one beat.
struct Transaction {
  enum class Dir { Read, Write };
  enum class Kind { Single, Burst };

  Dir dir = Dir::Read;
  Kind kind = Kind::Single;
  std::uint32_t beats = 1;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

using MemoryTrace = std::vector<Transaction>;

inline Transaction single_read() { return {Transaction::Dir::Read, Transaction::Kind::Single, 1}; }
inline Transaction single_write() { return {Transaction::Dir::Write, Transaction::Kind::Single, 1}; }
inline Transaction burst_read(std::uint32_t beats) {
  return {Transaction::Dir::Read, Transaction::Kind::Burst, beats};
}
inline Transaction burst_write(std::uint32_t beats) {
  return {Transaction::Dir::Write, Transaction::Kind::Burst, beats};
}

// Handshake cost model. A single carries the full handshake; a burst pays
// the overhead once and then streams beats. max_burst_len = 0 means the
// interconnect accepts bursts of any length; otherwise long bursts split and
// each split pays the overhead again.
struct AxiCostModel {
  std::uint32_t single_read = 8;
  std::uint32_t single_write = 9;
  std::uint32_t burst_read_overhead = 6;
  std::uint32_t burst_write_overhead = 8;
  std::uint32_t cycles_per_beat = 1;
  std::uint32_t ports = 1;
  std::uint32_t max_burst_len = 0;
};

std::uint64_t transaction_cycles(const Transaction& t, const AxiCostModel& m);

// ports == 1: plain sum (one request in flight at a time).
// ports > 1: each transaction goes to the earliest-free port, in trace
// order; returns the makespan.
std::uint64_t price_trace(const MemoryTrace& trace, const AxiCostModel& m);

std::uint64_t total_read_packets(const MemoryTrace& trace);
std::uint64_t total_written_packets(const MemoryTrace& trace);

}  // namespace prismsim
