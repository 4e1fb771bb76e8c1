#include "prismsim/axi.hpp"

#include <algorithm>
#include <stdexcept>

namespace prismsim {

std::uint64_t transaction_cycles(const Transaction& t, const AxiCostModel& m) {
  if (t.beats == 0) throw std::invalid_argument("transaction with zero beats");
  if (t.kind == Transaction::Kind::Single) {
    if (t.beats != 1)
      throw std::invalid_argument("single transactions carry exactly one beat");
    return t.dir == Transaction::Dir::Read ? m.single_read : m.single_write;
  }
  std::uint64_t overhead = t.dir == Transaction::Dir::Read
                               ? m.burst_read_overhead
                               : m.burst_write_overhead;
  std::uint64_t splits = 1;
  if (m.max_burst_len > 0)
    splits = (t.beats + m.max_burst_len - 1) / m.max_burst_len;
  return splits * overhead + std::uint64_t(t.beats) * m.cycles_per_beat;
}

std::uint64_t price_trace(const MemoryTrace& trace, const AxiCostModel& m) {
  if (m.ports <= 1) {
    std::uint64_t total = 0;
    for (const auto& t : trace) total += transaction_cycles(t, m);
    return total;
  }
  // Earliest-free-port assignment in trace order.
  std::vector<std::uint64_t> free_at(m.ports, 0);
  for (const auto& t : trace) {
    auto it = std::min_element(free_at.begin(), free_at.end());
    *it += transaction_cycles(t, m);
  }
  return *std::max_element(free_at.begin(), free_at.end());
}

std::uint64_t total_read_packets(const MemoryTrace& trace) {
  std::uint64_t n = 0;
  for (const auto& t : trace)
    if (t.dir == Transaction::Dir::Read) n += t.beats;
  return n;
}

std::uint64_t total_written_packets(const MemoryTrace& trace) {
  std::uint64_t n = 0;
  for (const auto& t : trace)
    if (t.dir == Transaction::Dir::Write) n += t.beats;
  return n;
}

}  // namespace prismsim
