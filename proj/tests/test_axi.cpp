#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prismsim/axi.hpp"
#include "prismsim/rng.hpp"

using namespace prismsim;

// Frozen cost points for the default interconnect: measured handshake of 8
// cycles per single read, 9 per single write; a 3-beat burst costs 9
// reading and 11 writing (overhead 6/8 plus one cycle per beat).
TEST_CASE("default model fixed points") {
  AxiCostModel m;
  CHECK(transaction_cycles(single_read(), m) == 8);
  CHECK(transaction_cycles(single_write(), m) == 9);
  CHECK(transaction_cycles(burst_read(3), m) == 9);
  CHECK(transaction_cycles(burst_write(3), m) == 11);
  CHECK(transaction_cycles(burst_read(2560), m) == 2566);
  CHECK(transaction_cycles(burst_write(2560), m) == 2568);
}

TEST_CASE("burst beats single once the transfer grows") {
  AxiCostModel m;
  for (std::uint32_t len = 1; len <= 10'000; ++len) {
    std::uint64_t br = transaction_cycles(burst_read(len), m);
    std::uint64_t bw = transaction_cycles(burst_write(len), m);
    CHECK(br < std::uint64_t(len) * m.single_read);  // 6+L < 8L for L >= 1
    if (len >= 2) {
      CHECK(bw < std::uint64_t(len) * m.single_write);  // 8+L < 9L for L >= 2
    } else {
      CHECK(bw == std::uint64_t(m.single_write));  // tie at one beat
    }
  }
}

TEST_CASE("transaction validation") {
  AxiCostModel m;
  Transaction zero_beats = burst_read(0);
  CHECK_THROWS(transaction_cycles(zero_beats, m));
  Transaction fat_single = single_read();
  fat_single.beats = 4;
  CHECK_THROWS(transaction_cycles(fat_single, m));
}

TEST_CASE("max_burst_len splits long bursts") {
  AxiCostModel m;
  m.max_burst_len = 3;
  // 8 beats -> bursts of 3+3+2: overhead paid three times.
  CHECK(transaction_cycles(burst_read(8), m) == 3 * 6 + 8);
  CHECK(transaction_cycles(burst_write(8), m) == 3 * 8 + 8);
  // Cap >= length changes nothing.
  m.max_burst_len = 8;
  CHECK(transaction_cycles(burst_read(8), m) == 14);
  m.max_burst_len = 0;
  CHECK(transaction_cycles(burst_read(8), m) == 14);
}

TEST_CASE("single port sums serially") {
  AxiCostModel m;
  MemoryTrace t = {single_read(), single_write(), burst_write(3)};
  CHECK(price_trace(t, m) == 8 + 9 + 11);
  CHECK(price_trace({}, m) == 0);
}

TEST_CASE("pricing is additive under concatenation on one port") {
  AxiCostModel m;
  std::uint64_t h = 1234;
  for (int trial = 0; trial < 50; ++trial) {
    MemoryTrace a, b;
    auto rnd_tx = [&h]() {
      h = sm64_mix(h);
      std::uint32_t beats = 1 + std::uint32_t(h % 100);
      switch (h >> 62) {
        case 0: return single_read();
        case 1: return single_write();
        case 2: return burst_read(beats);
        default: return burst_write(beats);
      }
    };
    for (std::uint64_t i = 0; i < h % 7; ++i) a.push_back(rnd_tx());
    for (std::uint64_t i = 0; i < h % 5; ++i) b.push_back(rnd_tx());
    MemoryTrace ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(price_trace(ab, m) == price_trace(a, m) + price_trace(b, m));
  }
}

TEST_CASE("two ports overlap independent requests") {
  AxiCostModel m;
  m.ports = 2;
  // Two transactions land on different ports: makespan is the longer one.
  CHECK(price_trace({single_read(), single_write()}, m) == 9);
  // Greedy earliest-free: 8|9 then the 11 lands on the port free at 8.
  CHECK(price_trace({single_read(), single_write(), burst_write(3)}, m) == 19);
  // A port count beyond the trace length stops helping.
  m.ports = 16;
  CHECK(price_trace({single_read(), single_write()}, m) == 9);
}

TEST_CASE("more ports never slow a trace down") {
  std::uint64_t h = 99;
  for (int trial = 0; trial < 30; ++trial) {
    MemoryTrace t;
    for (int i = 0; i < 20; ++i) {
      h = sm64_mix(h);
      if (h & 1)
        t.push_back(burst_write(1 + std::uint32_t(h % 64)));
      else
        t.push_back(single_read());
    }
    AxiCostModel one, two, four;
    two.ports = 2;
    four.ports = 4;
    std::uint64_t c1 = price_trace(t, one);
    std::uint64_t c2 = price_trace(t, two);
    std::uint64_t c4 = price_trace(t, four);
    CHECK(c2 <= c1);
    CHECK(c4 <= c2);
  }
}

TEST_CASE("cost scales with each model parameter") {
  MemoryTrace t = {single_read(), single_write(), burst_read(10), burst_write(10)};
  AxiCostModel base;
  std::uint64_t c0 = price_trace(t, base);
  auto bump = [&](auto mutate) {
    AxiCostModel m;
    mutate(m);
    CHECK(price_trace(t, m) > c0);
  };
  bump([](AxiCostModel& m) { m.single_read += 1; });
  bump([](AxiCostModel& m) { m.single_write += 1; });
  bump([](AxiCostModel& m) { m.burst_read_overhead += 1; });
  bump([](AxiCostModel& m) { m.burst_write_overhead += 1; });
  bump([](AxiCostModel& m) { m.cycles_per_beat += 1; });
}

TEST_CASE("packet accounting helpers") {
  MemoryTrace t = {single_write(), burst_write(2560), single_read(),
                   burst_read(7)};
  CHECK(total_written_packets(t) == 2561);
  CHECK(total_read_packets(t) == 8);
}
