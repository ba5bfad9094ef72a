#include <doctest.h>

#include <random>

#include "prt/memory.hpp"

using namespace prt;

namespace {

Memory bom(std::size_t n = 8) { return Memory({n, 1, 1}); }

template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("mem_new") {
  Memory mem = bom();
  for (std::size_t a = 0; a < 8; ++a) CHECK(mem.read(0, a) == 0);
  CHECK(error_code([] { Memory({2, 1, 1}); }) == Errc::InvalidConfig);
  CHECK(error_code([] { Memory({8, 0, 1}); }) == Errc::InvalidConfig);
  CHECK(error_code([] { Memory({8, 17, 1}); }) == Errc::InvalidConfig);
  CHECK(error_code([] { Memory({8, 1, 3}); }) == Errc::InvalidConfig);
  Memory dual({16, 4, 2});
  CHECK(dual.config().ports == 2);
}

TEST_CASE("fault descriptors are validated") {
  Memory mem = bom();
  CHECK_NOTHROW(mem.inject_fault(StuckAt{{3, 0}, 0}));
  CHECK(error_code([&] { mem.inject_fault(CouplingInversion{{1, 0}, {1, 0}, Edge::Rise}); }) ==
        Errc::InvalidArgument);
  CHECK(error_code([&] { mem.inject_fault(AddressAlias{5, 5}); }) == Errc::InvalidArgument);
  CHECK(error_code([&] { mem.inject_fault(StuckAt{{8, 0}, 0}); }) == Errc::OutOfRange);
  CHECK(error_code([&] { mem.inject_fault(StuckAt{{0, 1}, 0}); }) == Errc::OutOfRange);
  CHECK(error_code([&] { mem.inject_fault(StuckAt{{0, 0}, 2}); }) == Errc::InvalidArgument);
  CHECK(error_code([&] { mem.inject_fault(AddressVoid{9, 0}); }) == Errc::OutOfRange);
  CHECK(mem.faults().size() == 1);
}

TEST_CASE("accesses are range checked") {
  Memory mem({8, 4, 1});
  CHECK(error_code([&] { mem.write(0, 8, 0); }) == Errc::OutOfRange);
  CHECK(error_code([&] { mem.write(0, 0, 16); }) == Errc::OutOfRange);
  CHECK(error_code([&] { mem.read(1, 0); }) == Errc::OutOfRange);
}

TEST_CASE("read and write") {
  Memory mem({8, 4, 1});
  mem.write(0, 2, 5);
  CHECK(mem.read(0, 2) == 5);

  Memory sa = bom();
  sa.inject_fault(StuckAt{{2, 0}, 0});
  sa.write(0, 2, 1);
  CHECK(sa.read(0, 2) == 0);

  Memory cf = bom();
  cf.inject_fault(CouplingInversion{{1, 0}, {4, 0}, Edge::Rise});
  cf.write(0, 1, 1);
  CHECK(cf.read(0, 4) == 1);
}

TEST_CASE("stuck-at truth table") {
  for (unsigned v : {0U, 1U}) {
    Memory mem = bom();
    mem.inject_fault(StuckAt{{3, 0}, v});
    CHECK(mem.read(0, 3) == v);  // visible before any write
    for (Element w : {0U, 1U}) {
      mem.write(0, 3, w);
      CHECK(mem.read(0, 3) == v);
    }
    mem.write(0, 4, 1 - v);
    CHECK(mem.read(0, 4) == 1 - v);
  }
}

TEST_CASE("transition fault truth table") {
  // {initial, written, up_blocked result, down_blocked result}
  struct Row {
    Element from, to, up, down;
  };
  for (const Row& r : {Row{0, 0, 0, 0}, Row{0, 1, 0, 1}, Row{1, 0, 0, 1}, Row{1, 1, 1, 1}}) {
    for (BlockedEdge e : {BlockedEdge::Up, BlockedEdge::Down}) {
      Memory mem = bom();
      mem.write(0, 2, r.from);  // before injection, so an up-blocked cell can start at 1
      mem.inject_fault(Transition{{2, 0}, e});
      mem.write(0, 2, r.to);
      CHECK(mem.read(0, 2) == (e == BlockedEdge::Up ? r.up : r.down));
    }
  }
}

TEST_CASE("inversion coupling truth table") {
  for (Edge edge : {Edge::Rise, Edge::Fall}) {
    for (Element victim_start : {0U, 1U}) {
      for (Element agg_from : {0U, 1U}) {
        for (Element agg_to : {0U, 1U}) {
          Memory mem = bom();
          mem.write(0, 1, agg_from);
          mem.write(0, 4, victim_start);
          mem.inject_fault(CouplingInversion{{1, 0}, {4, 0}, edge});
          mem.write(0, 1, agg_to);
          const bool triggered = edge == Edge::Rise ? (agg_from == 0 && agg_to == 1) : (agg_from == 1 && agg_to == 0);
          CHECK(mem.read(0, 4) == (triggered ? 1 - victim_start : victim_start));
          CHECK(mem.read(0, 1) == agg_to);
        }
      }
    }
  }
}

TEST_CASE("idempotent coupling truth table") {
  for (Edge edge : {Edge::Rise, Edge::Fall}) {
    for (Element forced : {0U, 1U}) {
      for (Element victim_start : {0U, 1U}) {
        for (Element agg_from : {0U, 1U}) {
          for (Element agg_to : {0U, 1U}) {
            Memory mem = bom();
            mem.write(0, 1, agg_from);
            mem.write(0, 4, victim_start);
            mem.inject_fault(CouplingIdempotent{{1, 0}, {4, 0}, edge, forced});
            mem.write(0, 1, agg_to);
            const bool triggered =
                edge == Edge::Rise ? (agg_from == 0 && agg_to == 1) : (agg_from == 1 && agg_to == 0);
            CHECK(mem.read(0, 4) == (triggered ? forced : victim_start));
          }
        }
      }
    }
  }
}

TEST_CASE("state coupling forces the victim while the aggressor holds its state") {
  for (unsigned trigger : {0U, 1U}) {
    for (unsigned forced : {0U, 1U}) {
      Memory mem = bom();
      mem.inject_fault(CouplingState{{1, 0}, trigger, {4, 0}, forced});
      for (Element agg : {0U, 1U}) {
        for (Element victim : {0U, 1U}) {
          mem.write(0, 1, agg);
          mem.write(0, 4, victim);
          CHECK(mem.read(0, 4) == (agg == trigger ? forced : victim));
          CHECK(mem.stored(4) == victim);
        }
      }
    }
  }
}

TEST_CASE("intra-word coupling") {
  Memory mem({4, 4, 1});
  mem.inject_fault(CouplingInversion{{2, 0}, {2, 3}, Edge::Rise});
  mem.write(0, 2, 0x1);
  CHECK(mem.read(0, 2) == 0x9);
}

TEST_CASE("address decoder faults") {
  Memory alias = bom();
  alias.inject_fault(AddressAlias{2, 5});
  alias.write(0, 5, 1);
  CHECK(alias.read(0, 2) == 1);
  CHECK(alias.stored(5) == 0);
  alias.write(0, 2, 0);
  CHECK(alias.read(0, 5) == 0);

  for (unsigned d : {0U, 1U}) {
    Memory v({8, 4, 1});
    v.inject_fault(AddressVoid{3, d});
    v.write(0, 3, 0x6);
    CHECK(v.stored(3) == 0);
    CHECK(v.read(0, 3) == (d ? 0xFU : 0U));
    CHECK(v.stats().writes == 1);
  }
}

TEST_CASE("dual-port cycles") {
  Memory mem({8, 4, 2});
  mem.write(0, 0, 3);
  mem.write(1, 1, 7);
  mem.reset_stats();

  auto [a, b] = mem.cycle_dual(Access::read(0), Access::read(1));
  CHECK(a == 3U);
  CHECK(b == 7U);
  CHECK(mem.stats() == OpStats{2, 0, 1});

  mem.write(0, 3, 4);
  auto [r, w] = mem.cycle_dual(Access::read(3), Access::write(3, 9));
  CHECK(r == 4U);
  CHECK_FALSE(w.has_value());
  CHECK(mem.read(0, 3) == 9);

  CHECK(error_code([&] { mem.cycle_dual(Access::write(3, 1), Access::write(3, 2)); }) == Errc::PortConflict);

  Memory single = bom();
  CHECK(error_code([&] { single.cycle_dual(Access::read(0), Access::read(1)); }) == Errc::InvalidConfig);
}

TEST_CASE("op_stats") {
  Memory mem({8, 1, 2});
  CHECK(mem.stats() == OpStats{0, 0, 0});
  mem.read(0, 0);
  CHECK(mem.stats() == OpStats{1, 0, 1});
  mem.reset_stats();
  mem.cycle_dual(Access::read(0), Access::read(1));
  CHECK(mem.stats() == OpStats{2, 0, 1});
  (void)mem.observe(3);
  CHECK(mem.stats() == OpStats{2, 0, 1});
}

TEST_CASE("fault-free memory behaves as an array under random traffic") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 20; ++round) {
    const MemoryConfig cfg{3 + rng() % 60, static_cast<unsigned>(1 + rng() % 16), 1};
    Memory mem(cfg);
    std::vector<Element> reference(cfg.cells, 0);
    for (int op = 0; op < 2000; ++op) {
      const std::size_t addr = rng() % cfg.cells;
      if (rng() & 1) {
        const Element v = static_cast<Element>(rng() & ((1U << cfg.width) - 1));
        mem.write(0, addr, v);
        reference[addr] = v;
      } else {
        REQUIRE(mem.read(0, addr) == reference[addr]);
      }
    }
    const OpStats s = mem.stats();
    CHECK(s.cycles == s.reads + s.writes);
  }
}

TEST_CASE("clearing faults restores fault-free behavior") {
  Memory mem = bom();
  mem.inject_fault(StuckAt{{2, 0}, 1});
  mem.inject_fault(AddressVoid{5, 1});
  mem.clear_faults();
  CHECK(mem.faults().empty());
  for (std::size_t a = 0; a < 8; ++a) {
    mem.write(0, a, 0);
    CHECK(mem.read(0, a) == 0);
  }
}

TEST_CASE("describe_fault and class names") {
  CHECK(describe_fault(StuckAt{{3, 0}, 1}) == "cell=3 bit=0 value=1");
  CHECK(describe_fault(CouplingIdempotent{{1, 0}, {4, 2}, Edge::Fall, 1}) ==
        "aggressor=1.0 victim=4.2 edge=fall forced=1");
  for (FaultClass c : kAllFaultClasses) CHECK(parse_fault_class(fault_class_name(c)) == c);
  CHECK_FALSE(parse_fault_class("Bogus").has_value());
  CHECK(fault_class(FaultDescriptor{AddressVoid{1, 0}}) == FaultClass::AddressVoid);
}
