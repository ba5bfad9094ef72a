#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "prt/galois.hpp"

namespace prt {

struct MemoryConfig {
  std::size_t cells = 0;  // n
  unsigned width = 1;     // m, bits per cell
  unsigned ports = 1;

  /// Throws Errc::InvalidConfig unless n >= 3, 1 <= m <= 16 and ports is 1 or 2.
  void validate() const;

  friend bool operator==(const MemoryConfig&, const MemoryConfig&) = default;
};

struct BitRef {
  std::size_t cell = 0;
  unsigned bit = 0;

  friend bool operator==(const BitRef&, const BitRef&) = default;
};

enum class BlockedEdge : std::uint8_t { Up, Down };
enum class Edge : std::uint8_t { Rise, Fall };

struct StuckAt {
  BitRef at;
  unsigned value = 0;
};

/// Transition fault: the blocked write edge (0->1 for Up, 1->0 for Down) leaves the bit unchanged.
struct Transition {
  BitRef at;
  BlockedEdge blocked = BlockedEdge::Up;
};

/// CFin: a triggering write transition on the aggressor inverts the victim.
struct CouplingInversion {
  BitRef aggressor;
  BitRef victim;
  Edge edge = Edge::Rise;
};

/// CFid: a triggering write transition on the aggressor forces the victim to a value.
struct CouplingIdempotent {
  BitRef aggressor;
  BitRef victim;
  Edge edge = Edge::Rise;
  unsigned forced_value = 0;
};

/// CFst: while the aggressor holds aggressor_state, reads of the victim see forced_value.
struct CouplingState {
  BitRef aggressor;
  unsigned aggressor_state = 0;
  BitRef victim;
  unsigned forced_value = 0;
};

/// Both addresses decode to the physical cell of address_a.
struct AddressAlias {
  std::size_t address_a = 0;
  std::size_t address_b = 0;
};

/// No cell is selected: writes are dropped, reads return all bits equal to read_default.
struct AddressVoid {
  std::size_t address = 0;
  unsigned read_default = 0;
};

using FaultDescriptor = std::variant<StuckAt, Transition, CouplingInversion, CouplingIdempotent, CouplingState,
                                     AddressAlias, AddressVoid>;

enum class FaultClass : std::uint8_t {
  StuckAt,
  Transition,
  CouplingInversion,
  CouplingIdempotent,
  CouplingState,
  AddressAlias,
  AddressVoid,
};

inline constexpr FaultClass kAllFaultClasses[] = {
    FaultClass::StuckAt,       FaultClass::Transition,   FaultClass::CouplingInversion, FaultClass::CouplingIdempotent,
    FaultClass::CouplingState, FaultClass::AddressAlias, FaultClass::AddressVoid,
};

FaultClass fault_class(const FaultDescriptor& f) noexcept;
std::string_view fault_class_name(FaultClass c) noexcept;
std::optional<FaultClass> parse_fault_class(std::string_view name) noexcept;

/// Canonical parameter text, e.g. "cell=3 bit=0 value=1".
std::string describe_fault(const FaultDescriptor& f);

/// Throws Errc::OutOfRange / Errc::InvalidArgument if the descriptor does not fit cfg.
void validate_fault(const FaultDescriptor& f, const MemoryConfig& cfg);

struct OpStats {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t cycles = 0;

  OpStats& operator+=(const OpStats& o) noexcept {
    reads += o.reads;
    writes += o.writes;
    cycles += o.cycles;
    return *this;
  }
  friend OpStats operator-(const OpStats& a, const OpStats& b) noexcept {
    return {a.reads - b.reads, a.writes - b.writes, a.cycles - b.cycles};
  }
  friend bool operator==(const OpStats&, const OpStats&) = default;
};

/// One port's half of a dual-port cycle.
struct Access {
  enum class Kind : std::uint8_t { Read, Write };

  Kind kind = Kind::Read;
  std::size_t address = 0;
  Element value = 0;

  static Access read(std::size_t address) { return {Kind::Read, address, 0}; }
  static Access write(std::size_t address, Element value) { return {Kind::Write, address, value}; }
};

/// Read results of a dual-port cycle; empty for the port that wrote.
using DualResult = std::pair<std::optional<Element>, std::optional<Element>>;

/// Simulated RAM with functional fault injection. Faults are applied in the
/// fixed order address decoder, stuck-at, transition, coupling.
///
/// Single-owner mutable state; distinct instances are independent.
class Memory {
 public:
  /// Called after every store with the physical cell and its stored value, which
  /// it may modify. Meant for experiments that corrupt data right after a write.
  using WriteObserver = std::function<void(std::size_t cell, Element& stored)>;

  explicit Memory(MemoryConfig cfg);

  const MemoryConfig& config() const noexcept { return cfg_; }

  void inject_fault(const FaultDescriptor& f);
  void clear_faults() noexcept { faults_.clear(); }
  std::span<const FaultDescriptor> faults() const noexcept { return faults_; }

  void write(unsigned port, std::size_t address, Element value);
  Element read(unsigned port, std::size_t address);

  /// A read with full fault semantics that is not charged to the statistics.
  Element observe(std::size_t address) const;

  /// Port 0 performs a, port 1 performs b, in one cycle. Reads see the
  /// contents from before the cycle. Throws Errc::PortConflict when both write
  /// the same address, Errc::InvalidConfig on a single-port memory.
  DualResult cycle_dual(const Access& a, const Access& b);

  OpStats stats() const noexcept { return stats_; }
  void reset_stats() noexcept { stats_ = {}; }

  /// Raw stored contents of a physical cell, bypassing every fault.
  Element stored(std::size_t cell) const;

  void set_write_observer(WriteObserver observer) { observer_ = std::move(observer); }

 private:
  struct Decoded {
    bool selected = true;
    std::size_t cell = 0;
    Element void_value = 0;
  };

  void check_access(unsigned port, std::size_t address) const;
  void check_value(Element value) const;
  Decoded decode(std::size_t address) const noexcept;
  Element load(std::size_t address) const noexcept;
  void store(std::size_t address, Element value);
  unsigned effective_bit(BitRef b) const noexcept;

  MemoryConfig cfg_;
  std::vector<Element> cells_;
  std::vector<FaultDescriptor> faults_;
  OpStats stats_;
  WriteObserver observer_;
};

}  // namespace prt
