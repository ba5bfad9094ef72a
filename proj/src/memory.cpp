#include "prt/memory.hpp"

#include <sstream>

namespace prt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

unsigned bit_of(Element v, unsigned bit) noexcept { return (v >> bit) & 1U; }

Element with_bit(Element v, unsigned bit, unsigned value) noexcept {
  return value ? (v | (Element{1} << bit)) : (v & ~(Element{1} << bit));
}

bool edge_matches(Edge edge, unsigned before, unsigned after) noexcept {
  return edge == Edge::Rise ? (before == 0 && after == 1) : (before == 1 && after == 0);
}

std::string bitref_text(BitRef b) { return std::to_string(b.cell) + "." + std::to_string(b.bit); }

const char* edge_text(Edge e) { return e == Edge::Rise ? "rise" : "fall"; }

void check_bitref(BitRef b, const MemoryConfig& cfg, const char* role) {
  if (b.cell >= cfg.cells) throw Error(Errc::OutOfRange, std::string(role) + " cell out of range");
  if (b.bit >= cfg.width) throw Error(Errc::OutOfRange, std::string(role) + " bit out of range");
}

void check_binary(unsigned v, const char* what) {
  if (v > 1) throw Error(Errc::InvalidArgument, std::string(what) + " must be 0 or 1");
}

void check_address(std::size_t a, const MemoryConfig& cfg) {
  if (a >= cfg.cells) throw Error(Errc::OutOfRange, "address " + std::to_string(a) + " out of range");
}

void check_pair(BitRef aggressor, BitRef victim, const MemoryConfig& cfg) {
  check_bitref(aggressor, cfg, "aggressor");
  check_bitref(victim, cfg, "victim");
  if (aggressor == victim) throw Error(Errc::InvalidArgument, "coupling fault aggressor and victim coincide");
}

}  // namespace

void MemoryConfig::validate() const {
  if (cells < 3) throw Error(Errc::InvalidConfig, "memory needs at least 3 cells");
  if (width < 1 || width > kMaxWidth) throw Error(Errc::InvalidConfig, "cell width must be in [1, 16]");
  if (ports != 1 && ports != 2) throw Error(Errc::InvalidConfig, "memory must have 1 or 2 ports");
}

FaultClass fault_class(const FaultDescriptor& f) noexcept { return static_cast<FaultClass>(f.index()); }

std::string_view fault_class_name(FaultClass c) noexcept {
  switch (c) {
    case FaultClass::StuckAt: return "StuckAt";
    case FaultClass::Transition: return "Transition";
    case FaultClass::CouplingInversion: return "CouplingInversion";
    case FaultClass::CouplingIdempotent: return "CouplingIdempotent";
    case FaultClass::CouplingState: return "CouplingState";
    case FaultClass::AddressAlias: return "AddressAlias";
    case FaultClass::AddressVoid: return "AddressVoid";
  }
  return "?";
}

std::optional<FaultClass> parse_fault_class(std::string_view name) noexcept {
  for (FaultClass c : kAllFaultClasses) {
    if (fault_class_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string describe_fault(const FaultDescriptor& f) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const StuckAt& x) { out << "cell=" << x.at.cell << " bit=" << x.at.bit << " value=" << x.value; },
                 [&](const Transition& x) {
                   out << "cell=" << x.at.cell << " bit=" << x.at.bit
                       << " blocked=" << (x.blocked == BlockedEdge::Up ? "up" : "down");
                 },
                 [&](const CouplingInversion& x) {
                   out << "aggressor=" << bitref_text(x.aggressor) << " victim=" << bitref_text(x.victim)
                       << " edge=" << edge_text(x.edge);
                 },
                 [&](const CouplingIdempotent& x) {
                   out << "aggressor=" << bitref_text(x.aggressor) << " victim=" << bitref_text(x.victim)
                       << " edge=" << edge_text(x.edge) << " forced=" << x.forced_value;
                 },
                 [&](const CouplingState& x) {
                   out << "aggressor=" << bitref_text(x.aggressor) << " state=" << x.aggressor_state
                       << " victim=" << bitref_text(x.victim) << " forced=" << x.forced_value;
                 },
                 [&](const AddressAlias& x) { out << "a=" << x.address_a << " b=" << x.address_b; },
                 [&](const AddressVoid& x) { out << "address=" << x.address << " read_default=" << x.read_default; },
             },
             f);
  return out.str();
}

void validate_fault(const FaultDescriptor& f, const MemoryConfig& cfg) {
  std::visit(Overloaded{
                 [&](const StuckAt& x) {
                   check_bitref(x.at, cfg, "stuck-at");
                   check_binary(x.value, "stuck-at value");
                 },
                 [&](const Transition& x) { check_bitref(x.at, cfg, "transition"); },
                 [&](const CouplingInversion& x) { check_pair(x.aggressor, x.victim, cfg); },
                 [&](const CouplingIdempotent& x) {
                   check_pair(x.aggressor, x.victim, cfg);
                   check_binary(x.forced_value, "forced value");
                 },
                 [&](const CouplingState& x) {
                   check_pair(x.aggressor, x.victim, cfg);
                   check_binary(x.aggressor_state, "aggressor state");
                   check_binary(x.forced_value, "forced value");
                 },
                 [&](const AddressAlias& x) {
                   check_address(x.address_a, cfg);
                   check_address(x.address_b, cfg);
                   if (x.address_a == x.address_b) {
                     throw Error(Errc::InvalidArgument, "address alias needs two distinct addresses");
                   }
                 },
                 [&](const AddressVoid& x) {
                   check_address(x.address, cfg);
                   check_binary(x.read_default, "read default");
                 },
             },
             f);
}

Memory::Memory(MemoryConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  cells_.assign(cfg_.cells, 0);
}

void Memory::inject_fault(const FaultDescriptor& f) {
  validate_fault(f, cfg_);
  faults_.push_back(f);
}

void Memory::check_access(unsigned port, std::size_t address) const {
  if (port >= cfg_.ports) throw Error(Errc::OutOfRange, "port " + std::to_string(port) + " does not exist");
  check_address(address, cfg_);
}

void Memory::check_value(Element value) const {
  if (value >> cfg_.width) throw Error(Errc::OutOfRange, "value " + std::to_string(value) + " wider than a cell");
}

Memory::Decoded Memory::decode(std::size_t address) const noexcept {
  Decoded d{true, address, 0};
  for (const auto& f : faults_) {
    if (const auto* alias = std::get_if<AddressAlias>(&f); alias && alias->address_b == address) {
      d.cell = alias->address_a;
    } else if (const auto* v = std::get_if<AddressVoid>(&f); v && v->address == address) {
      d.selected = false;
      d.void_value = v->read_default ? (Element{1} << cfg_.width) - 1 : 0;
    }
  }
  return d;
}

unsigned Memory::effective_bit(BitRef b) const noexcept {
  unsigned v = bit_of(cells_[b.cell], b.bit);
  for (const auto& f : faults_) {
    if (const auto* sa = std::get_if<StuckAt>(&f); sa && sa->at == b) v = sa->value;
  }
  return v;
}

Element Memory::load(std::size_t address) const noexcept {
  const Decoded d = decode(address);
  if (!d.selected) return d.void_value;
  Element v = cells_[d.cell];
  for (const auto& f : faults_) {
    if (const auto* sa = std::get_if<StuckAt>(&f); sa && sa->at.cell == d.cell) {
      v = with_bit(v, sa->at.bit, sa->value);
    }
  }
  for (const auto& f : faults_) {
    if (const auto* st = std::get_if<CouplingState>(&f); st && st->victim.cell == d.cell) {
      if (effective_bit(st->aggressor) == st->aggressor_state) v = with_bit(v, st->victim.bit, st->forced_value);
    }
  }
  return v;
}

void Memory::store(std::size_t address, Element value) {
  const Decoded d = decode(address);
  if (!d.selected) return;

  const Element before = cells_[d.cell];
  Element next = value;
  for (const auto& f : faults_) {
    if (const auto* sa = std::get_if<StuckAt>(&f); sa && sa->at.cell == d.cell) {
      next = with_bit(next, sa->at.bit, sa->value);
    }
  }
  for (const auto& f : faults_) {
    const auto* tf = std::get_if<Transition>(&f);
    if (!tf || tf->at.cell != d.cell) continue;
    const unsigned old_bit = bit_of(before, tf->at.bit);
    const unsigned new_bit = bit_of(next, tf->at.bit);
    const bool blocked = tf->blocked == BlockedEdge::Up ? (old_bit == 0 && new_bit == 1) : (old_bit == 1 && new_bit == 0);
    if (blocked) next = with_bit(next, tf->at.bit, old_bit);
  }
  cells_[d.cell] = next;

  for (const auto& f : faults_) {
    if (const auto* cfin = std::get_if<CouplingInversion>(&f); cfin && cfin->aggressor.cell == d.cell) {
      const unsigned a = cfin->aggressor.bit;
      if (edge_matches(cfin->edge, bit_of(before, a), bit_of(next, a))) {
        Element& victim = cells_[cfin->victim.cell];
        victim ^= Element{1} << cfin->victim.bit;
      }
    } else if (const auto* cfid = std::get_if<CouplingIdempotent>(&f); cfid && cfid->aggressor.cell == d.cell) {
      const unsigned a = cfid->aggressor.bit;
      if (edge_matches(cfid->edge, bit_of(before, a), bit_of(next, a))) {
        Element& victim = cells_[cfid->victim.cell];
        victim = with_bit(victim, cfid->victim.bit, cfid->forced_value);
      }
    }
  }

  if (observer_) observer_(d.cell, cells_[d.cell]);
}

void Memory::write(unsigned port, std::size_t address, Element value) {
  check_access(port, address);
  check_value(value);
  store(address, value);
  ++stats_.writes;
  ++stats_.cycles;
}

Element Memory::read(unsigned port, std::size_t address) {
  check_access(port, address);
  ++stats_.reads;
  ++stats_.cycles;
  return load(address);
}

Element Memory::observe(std::size_t address) const {
  check_address(address, cfg_);
  return load(address);
}

DualResult Memory::cycle_dual(const Access& a, const Access& b) {
  if (cfg_.ports != 2) throw Error(Errc::InvalidConfig, "dual-port cycle on a single-port memory");
  check_access(0, a.address);
  check_access(1, b.address);
  if (a.kind == Access::Kind::Write) check_value(a.value);
  if (b.kind == Access::Kind::Write) check_value(b.value);
  if (a.kind == Access::Kind::Write && b.kind == Access::Kind::Write && a.address == b.address) {
    throw Error(Errc::PortConflict, "port conflict: both ports write address " + std::to_string(a.address));
  }

  DualResult result;
  if (a.kind == Access::Kind::Read) result.first = load(a.address);
  if (b.kind == Access::Kind::Read) result.second = load(b.address);
  for (const Access* acc : {&a, &b}) {
    if (acc->kind == Access::Kind::Write) {
      store(acc->address, acc->value);
      ++stats_.writes;
    } else {
      ++stats_.reads;
    }
  }
  ++stats_.cycles;
  return result;
}

Element Memory::stored(std::size_t cell) const {
  check_address(cell, cfg_);
  return cells_[cell];
}

}  // namespace prt
