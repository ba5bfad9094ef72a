#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prt/galois.hpp"

namespace prt {

/// A wire in an XOR network: a primary input x<i>, a gate output t<i>, or a
/// tied-low output (only produced for the all-zero row of c = 0).
struct Signal {
  enum class Kind : std::uint8_t { Input, Gate, Zero };

  Kind kind = Kind::Zero;
  std::uint32_t index = 0;

  static Signal input(std::uint32_t i) { return {Kind::Input, i}; }
  static Signal gate(std::uint32_t i) { return {Kind::Gate, i}; }
  static Signal zero() { return {Kind::Zero, 0}; }

  friend bool operator==(const Signal&, const Signal&) = default;
};

struct XorGate {
  Signal lhs;
  Signal rhs;

  friend bool operator==(const XorGate&, const XorGate&) = default;
};

/// Straight-line program of 2-input XOR gates. Gates only reference inputs and
/// earlier gates, so evaluation in declaration order is a topological order.
class XorNetwork {
 public:
  /// Throws Errc::InvalidArgument if a gate references itself or a later gate,
  /// or a signal index is out of range.
  XorNetwork(unsigned inputs, std::vector<XorGate> gates, std::vector<Signal> outputs);

  unsigned inputs() const noexcept { return inputs_; }
  const std::vector<XorGate>& gates() const noexcept { return gates_; }
  const std::vector<Signal>& outputs() const noexcept { return outputs_; }
  std::size_t gate_count() const noexcept { return gates_.size(); }

  friend bool operator==(const XorNetwork&, const XorNetwork&) = default;

 private:
  unsigned inputs_;
  std::vector<XorGate> gates_;
  std::vector<Signal> outputs_;
};

/// Gates needed without sharing: sum over rows of max(popcount - 1, 0).
std::size_t naive_gate_count(const BitMatrix& mat);

/// XOR-only network for x -> c * x. Exact minimum for m <= 4 (search over every
/// straight-line XOR program), greedy pairwise common-subexpression elimination above.
XorNetwork synthesize_multiplier(const FieldSpec& field, Element c);

Element eval_xor_network(const XorNetwork& net, Element x);

/// Netlist text: `t<i> = <sig> ^ <sig>` per gate, then `y<j> = <sig>` per output.
/// Outputs tied low are omitted.
std::string to_netlist(const XorNetwork& net);

/// Inverse of to_netlist; blank lines and `#` comments are ignored.
XorNetwork parse_netlist(std::string_view text, unsigned inputs);

}  // namespace prt
