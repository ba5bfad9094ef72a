#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prt/galois.hpp"

namespace prt {

/// Sliding window of the virtual automaton: stages[j] holds the cell value s_{i+j}.
struct LfsrState {
  std::vector<Element> stages;

  std::size_t size() const noexcept { return stages.size(); }
  bool is_zero() const noexcept;

  friend bool operator==(const LfsrState&, const LfsrState&) = default;
};

/// Fibonacci-style k-stage linear automaton over GF(2^m) with the normalized
/// recurrence s_{i+k} = sum_j taps[j] * s_{i+j}.
class LfsrDef {
 public:
  /// Throws Errc::InvalidArgument for an empty tap list or taps outside the field,
  /// Errc::DegenerateGenerator when taps[0] == 0.
  LfsrDef(FieldSpec field, std::vector<Element> taps);

  const FieldSpec& field() const noexcept { return field_; }
  const std::vector<Element>& taps() const noexcept { return taps_; }
  std::size_t stages() const noexcept { return taps_.size(); }

  /// Generator coefficients a_0..a_k when built through lfsr_from_generator.
  const std::optional<std::vector<Element>>& origin() const noexcept { return origin_; }

  friend bool operator==(const LfsrDef&, const LfsrDef&) = default;

 private:
  friend LfsrDef lfsr_from_generator(const FieldSpec& field, std::span<const Element> coefficients);

  FieldSpec field_;
  std::vector<Element> taps_;
  std::optional<std::vector<Element>> origin_;
};

/// Builds the automaton of g(x) = sum a_i x^i, normalizing taps by a_k^-1.
/// Throws Errc::DegenerateGenerator when a_0 or a_k is zero or k < 1.
LfsrDef lfsr_from_generator(const FieldSpec& field, std::span<const Element> coefficients);

/// Tap-weighted sum of a k-value window.
Element lfsr_feedback(const LfsrDef& def, std::span<const Element> window) noexcept;

struct StepResult {
  LfsrState state;
  Element emitted = 0;
};

StepResult lfsr_step(const LfsrDef& def, const LfsrState& state);

/// State after the given number of steps.
LfsrState lfsr_advance(const LfsrDef& def, LfsrState state, std::uint64_t steps);

/// Last k cells of a fault-free pass over n cells, i.e. the state after n - k steps.
/// Throws Errc::InvalidArgument when n < k.
LfsrState expected_final(const LfsrDef& def, const LfsrState& init, std::size_t n);

/// Orbit length of init. Throws Errc::ZeroState for the all-zero fixed point.
std::uint64_t lfsr_period(const LfsrDef& def, const LfsrState& init);

/// Throws Errc::InvalidArgument unless the state has k in-field stages.
void check_state(const LfsrDef& def, const LfsrState& state);

}  // namespace prt
