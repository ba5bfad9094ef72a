#include "prt/lfsr.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace prt {

bool LfsrState::is_zero() const noexcept {
  return std::all_of(stages.begin(), stages.end(), [](Element e) { return e == 0; });
}

LfsrDef::LfsrDef(FieldSpec field, std::vector<Element> taps) : field_(field), taps_(std::move(taps)) {
  if (taps_.empty()) throw Error(Errc::InvalidArgument, "an LFSR needs at least one stage");
  for (Element t : taps_) {
    if (!field_.contains(t)) throw Error(Errc::InvalidArgument, "tap " + std::to_string(t) + " outside the field");
  }
  if (taps_.front() == 0) {
    throw Error(Errc::DegenerateGenerator, "taps[0] must be nonzero or the state map is not invertible");
  }
}

LfsrDef lfsr_from_generator(const FieldSpec& field, std::span<const Element> coefficients) {
  if (coefficients.size() < 2) throw Error(Errc::DegenerateGenerator, "generator must have degree k >= 1");
  for (Element a : coefficients) {
    if (!field.contains(a)) throw Error(Errc::InvalidArgument, "generator coefficient outside the field");
  }
  const Element lead = coefficients.back();
  if (lead == 0) throw Error(Errc::DegenerateGenerator, "degenerate generator: leading coefficient a_k is zero");
  if (coefficients.front() == 0) throw Error(Errc::DegenerateGenerator, "degenerate generator: a_0 is zero");

  const Element lead_inv = gf_inv(field, lead);
  std::vector<Element> taps;
  taps.reserve(coefficients.size() - 1);
  for (std::size_t j = 0; j + 1 < coefficients.size(); ++j) taps.push_back(gf_mul(field, lead_inv, coefficients[j]));

  LfsrDef def(field, std::move(taps));
  def.origin_.emplace(coefficients.begin(), coefficients.end());
  return def;
}

Element lfsr_feedback(const LfsrDef& def, std::span<const Element> window) noexcept {
  Element acc = 0;
  for (std::size_t j = 0; j < def.stages(); ++j) acc ^= gf_mul(def.field(), def.taps()[j], window[j]);
  return acc;
}

void check_state(const LfsrDef& def, const LfsrState& state) {
  if (state.size() != def.stages()) {
    throw Error(Errc::InvalidArgument, "state has " + std::to_string(state.size()) + " stages, LFSR has " +
                                           std::to_string(def.stages()));
  }
  for (Element e : state.stages) {
    if (!def.field().contains(e)) throw Error(Errc::InvalidArgument, "state value outside the field");
  }
}

StepResult lfsr_step(const LfsrDef& def, const LfsrState& state) {
  check_state(def, state);
  StepResult out;
  out.emitted = lfsr_feedback(def, state.stages);
  out.state.stages.assign(state.stages.begin() + 1, state.stages.end());
  out.state.stages.push_back(out.emitted);
  return out;
}

LfsrState lfsr_advance(const LfsrDef& def, LfsrState state, std::uint64_t steps) {
  check_state(def, state);
  auto& s = state.stages;
  for (std::uint64_t i = 0; i < steps; ++i) {
    const Element next = lfsr_feedback(def, s);
    std::rotate(s.begin(), s.begin() + 1, s.end());
    s.back() = next;
  }
  return state;
}

LfsrState expected_final(const LfsrDef& def, const LfsrState& init, std::size_t n) {
  if (n < def.stages()) {
    throw Error(Errc::InvalidArgument, "cell count " + std::to_string(n) + " is below the stage count");
  }
  return lfsr_advance(def, init, n - def.stages());
}

std::uint64_t lfsr_period(const LfsrDef& def, const LfsrState& init) {
  check_state(def, init);
  if (init.is_zero()) throw Error(Errc::ZeroState, "the all-zero state is a fixed point with no useful period");

  const unsigned bits = def.field().width() * static_cast<unsigned>(def.stages());
  const std::uint64_t cap = bits >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << bits);

  std::vector<Element> s = init.stages;
  for (std::uint64_t t = 1; t <= cap; ++t) {
    const Element next = lfsr_feedback(def, s);
    std::rotate(s.begin(), s.begin() + 1, s.end());
    s.back() = next;
    if (s == init.stages) return t;
  }
  // Unreachable for an invertible map on a finite state set.
  throw Error(Errc::InvalidArgument, "period search exceeded the state-space bound");
}

}  // namespace prt
