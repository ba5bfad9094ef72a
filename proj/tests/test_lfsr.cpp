#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "prt/lfsr.hpp"

using namespace prt;

namespace {

const FieldSpec kGf16(4, 0x13);

LfsrDef bom() { return LfsrDef(FieldSpec::binary(), {1, 1}); }

LfsrDef gf16_wom() {
  const Element g[] = {1, 2, 2};
  return lfsr_from_generator(kGf16, g);
}

LfsrState state(std::initializer_list<Element> v) { return {std::vector<Element>(v)}; }

// Every state of a small automaton, enumerated as a base-2^m number.
std::vector<LfsrState> all_states(const LfsrDef& def) {
  const unsigned m = def.field().width();
  const std::size_t k = def.stages();
  std::vector<LfsrState> out;
  for (std::uint32_t code = 0; code < (1U << (m * k)); ++code) {
    LfsrState s;
    for (std::size_t j = 0; j < k; ++j) s.stages.push_back((code >> (j * m)) & def.field().mask());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("lfsr_from_generator") {
  const Element bom_g[] = {1, 1, 1};
  const LfsrDef b = lfsr_from_generator(FieldSpec::binary(), bom_g);
  CHECK(b.taps() == std::vector<Element>{1, 1});
  REQUIRE(b.origin().has_value());
  CHECK(*b.origin() == std::vector<Element>{1, 1, 1});

  const LfsrDef w = gf16_wom();
  CHECK(w.taps() == std::vector<Element>{gf_mul(kGf16, 9, 1), gf_mul(kGf16, 9, 2)});
  CHECK(w.taps() == std::vector<Element>{9, 1});

  const Element leading_zero[] = {1, 0};
  const Element constant_zero[] = {0, 1, 1};
  const Element too_short[] = {1};
  for (auto coeffs : {std::span<const Element>(leading_zero), std::span<const Element>(constant_zero),
                      std::span<const Element>(too_short)}) {
    try {
      lfsr_from_generator(FieldSpec::binary(), coeffs);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DegenerateGenerator);
    }
  }
}

TEST_CASE("direct taps are validated") {
  CHECK_THROWS_AS(LfsrDef(FieldSpec::binary(), {}), Error);
  CHECK_THROWS_AS(LfsrDef(FieldSpec::binary(), {0, 1}), Error);
  CHECK_THROWS_AS(LfsrDef(FieldSpec::binary(), {1, 2}), Error);
  CHECK_NOTHROW(LfsrDef(kGf16, {9, 1}));
}

TEST_CASE("lfsr_step on the bit-oriented recurrence") {
  auto r = lfsr_step(bom(), state({0, 1}));
  CHECK(r.state == state({1, 1}));
  CHECK(r.emitted == 1);

  r = lfsr_step(bom(), state({0, 0}));
  CHECK(r.state == state({0, 0}));
  CHECK(r.emitted == 0);

  r = lfsr_step(bom(), state({1, 0}));
  CHECK(r.state == state({0, 1}));
  CHECK(r.emitted == 1);

  CHECK_THROWS_AS(lfsr_step(bom(), state({0, 1, 1})), Error);
}

TEST_CASE("expected_final") {
  CHECK(expected_final(bom(), state({0, 1}), 2) == state({0, 1}));
  CHECK(expected_final(bom(), state({0, 1}), 6) == state({1, 1}));
  CHECK(expected_final(bom(), state({0, 1}), 8) == state({0, 1}));
  CHECK_THROWS_AS(expected_final(bom(), state({0, 1}), 1), Error);

  // Same answer as an unrolled array for the word-oriented automaton.
  const auto seq = oracle::unrolled_sequence({9, 1}, {1, 2}, 40, 0x13);
  CHECK(expected_final(gf16_wom(), state({1, 2}), 40) == state({seq[38], seq[39]}));
}

TEST_CASE("lfsr_period") {
  CHECK(lfsr_period(bom(), state({0, 1})) == 3);
  CHECK(lfsr_period(bom(), state({1, 0})) == 3);
  try {
    lfsr_period(bom(), state({0, 0}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroState);
  }

  // Independent iteration over the unrolled array: the g(x) = 1 + 2x + 2x^2
  // automaton over GF(16) has period 255 from every nonzero state.
  const auto seq = oracle::unrolled_sequence({9, 1}, {1, 2}, 600, 0x13);
  std::size_t brute = 0;
  for (std::size_t t = 1; t + 1 < seq.size(); ++t) {
    if (seq[t] == 1 && seq[t + 1] == 2) {
      brute = t;
      break;
    }
  }
  CHECK(brute == 255);
  CHECK(lfsr_period(gf16_wom(), state({1, 2})) == 255);
  CHECK(lfsr_period(gf16_wom(), state({0, 1})) == 255);
}

TEST_CASE("lfsr_step is a bijection on states") {
  for (const LfsrDef& def : {bom(), LfsrDef(FieldSpec::binary(), {1, 0, 1}), LfsrDef(kGf16, {9, 1}),
                             LfsrDef(FieldSpec(3, 0xB), {3, 0, 5})}) {
    std::set<std::vector<Element>> images;
    const auto states = all_states(def);
    for (const auto& s : states) images.insert(lfsr_step(def, s).state.stages);
    CHECK(images.size() == states.size());
  }
}

TEST_CASE("returning to Init after one period") {
  for (const auto& init : all_states(gf16_wom())) {
    if (init.is_zero()) continue;
    const std::uint64_t t = lfsr_period(gf16_wom(), init);
    REQUIRE(expected_final(gf16_wom(), init, 2 + t) == init);
  }
}

TEST_CASE("superposition of expected finals") {
  const LfsrDef def(FieldSpec(3, 0xB), {3, 5});
  const auto states = all_states(def);
  for (const auto& a : states) {
    for (const auto& b : states) {
      const LfsrState sum{{gf_add(a.stages[0], b.stages[0]), gf_add(a.stages[1], b.stages[1])}};
      const LfsrState fa = expected_final(def, a, 11);
      const LfsrState fb = expected_final(def, b, 11);
      REQUIRE(expected_final(def, sum, 11) == LfsrState{{gf_add(fa.stages[0], fb.stages[0]),
                                                        gf_add(fa.stages[1], fb.stages[1])}});
    }
  }
}

TEST_CASE("a perturbation anywhere changes the final state") {
  const LfsrDef def = gf16_wom();
  const LfsrState init = state({3, 7});
  const std::size_t steps = 20;
  const LfsrState clean = lfsr_advance(def, init, steps);
  for (std::size_t at = 0; at <= steps; ++at) {
    for (std::size_t stage = 0; stage < 2; ++stage) {
      for (Element e = 1; e < 16; ++e) {
        LfsrState s = lfsr_advance(def, init, at);
        s.stages[stage] ^= e;
        REQUIRE(lfsr_advance(def, s, steps - at) != clean);
      }
    }
  }
}
