#include "prt/pi_engine.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace prt {

namespace {

// Uniform draw in [0, bound) by rejection, so the sequence depends only on mt19937_64.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

bool taps_are_binary(const LfsrDef& def) {
  return std::all_of(def.taps().begin(), def.taps().end(), [](Element t) { return t <= 1; });
}

struct Automaton {
  LfsrDef lfsr;
  LfsrState init;
};

std::vector<Automaton> automata(const PiTestConfig& cfg) {
  if (cfg.lane_mode.kind == LaneKind::WholeWord) return {{cfg.lfsr, cfg.init}};
  std::vector<Automaton> out;
  for (auto& lane : plan_lanes(cfg)) out.push_back({std::move(lane.lfsr), std::move(lane.init)});
  return out;
}

void check_ring_period(const Automaton& a, std::size_t n, CompareMode mode) {
  std::uint64_t period = 0;
  try {
    period = lfsr_period(a.lfsr, a.init);
  } catch (const Error& e) {
    if (e.code() == Errc::ZeroState) throw Error(Errc::InvalidConfig, "ring compare needs a nonzero init");
    throw;
  }
  const std::size_t k = a.lfsr.stages();
  const std::uint64_t span = mode == CompareMode::Ring ? n - k : n;
  if (span % period != 0) {
    throw Error(Errc::InvalidConfig, std::string("ring compare needs ") + (mode == CompareMode::Ring ? "n - k" : "n") +
                                         " = " + std::to_string(span) + " to be a multiple of the period " +
                                         std::to_string(period));
  }
}

LaneVerdict judge(const Automaton& a, const LfsrState& fin, std::size_t n, CompareMode mode) {
  LaneVerdict v;
  v.fin = fin;
  switch (mode) {
    case CompareMode::Oracle:
      v.fin_expected = expected_final(a.lfsr, a.init, n);
      v.pass = fin == v.fin_expected;
      break;
    case CompareMode::Ring:
      v.fin_expected = a.init;
      v.pass = fin == a.init;
      break;
    case CompareMode::RingFull:
      // Close the ring by continuing k steps onto the seed cells.
      v.fin_expected = expected_final(a.lfsr, a.init, n);
      v.pass = lfsr_advance(a.lfsr, fin, a.lfsr.stages()) == a.init;
      break;
  }
  return v;
}

LfsrState lane_slice(const LfsrState& words, unsigned lane) {
  LfsrState s;
  for (Element w : words.stages) s.stages.push_back((w >> lane) & 1U);
  return s;
}

void finish(const PiTestConfig& cfg, Memory& mem, const std::vector<std::size_t>& order, IterationResult& result) {
  const std::size_t n = order.size();
  const std::size_t k = cfg.stages();
  for (std::size_t j = 0; j < k; ++j) result.fin.stages.push_back(mem.observe(order[n - k + j]));

  const auto units = automata(cfg);
  if (cfg.lane_mode.kind == LaneKind::WholeWord) {
    LaneVerdict v = judge(units.front(), result.fin, n, cfg.compare);
    result.fin_expected = std::move(v.fin_expected);
    result.pass = v.pass;
    return;
  }
  result.fin_expected.stages.assign(k, 0);
  result.pass = true;
  for (unsigned lane = 0; lane < units.size(); ++lane) {
    LaneVerdict v = judge(units[lane], lane_slice(result.fin, lane), n, cfg.compare);
    for (std::size_t j = 0; j < k; ++j) result.fin_expected.stages[j] |= v.fin_expected.stages[j] << lane;
    result.pass = result.pass && v.pass;
    result.lanes.push_back(std::move(v));
  }
}

}  // namespace

std::string_view to_string(TrajectoryKind k) noexcept {
  switch (k) {
    case TrajectoryKind::Ascending: return "ascending";
    case TrajectoryKind::Descending: return "descending";
    case TrajectoryKind::Random: return "random";
  }
  return "?";
}

std::string_view to_string(CompareMode c) noexcept {
  switch (c) {
    case CompareMode::Oracle: return "oracle";
    case CompareMode::Ring: return "ring";
    case CompareMode::RingFull: return "ring_full";
  }
  return "?";
}

std::string_view to_string(PortMode p) noexcept { return p == PortMode::Dual ? "dual" : "single"; }

std::string_view to_string(LaneKind l) noexcept {
  switch (l) {
    case LaneKind::WholeWord: return "whole_word";
    case LaneKind::Parallel: return "parallel_lanes";
    case LaneKind::Random: return "random_lanes";
  }
  return "?";
}

namespace {

template <class Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const Enum (&values)[N]) noexcept {
  for (Enum v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

}  // namespace

std::optional<TrajectoryKind> parse_trajectory_kind(std::string_view s) noexcept {
  constexpr TrajectoryKind all[] = {TrajectoryKind::Ascending, TrajectoryKind::Descending, TrajectoryKind::Random};
  return lookup(s, all);
}

std::optional<CompareMode> parse_compare_mode(std::string_view s) noexcept {
  constexpr CompareMode all[] = {CompareMode::Oracle, CompareMode::Ring, CompareMode::RingFull};
  return lookup(s, all);
}

std::optional<PortMode> parse_port_mode(std::string_view s) noexcept {
  constexpr PortMode all[] = {PortMode::Single, PortMode::Dual};
  return lookup(s, all);
}

std::optional<LaneKind> parse_lane_kind(std::string_view s) noexcept {
  constexpr LaneKind all[] = {LaneKind::WholeWord, LaneKind::Parallel, LaneKind::Random};
  return lookup(s, all);
}

std::vector<std::size_t> Trajectory::realize(std::size_t n) const {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  switch (kind) {
    case TrajectoryKind::Ascending: break;
    case TrajectoryKind::Descending: std::reverse(order.begin(), order.end()); break;
    case TrajectoryKind::Random: {
      std::mt19937_64 rng(seed);
      for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[draw_below(rng, i)]);
      break;
    }
  }
  return order;
}

std::vector<LanePlan> plan_lanes(const PiTestConfig& cfg) {
  const unsigned m = cfg.field().width();
  if (cfg.lane_mode.kind == LaneKind::WholeWord) throw Error(Errc::InvalidConfig, "whole-word mode has no lanes");
  if (m == 1) throw Error(Errc::InvalidConfig, "laned modes need a word-oriented memory (m > 1)");
  if (!taps_are_binary(cfg.lfsr)) throw Error(Errc::InvalidConfig, "laned modes need taps in {0, 1}");

  const LfsrDef lane_lfsr(FieldSpec::binary(), cfg.lfsr.taps());
  const std::size_t k = cfg.stages();
  std::vector<LanePlan> lanes;
  lanes.reserve(m);

  if (cfg.lane_mode.kind == LaneKind::Parallel) {
    check_state(lane_lfsr, cfg.init);
    for (unsigned lane = 0; lane < m; ++lane) lanes.push_back({lane_lfsr, cfg.init});
    return lanes;
  }

  std::mt19937_64 rng(cfg.lane_mode.seed);
  for (unsigned lane = 0; lane < m; ++lane) {
    LfsrState init;
    init.stages.assign(k, 0);
    while (init.is_zero()) {
      for (std::size_t j = 0; j < k; ++j) init.stages[j] = static_cast<Element>(rng() >> 63);
    }
    lanes.push_back({lane_lfsr, std::move(init)});
  }
  return lanes;
}

std::vector<Element> seed_words(const PiTestConfig& cfg) {
  if (cfg.lane_mode.kind == LaneKind::WholeWord) return cfg.init.stages;
  std::vector<Element> words(cfg.stages(), 0);
  const auto lanes = plan_lanes(cfg);
  for (unsigned lane = 0; lane < lanes.size(); ++lane) {
    for (std::size_t j = 0; j < words.size(); ++j) words[j] |= lanes[lane].init.stages[j] << lane;
  }
  return words;
}

void validate_config(const PiTestConfig& cfg, const MemoryConfig& mem) {
  if (cfg.field().width() != mem.width) {
    throw Error(Errc::GeometryMismatch, "field width " + std::to_string(cfg.field().width()) +
                                            " does not match cell width " + std::to_string(mem.width));
  }
  const std::size_t k = cfg.stages();
  if (k >= mem.cells) {
    throw Error(Errc::InvalidConfig, "stage count " + std::to_string(k) + " must be below the cell count");
  }
  try {
    if (cfg.lane_mode.kind == LaneKind::WholeWord) {
      check_state(cfg.lfsr, cfg.init);
    } else {
      plan_lanes(cfg);
    }
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidConfig) throw;
    throw Error(Errc::InvalidConfig, e.what());
  }
  if (cfg.compare != CompareMode::Oracle) {
    for (const auto& a : automata(cfg)) check_ring_period(a, mem.cells, cfg.compare);
  }
}

void initialize_tdb(const PiTestConfig& cfg, Memory& mem) {
  const auto order = cfg.trajectory.realize(mem.config().cells);
  const auto words = seed_words(cfg);
  for (std::size_t j = 0; j < words.size(); ++j) mem.write(0, order[j], words[j]);
}

IterationResult pi_iteration(const PiTestConfig& cfg, Memory& mem) {
  validate_config(cfg, mem.config());
  const std::size_t n = mem.config().cells;
  const std::size_t k = cfg.stages();
  const auto order = cfg.trajectory.realize(n);

  IterationResult result;
  const OpStats before = mem.stats();
  initialize_tdb(cfg, mem);
  std::vector<Element> window(k);
  for (std::size_t i = 0; i + k < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) window[j] = mem.read(0, order[i + j]);
    mem.write(0, order[i + k], lfsr_feedback(cfg.lfsr, window));
  }
  result.stats = mem.stats() - before;
  finish(cfg, mem, order, result);
  return result;
}

IterationResult pi_iteration_dual_port(const PiTestConfig& cfg, Memory& mem) {
  if (mem.config().ports != 2) throw Error(Errc::InvalidConfig, "dual-port engine needs a two-port memory");
  if (cfg.stages() != 2) {
    throw Error(Errc::UnsupportedStageCount,
                "unsupported dual-port stage count " + std::to_string(cfg.stages()) + " (only k = 2)");
  }
  validate_config(cfg, mem.config());
  const std::size_t n = mem.config().cells;
  const auto order = cfg.trajectory.realize(n);

  IterationResult result;
  const OpStats before = mem.stats();
  initialize_tdb(cfg, mem);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const auto [lhs, rhs] = mem.cycle_dual(Access::read(order[i]), Access::read(order[i + 1]));
    const Element window[2] = {*lhs, *rhs};
    mem.write(0, order[i + 2], lfsr_feedback(cfg.lfsr, window));
  }
  result.stats = mem.stats() - before;
  finish(cfg, mem, order, result);
  return result;
}

IterationResult run_iteration(const PiTestConfig& cfg, Memory& mem) {
  return cfg.port_mode == PortMode::Dual ? pi_iteration_dual_port(cfg, mem) : pi_iteration(cfg, mem);
}

ScheduleVerdict run_prt_schedule(std::span<const PiTestConfig> schedule, Memory& mem, ScheduleOptions options) {
  if (schedule.empty()) throw Error(Errc::EmptySchedule, "a PRT schedule needs at least one iteration");
  for (const auto& cfg : schedule) {
    if (cfg.field().width() != mem.config().width) {
      throw Error(Errc::GeometryMismatch, "schedule field width does not match the memory cell width");
    }
  }

  ScheduleVerdict verdict;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    IterationResult r = run_iteration(schedule[i], mem);
    verdict.stats += r.stats;
    const bool failed = !r.pass;
    verdict.iterations.push_back(std::move(r));
    if (failed) {
      verdict.pass = false;
      if (!verdict.first_failure) verdict.first_failure = i;
      if (options.stop_on_fail) break;
    }
  }
  return verdict;
}

}  // namespace prt
