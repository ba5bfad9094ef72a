#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prt/lfsr.hpp"
#include "prt/memory.hpp"

namespace prt {

enum class TrajectoryKind : std::uint8_t { Ascending, Descending, Random };

/// Order in which the virtual LFSR visits the cells.
struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::Ascending;
  std::uint64_t seed = 0;  // Random only

  static Trajectory ascending() { return {TrajectoryKind::Ascending, 0}; }
  static Trajectory descending() { return {TrajectoryKind::Descending, 0}; }
  static Trajectory random(std::uint64_t seed) { return {TrajectoryKind::Random, seed}; }

  /// Address permutation; Random is a Fisher-Yates shuffle driven by std::mt19937_64(seed).
  std::vector<std::size_t> realize(std::size_t n) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

enum class CompareMode : std::uint8_t {
  Oracle,    // Fin against the precomputed Fin*
  Ring,      // Fin against Init; needs (n - k) divisible by the period
  RingFull,  // the k values that would wrap onto the seed cells against Init; needs n divisible by the period
};

enum class PortMode : std::uint8_t { Single, Dual };

enum class LaneKind : std::uint8_t { WholeWord, Parallel, Random };

/// How a word-oriented memory is driven: one GF(2^m) automaton per word, or m
/// GF(2) automatons, one per bit lane, sharing the address sequence.
struct LaneMode {
  LaneKind kind = LaneKind::WholeWord;
  std::uint64_t seed = 0;  // Random only

  static LaneMode whole_word() { return {LaneKind::WholeWord, 0}; }
  static LaneMode parallel() { return {LaneKind::Parallel, 0}; }
  static LaneMode random(std::uint64_t seed) { return {LaneKind::Random, seed}; }

  friend bool operator==(const LaneMode&, const LaneMode&) = default;
};

/// Config-file spellings: "ascending", "oracle", "ring", "ring_full", "single",
/// "dual", "whole_word", "parallel_lanes", "random_lanes", ...
std::string_view to_string(TrajectoryKind k) noexcept;
std::string_view to_string(CompareMode c) noexcept;
std::string_view to_string(PortMode p) noexcept;
std::string_view to_string(LaneKind l) noexcept;
std::optional<TrajectoryKind> parse_trajectory_kind(std::string_view s) noexcept;
std::optional<CompareMode> parse_compare_mode(std::string_view s) noexcept;
std::optional<PortMode> parse_port_mode(std::string_view s) noexcept;
std::optional<LaneKind> parse_lane_kind(std::string_view s) noexcept;

/// One pi-test iteration. The field is the one the LFSR is defined over.
struct PiTestConfig {
  LfsrDef lfsr;
  LfsrState init;
  Trajectory trajectory = Trajectory::ascending();
  CompareMode compare = CompareMode::Oracle;
  PortMode port_mode = PortMode::Single;
  LaneMode lane_mode = LaneMode::whole_word();

  const FieldSpec& field() const noexcept { return lfsr.field(); }
  std::size_t stages() const noexcept { return lfsr.stages(); }
};

/// A single bit lane: a GF(2) automaton with its own seed.
struct LanePlan {
  LfsrDef lfsr;
  LfsrState init;
};

struct LaneVerdict {
  LfsrState fin;
  LfsrState fin_expected;
  bool pass = false;
};

struct IterationResult {
  LfsrState fin;
  LfsrState fin_expected;
  bool pass = false;
  OpStats stats;  // charged operations of this iteration only
  std::vector<LaneVerdict> lanes;  // laned modes only
};

/// Throws Errc::InvalidConfig (or Errc::GeometryMismatch when the field width
/// differs from the cell width) if cfg cannot run on mem.
void validate_config(const PiTestConfig& cfg, const MemoryConfig& mem);

/// Per-lane automatons. Parallel: every lane copies taps and init. Random: taps
/// shared, each lane gets a nonzero init drawn from std::mt19937_64(seed).
/// Throws Errc::InvalidConfig for whole-word mode, m = 1 or non-binary taps.
std::vector<LanePlan> plan_lanes(const PiTestConfig& cfg);

/// The k seed words written to the first trajectory cells.
std::vector<Element> seed_words(const PiTestConfig& cfg);

/// Writes the seed words to the first k trajectory cells (k charged writes, port 0).
void initialize_tdb(const PiTestConfig& cfg, Memory& mem);

/// Single-port engine: k reads and one write per sub-iteration, k + (k+1)(n-k) charged operations.
IterationResult pi_iteration(const PiTestConfig& cfg, Memory& mem);

/// Dual-port engine for k = 2: both reads in one cycle, the write in the next,
/// k + 2(n-k) cycles. Throws Errc::InvalidConfig on a single-port memory and
/// Errc::UnsupportedStageCount for k != 2.
IterationResult pi_iteration_dual_port(const PiTestConfig& cfg, Memory& mem);

/// Dispatches on cfg.port_mode.
IterationResult run_iteration(const PiTestConfig& cfg, Memory& mem);

struct ScheduleVerdict {
  bool pass = true;
  std::optional<std::size_t> first_failure;  // index into the schedule
  std::vector<IterationResult> iterations;
  OpStats stats;
};

struct ScheduleOptions {
  bool stop_on_fail = true;
};

/// Runs the iterations back to back on the same memory; each one rewrites the
/// whole array, leaving the background the next one starts from.
/// Throws Errc::EmptySchedule, Errc::GeometryMismatch.
ScheduleVerdict run_prt_schedule(std::span<const PiTestConfig> schedule, Memory& mem, ScheduleOptions options = {});

}  // namespace prt
