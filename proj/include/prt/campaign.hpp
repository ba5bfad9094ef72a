#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prt/march.hpp"
#include "prt/memory.hpp"
#include "prt/pi_engine.hpp"

namespace prt {

/// Coupling and alias pairs are limited to cells at most this far apart when
/// the memory is larger than kFullPairLimit and no d_max is given.
inline constexpr std::size_t kDefaultPairWindow = 8;
inline constexpr std::size_t kFullPairLimit = 64;

struct FaultUniverse {
  std::vector<FaultClass> classes;
  MemoryConfig geometry;
  std::optional<std::size_t> d_max;

  /// Largest aggressor/victim (or alias) cell distance enumerated.
  std::size_t pair_window() const noexcept;

  /// Throws Errc::InvalidConfig for an empty class set or an invalid geometry.
  void validate() const;
};

/// Deterministic: classes in enum order, parameters in nested ascending order.
/// Duplicate classes in the universe are enumerated once.
std::vector<FaultDescriptor> enumerate_faults(const FaultUniverse& universe);

using Schedule = std::vector<PiTestConfig>;
using CampaignTest = std::variant<MarchTest, Schedule>;

/// Canonical one-line description, stable across runs.
std::string describe_test(const CampaignTest& test);

struct CoverageRow {
  std::size_t fault_id = 0;
  FaultClass fault_class = FaultClass::StuckAt;
  std::string params;
  bool detected = false;
  std::optional<std::size_t> detected_by;  // iteration index (PRT) or element index (March)

  friend bool operator==(const CoverageRow&, const CoverageRow&) = default;
};

struct ClassSummary {
  FaultClass fault_class = FaultClass::StuckAt;
  std::size_t total = 0;
  std::size_t detected = 0;

  double coverage() const noexcept {
    return total == 0 ? 1.0 : static_cast<double>(detected) / static_cast<double>(total);
  }

  friend bool operator==(const ClassSummary&, const ClassSummary&) = default;
};

struct CoverageReport {
  std::string test_kind;  // "prt" or "march"
  std::string test_description;
  std::vector<FaultClass> classes;
  MemoryConfig geometry;
  std::size_t pair_window = 0;
  std::string config_hash;
  bool reference_pass = false;  // fault-free run
  OpStats reference_stats;
  std::string timestamp;
  double wall_time_ms = 0.0;
  std::vector<ClassSummary> summary;
  std::vector<CoverageRow> rows;

  std::size_t detected() const noexcept;
  double coverage() const noexcept;
  double min_class_coverage() const noexcept;
};

struct CampaignOptions {
  unsigned threads = 1;  // 0 picks std::thread::hardware_concurrency()
};

/// One fresh memory per fault: inject, run, record. Rows are ordered by fault id
/// whatever the thread count. Throws Errc::GeometryMismatch when the test cannot
/// run on the universe geometry.
CoverageReport run_campaign(const CampaignTest& test, const FaultUniverse& universe, CampaignOptions options = {});

struct ClassDelta {
  FaultClass fault_class = FaultClass::StuckAt;
  std::size_t total = 0;
  std::size_t detected_a = 0;
  std::size_t detected_b = 0;

  double delta() const noexcept;  // coverage(b) - coverage(a)
};

struct ReportDiff {
  std::vector<ClassDelta> classes;
  std::vector<std::size_t> only_a;  // fault ids detected by a alone
  std::vector<std::size_t> only_b;

  bool is_zero() const noexcept;
};

/// Throws Errc::UniverseMismatch unless both reports cover the same fault list.
ReportDiff compare_reports(const CoverageReport& a, const CoverageReport& b);

std::string format_diff(const ReportDiff& diff);

struct TdbSearchOptions {
  std::size_t trials = 32;
  std::uint64_t seed = 1;
  bool vary_taps = false;
  CampaignOptions campaign;
};

struct TdbSearchResult {
  Schedule schedule;
  CoverageReport report;
  std::size_t best_trial = 0;  // 0 is the unmodified input schedule
};

/// Random search over seed values (and optionally taps) of each iteration,
/// keeping the schedule that detects the most faults. Candidates use oracle
/// compare; ties keep the earlier trial.
TdbSearchResult search_tdb(const Schedule& base, const FaultUniverse& universe, TdbSearchOptions options = {});

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& text);

}  // namespace prt
