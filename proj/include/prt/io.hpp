#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "prt/campaign.hpp"

namespace prt {

/// A parsed campaign configuration file.
///
/// {
///   "memory":   {"n": 64, "m": 1, "ports": 1},
///   "field":    {"m": 4, "poly": "0x13"},           // optional for m = 1
///   "lfsr":     {"taps": [1, 1]} | {"generator": [1, 2, 2]},
///   "schedule": [{"init": [0, 1],
///                 "trajectory": "ascending" | {"kind": "random", "seed": 7},
///                 "compare": "oracle" | "ring" | "ring_full",
///                 "port_mode": "single" | "dual",
///                 "lane_mode": "whole_word" | "parallel_lanes" | {"kind": "random_lanes", "seed": 7}}],
///   "universe": {"classes": ["StuckAt", ...], "d_max": 4}
/// }
///
/// Unknown keys are rejected at every level.
struct CampaignConfig {
  MemoryConfig memory;
  FieldSpec field = FieldSpec::binary();
  LfsrDef lfsr{FieldSpec::binary(), {1, 1}};
  Schedule schedule;
  std::optional<FaultUniverse> universe;
};

/// Throws Errc::InvalidConfig with the offending JSON path in the message.
CampaignConfig parse_config(const nlohmann::json& doc);
CampaignConfig load_config(const std::filesystem::path& path);

nlohmann::json lfsr_state_to_json(const LfsrState& s);
nlohmann::json iteration_to_json(const IterationResult& r);
nlohmann::json schedule_verdict_to_json(const ScheduleVerdict& v);

/// Report layout: format, test, universe, metadata {config_hash, reference,
/// timing {timestamp, wall_time_ms}}, summary[], rows[]. Only metadata.timing
/// varies between identical runs.
nlohmann::json report_to_json(const CoverageReport& r);
CoverageReport report_from_json(const nlohmann::json& doc);
CoverageReport load_report(const std::filesystem::path& path);

/// Header `fault_id,class,params,detected,detected_by`; detected_by is empty when undetected.
std::string report_to_csv(const CoverageReport& r);

/// Parses "0x13", "19" or a JSON number.
unsigned long parse_unsigned(const std::string& text);

}  // namespace prt
