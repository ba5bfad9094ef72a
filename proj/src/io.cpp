#include "prt/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace prt {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& message) {
  throw Error(Errc::InvalidConfig, path + ": " + message);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) bad(path, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      bad(path + "." + item.key(), "unknown key");
    }
  }
}

std::uint64_t as_uint(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  if (v.is_string()) {
    try {
      return parse_unsigned(v.get<std::string>());
    } catch (const Error&) {
      bad(path, "not an unsigned integer");
    }
  }
  bad(path, "expected an unsigned integer");
}

std::vector<Element> as_elements(const json& v, const std::string& path) {
  if (!v.is_array()) bad(path, "expected an array");
  std::vector<Element> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::uint64_t x = as_uint(v[i], path + "[" + std::to_string(i) + "]");
    if (x > 0xFFFF) bad(path + "[" + std::to_string(i) + "]", "value exceeds 16 bits");
    out.push_back(static_cast<Element>(x));
  }
  return out;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

template <class Parse>
auto as_kind(const json& v, const std::string& path, Parse parse) {
  const std::string name = as_string(v, path);
  const auto parsed = parse(name);
  if (!parsed) bad(path, "unknown value '" + name + "'");
  return *parsed;
}

// Accepts either "kind" or {"kind": ..., "seed": ...}.
template <class Parse>
auto kind_and_seed(const json& v, const std::string& path, Parse parse) {
  std::uint64_t seed = 0;
  if (v.is_string()) return std::pair{as_kind(v, path, parse), seed};
  only_keys(v, path, {"kind", "seed"});
  if (!v.contains("kind")) bad(path, "missing 'kind'");
  if (v.contains("seed")) seed = as_uint(v["seed"], path + ".seed");
  return std::pair{as_kind(v["kind"], path + ".kind", parse), seed};
}

MemoryConfig parse_memory(const json& v) {
  only_keys(v, "memory", {"n", "m", "ports"});
  if (!v.contains("n")) bad("memory", "missing 'n'");
  MemoryConfig cfg;
  cfg.cells = as_uint(v["n"], "memory.n");
  cfg.width = v.contains("m") ? static_cast<unsigned>(as_uint(v["m"], "memory.m")) : 1;
  cfg.ports = v.contains("ports") ? static_cast<unsigned>(as_uint(v["ports"], "memory.ports")) : 1;
  try {
    cfg.validate();
  } catch (const Error& e) {
    bad("memory", e.what());
  }
  return cfg;
}

FieldSpec parse_field(const json* v, const MemoryConfig& memory) {
  if (!v) {
    if (memory.width == 1) return FieldSpec::binary();
    bad("field", "required when memory.m > 1");
  }
  only_keys(*v, "field", {"m", "poly"});
  const unsigned m = v->contains("m") ? static_cast<unsigned>(as_uint((*v)["m"], "field.m")) : memory.width;
  if (m != memory.width) bad("field.m", "must equal memory.m");
  if (!v->contains("poly")) bad("field", "missing 'poly'");
  const std::uint64_t poly = as_uint((*v)["poly"], "field.poly");
  try {
    return FieldSpec(m, static_cast<Poly>(poly));
  } catch (const Error& e) {
    bad("field", e.what());
  }
}

LfsrDef parse_lfsr(const json& v, const FieldSpec& field) {
  only_keys(v, "lfsr", {"taps", "generator"});
  const bool taps = v.contains("taps");
  const bool generator = v.contains("generator");
  if (taps == generator) bad("lfsr", "give exactly one of 'taps' or 'generator'");
  try {
    if (taps) return LfsrDef(field, as_elements(v["taps"], "lfsr.taps"));
    const auto coefficients = as_elements(v["generator"], "lfsr.generator");
    return lfsr_from_generator(field, coefficients);
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidConfig) throw;
    bad("lfsr", e.what());
  }
}

PiTestConfig parse_iteration(const json& v, const std::string& path, const LfsrDef& lfsr, const MemoryConfig& memory) {
  only_keys(v, path, {"init", "trajectory", "compare", "port_mode", "lane_mode"});
  PiTestConfig cfg{lfsr, {}};
  if (v.contains("trajectory")) {
    const auto [kind, seed] = kind_and_seed(v["trajectory"], path + ".trajectory", parse_trajectory_kind);
    cfg.trajectory = {kind, seed};
  }
  if (v.contains("compare")) cfg.compare = as_kind(v["compare"], path + ".compare", parse_compare_mode);
  if (v.contains("port_mode")) cfg.port_mode = as_kind(v["port_mode"], path + ".port_mode", parse_port_mode);
  if (v.contains("lane_mode")) {
    const auto [kind, seed] = kind_and_seed(v["lane_mode"], path + ".lane_mode", parse_lane_kind);
    cfg.lane_mode = {kind, seed};
  }
  if (v.contains("init")) {
    cfg.init.stages = as_elements(v["init"], path + ".init");
  } else if (cfg.lane_mode.kind == LaneKind::Random) {
    cfg.init.stages.assign(lfsr.stages(), 0);  // unused, lane seeds come from the lane RNG
  } else {
    bad(path, "missing 'init'");
  }
  if (cfg.port_mode == PortMode::Dual && memory.ports != 2) bad(path + ".port_mode", "dual needs memory.ports = 2");
  try {
    validate_config(cfg, memory);
  } catch (const Error& e) {
    bad(path, e.what());
  }
  return cfg;
}

FaultUniverse parse_universe(const json& v, const MemoryConfig& memory) {
  only_keys(v, "universe", {"classes", "d_max"});
  FaultUniverse u;
  u.geometry = memory;
  if (!v.contains("classes") || !v["classes"].is_array()) bad("universe.classes", "expected an array");
  for (std::size_t i = 0; i < v["classes"].size(); ++i) {
    const std::string path = "universe.classes[" + std::to_string(i) + "]";
    u.classes.push_back(as_kind(v["classes"][i], path, parse_fault_class));
  }
  if (u.classes.empty()) bad("universe.classes", "needs at least one class");
  if (v.contains("d_max")) u.d_max = as_uint(v["d_max"], "universe.d_max");
  return u;
}

json stats_to_json(const OpStats& s) { return {{"reads", s.reads}, {"writes", s.writes}, {"cycles", s.cycles}}; }

OpStats stats_from_json(const json& v) {
  return {v.at("reads").get<std::uint64_t>(), v.at("writes").get<std::uint64_t>(), v.at("cycles").get<std::uint64_t>()};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  return quoted + "\"";
}

}  // namespace

unsigned long parse_unsigned(const std::string& text) {
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(text, &used, 0);
  } catch (const std::exception&) {
    throw Error(Errc::InvalidArgument, "not an unsigned integer: '" + text + "'");
  }
  if (used != text.size() || text.find('-') != std::string::npos) {
    throw Error(Errc::InvalidArgument, "not an unsigned integer: '" + text + "'");
  }
  return value;
}

CampaignConfig parse_config(const json& doc) {
  only_keys(doc, "$", {"memory", "field", "lfsr", "schedule", "universe"});
  if (!doc.contains("memory")) bad("$", "missing 'memory'");
  if (!doc.contains("lfsr")) bad("$", "missing 'lfsr'");
  if (!doc.contains("schedule")) bad("$", "missing 'schedule'");

  CampaignConfig cfg;
  cfg.memory = parse_memory(doc["memory"]);
  cfg.field = parse_field(doc.contains("field") ? &doc["field"] : nullptr, cfg.memory);
  cfg.lfsr = parse_lfsr(doc["lfsr"], cfg.field);

  const json& schedule = doc["schedule"];
  if (!schedule.is_array() || schedule.empty()) bad("schedule", "expected a nonempty array");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    cfg.schedule.push_back(parse_iteration(schedule[i], "schedule[" + std::to_string(i) + "]", cfg.lfsr, cfg.memory));
  }
  if (doc.contains("universe")) cfg.universe = parse_universe(doc["universe"], cfg.memory);
  return cfg;
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json lfsr_state_to_json(const LfsrState& s) { return s.stages; }

json iteration_to_json(const IterationResult& r) {
  json out = {
      {"fin", lfsr_state_to_json(r.fin)},
      {"fin_expected", lfsr_state_to_json(r.fin_expected)},
      {"pass", r.pass},
      {"stats", stats_to_json(r.stats)},
  };
  if (!r.lanes.empty()) {
    json lanes = json::array();
    for (const auto& lane : r.lanes) {
      lanes.push_back({{"fin", lfsr_state_to_json(lane.fin)},
                       {"fin_expected", lfsr_state_to_json(lane.fin_expected)},
                       {"pass", lane.pass}});
    }
    out["lanes"] = std::move(lanes);
  }
  return out;
}

json schedule_verdict_to_json(const ScheduleVerdict& v) {
  json iterations = json::array();
  for (const auto& r : v.iterations) iterations.push_back(iteration_to_json(r));
  return {
      {"pass", v.pass},
      {"first_failure", v.first_failure ? json(*v.first_failure) : json(nullptr)},
      {"stats", stats_to_json(v.stats)},
      {"iterations", std::move(iterations)},
  };
}

json report_to_json(const CoverageReport& r) {
  json classes = json::array();
  for (FaultClass c : r.classes) classes.push_back(std::string(fault_class_name(c)));
  json summary = json::array();
  for (const auto& s : r.summary) {
    summary.push_back({{"class", std::string(fault_class_name(s.fault_class))},
                       {"total", s.total},
                       {"detected", s.detected},
                       {"coverage", s.coverage()}});
  }
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"fault_id", row.fault_id},
                    {"class", std::string(fault_class_name(row.fault_class))},
                    {"params", row.params},
                    {"detected", row.detected},
                    {"detected_by", row.detected_by ? json(*row.detected_by) : json(nullptr)}});
  }
  return {
      {"format", "prt-coverage-report/1"},
      {"test", {{"kind", r.test_kind}, {"description", r.test_description}}},
      {"universe",
       {{"memory", {{"n", r.geometry.cells}, {"m", r.geometry.width}, {"ports", r.geometry.ports}}},
        {"classes", std::move(classes)},
        {"pair_window", r.pair_window}}},
      {"metadata",
       {{"config_hash", r.config_hash},
        {"reference", {{"pass", r.reference_pass}, {"stats", stats_to_json(r.reference_stats)}}},
        {"timing", {{"timestamp", r.timestamp}, {"wall_time_ms", r.wall_time_ms}}}}},
      {"summary", std::move(summary)},
      {"rows", std::move(rows)},
  };
}

CoverageReport report_from_json(const json& doc) {
  auto fault_class_of = [](const json& v) {
    const auto c = parse_fault_class(v.get<std::string>());
    if (!c) throw Error(Errc::InvalidConfig, "report names unknown fault class");
    return *c;
  };
  try {
    if (doc.at("format") != "prt-coverage-report/1") throw Error(Errc::InvalidConfig, "unsupported report format");
    CoverageReport r;
    r.test_kind = doc.at("test").at("kind").get<std::string>();
    r.test_description = doc.at("test").at("description").get<std::string>();
    const json& u = doc.at("universe");
    r.geometry = {u.at("memory").at("n").get<std::size_t>(), u.at("memory").at("m").get<unsigned>(),
                  u.at("memory").at("ports").get<unsigned>()};
    for (const auto& c : u.at("classes")) r.classes.push_back(fault_class_of(c));
    r.pair_window = u.at("pair_window").get<std::size_t>();
    const json& meta = doc.at("metadata");
    r.config_hash = meta.at("config_hash").get<std::string>();
    r.reference_pass = meta.at("reference").at("pass").get<bool>();
    r.reference_stats = stats_from_json(meta.at("reference").at("stats"));
    r.timestamp = meta.at("timing").at("timestamp").get<std::string>();
    r.wall_time_ms = meta.at("timing").at("wall_time_ms").get<double>();
    for (const auto& s : doc.at("summary")) {
      r.summary.push_back({fault_class_of(s.at("class")), s.at("total").get<std::size_t>(),
                           s.at("detected").get<std::size_t>()});
    }
    for (const auto& row : doc.at("rows")) {
      CoverageRow cr;
      cr.fault_id = row.at("fault_id").get<std::size_t>();
      cr.fault_class = fault_class_of(row.at("class"));
      cr.params = row.at("params").get<std::string>();
      cr.detected = row.at("detected").get<bool>();
      if (!row.at("detected_by").is_null()) cr.detected_by = row.at("detected_by").get<std::size_t>();
      r.rows.push_back(std::move(cr));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("malformed report: ") + e.what());
  }
}

CoverageReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open report " + path.string());
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
}

std::string report_to_csv(const CoverageReport& r) {
  std::ostringstream out;
  out << "fault_id,class,params,detected,detected_by\n";
  for (const auto& row : r.rows) {
    out << row.fault_id << ',' << fault_class_name(row.fault_class) << ',' << csv_field(row.params) << ','
        << (row.detected ? 1 : 0) << ',';
    if (row.detected_by) out << *row.detected_by;
    out << '\n';
  }
  return out.str();
}

}  // namespace prt
