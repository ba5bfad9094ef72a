#include "prt/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

namespace prt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<FaultClass> normalized_classes(std::vector<FaultClass> classes) {
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

std::size_t distance(std::size_t a, std::size_t b) noexcept { return a > b ? a - b : b - a; }

std::vector<BitRef> all_bits(const MemoryConfig& g) {
  std::vector<BitRef> bits;
  bits.reserve(g.cells * g.width);
  for (std::size_t c = 0; c < g.cells; ++c) {
    for (unsigned b = 0; b < g.width; ++b) bits.push_back({c, b});
  }
  return bits;
}

template <class Visit>
void for_each_pair(const std::vector<BitRef>& bits, std::size_t window, Visit&& visit) {
  for (const BitRef& aggressor : bits) {
    for (const BitRef& victim : bits) {
      if (aggressor == victim || distance(aggressor.cell, victim.cell) > window) continue;
      visit(aggressor, victim);
    }
  }
}

void append_class(FaultClass cls, const FaultUniverse& u, std::vector<FaultDescriptor>& out) {
  const MemoryConfig& g = u.geometry;
  const auto bits = all_bits(g);
  const std::size_t window = u.pair_window();
  constexpr Edge kEdges[] = {Edge::Rise, Edge::Fall};

  switch (cls) {
    case FaultClass::StuckAt:
      for (const BitRef& b : bits) {
        for (unsigned v : {0U, 1U}) out.emplace_back(StuckAt{b, v});
      }
      break;
    case FaultClass::Transition:
      for (const BitRef& b : bits) {
        for (BlockedEdge e : {BlockedEdge::Up, BlockedEdge::Down}) out.emplace_back(Transition{b, e});
      }
      break;
    case FaultClass::CouplingInversion:
      for_each_pair(bits, window, [&](BitRef a, BitRef v) {
        for (Edge e : kEdges) out.emplace_back(CouplingInversion{a, v, e});
      });
      break;
    case FaultClass::CouplingIdempotent:
      for_each_pair(bits, window, [&](BitRef a, BitRef v) {
        for (Edge e : kEdges) {
          for (unsigned f : {0U, 1U}) out.emplace_back(CouplingIdempotent{a, v, e, f});
        }
      });
      break;
    case FaultClass::CouplingState:
      for_each_pair(bits, window, [&](BitRef a, BitRef v) {
        for (unsigned s : {0U, 1U}) {
          for (unsigned f : {0U, 1U}) out.emplace_back(CouplingState{a, s, v, f});
        }
      });
      break;
    case FaultClass::AddressAlias:
      for (std::size_t a = 0; a < g.cells; ++a) {
        for (std::size_t b = 0; b < g.cells; ++b) {
          if (a != b && distance(a, b) <= window) out.emplace_back(AddressAlias{a, b});
        }
      }
      break;
    case FaultClass::AddressVoid:
      for (std::size_t a = 0; a < g.cells; ++a) {
        for (unsigned d : {0U, 1U}) out.emplace_back(AddressVoid{a, d});
      }
      break;
  }
}

std::string describe_config(const PiTestConfig& cfg) {
  std::ostringstream out;
  auto list = [&](const std::vector<Element>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
  };
  out << "field=m" << cfg.field().width() << "/p0x" << std::hex << cfg.field().modulus() << std::dec << " taps=";
  list(cfg.lfsr.taps());
  out << " init=";
  list(cfg.init.stages);
  out << " trajectory=" << to_string(cfg.trajectory.kind);
  if (cfg.trajectory.kind == TrajectoryKind::Random) out << ":" << cfg.trajectory.seed;
  out << " compare=" << to_string(cfg.compare) << " port=" << to_string(cfg.port_mode)
      << " lanes=" << to_string(cfg.lane_mode.kind);
  if (cfg.lane_mode.kind == LaneKind::Random) out << ":" << cfg.lane_mode.seed;
  return out.str();
}

void check_geometry(const CampaignTest& test, const MemoryConfig& g) {
  std::visit(Overloaded{
                 [&](const MarchTest& t) {
                   for (const auto& e : t.elements) {
                     for (const auto& o : e.ops) {
                       if (o.data >> g.width) {
                         throw Error(Errc::GeometryMismatch, "march datum wider than the universe cell width");
                       }
                     }
                   }
                 },
                 [&](const Schedule& s) {
                   if (s.empty()) throw Error(Errc::EmptySchedule, "a PRT schedule needs at least one iteration");
                   for (const auto& cfg : s) {
                     if (cfg.port_mode == PortMode::Dual && g.ports != 2) {
                       throw Error(Errc::GeometryMismatch, "dual-port iteration on a single-port universe");
                     }
                     try {
                       validate_config(cfg, g);
                     } catch (const Error& e) {
                       throw Error(Errc::GeometryMismatch, e.what());
                     }
                   }
                 },
             },
             test);
}

struct Outcome {
  bool pass = true;
  std::optional<std::size_t> failed_at;
  OpStats stats;
};

Outcome execute(const CampaignTest& test, Memory& mem, bool stop_on_fail) {
  return std::visit(Overloaded{
                        [&](const MarchTest& t) {
                          const MarchVerdict v = execute_march(t, mem, {.full_trace = !stop_on_fail});
                          Outcome o{v.pass, std::nullopt, v.stats};
                          if (const auto* f = v.first_failure()) o.failed_at = f->element;
                          return o;
                        },
                        [&](const Schedule& s) {
                          const ScheduleVerdict v = run_prt_schedule(s, mem, {.stop_on_fail = stop_on_fail});
                          return Outcome{v.pass, v.first_failure, v.stats};
                        },
                    },
                    test);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

std::size_t FaultUniverse::pair_window() const noexcept {
  if (d_max) return *d_max;
  return geometry.cells <= kFullPairLimit ? geometry.cells : kDefaultPairWindow;
}

void FaultUniverse::validate() const {
  if (classes.empty()) throw Error(Errc::InvalidConfig, "fault universe needs at least one class");
  geometry.validate();
}

std::vector<FaultDescriptor> enumerate_faults(const FaultUniverse& universe) {
  universe.validate();
  std::vector<FaultDescriptor> faults;
  for (FaultClass c : normalized_classes(universe.classes)) append_class(c, universe, faults);
  return faults;
}

std::string describe_test(const CampaignTest& test) {
  return std::visit(Overloaded{
                        [](const MarchTest& t) { return "march " + format_march(t); },
                        [](const Schedule& s) {
                          std::string text = "prt";
                          for (std::size_t i = 0; i < s.size(); ++i) text += (i ? " ; " : " ") + describe_config(s[i]);
                          return text;
                        },
                    },
                    test);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::size_t CoverageReport::detected() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CoverageRow& r) { return r.detected; }));
}

double CoverageReport::coverage() const noexcept {
  return rows.empty() ? 1.0 : static_cast<double>(detected()) / static_cast<double>(rows.size());
}

double CoverageReport::min_class_coverage() const noexcept {
  double lowest = 1.0;
  for (const auto& s : summary) lowest = std::min(lowest, s.coverage());
  return lowest;
}

CoverageReport run_campaign(const CampaignTest& test, const FaultUniverse& universe, CampaignOptions options) {
  const auto started = std::chrono::steady_clock::now();
  universe.validate();
  check_geometry(test, universe.geometry);
  const auto faults = enumerate_faults(universe);

  CoverageReport report;
  report.test_kind = std::holds_alternative<MarchTest>(test) ? "march" : "prt";
  report.test_description = describe_test(test);
  report.classes = normalized_classes(universe.classes);
  report.geometry = universe.geometry;
  report.pair_window = universe.pair_window();

  std::ostringstream universe_text;
  universe_text << "n=" << universe.geometry.cells << " m=" << universe.geometry.width
                << " ports=" << universe.geometry.ports << " window=" << report.pair_window << " classes=";
  for (FaultClass c : report.classes) universe_text << fault_class_name(c) << ',';
  report.config_hash = fnv1a_hex(report.test_description + "|" + universe_text.str());

  {
    Memory reference(universe.geometry);
    const Outcome o = execute(test, reference, false);
    report.reference_pass = o.pass;
    report.reference_stats = o.stats;
  }

  report.rows.resize(faults.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < faults.size(); i = next++) {
      Memory mem(universe.geometry);
      mem.inject_fault(faults[i]);
      const Outcome o = execute(test, mem, true);
      report.rows[i] = {i, fault_class(faults[i]), describe_fault(faults[i]), !o.pass, o.failed_at};
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(faults.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (FaultClass c : report.classes) report.summary.push_back({c, 0, 0});
  for (const auto& row : report.rows) {
    auto it = std::find_if(report.summary.begin(), report.summary.end(),
                           [&](const ClassSummary& s) { return s.fault_class == row.fault_class; });
    ++it->total;
    if (row.detected) ++it->detected;
  }

  report.timestamp = utc_timestamp();
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return report;
}

double ClassDelta::delta() const noexcept {
  if (total == 0) return 0.0;
  return (static_cast<double>(detected_b) - static_cast<double>(detected_a)) / static_cast<double>(total);
}

bool ReportDiff::is_zero() const noexcept {
  return only_a.empty() && only_b.empty() &&
         std::all_of(classes.begin(), classes.end(), [](const ClassDelta& d) { return d.detected_a == d.detected_b; });
}

ReportDiff compare_reports(const CoverageReport& a, const CoverageReport& b) {
  if (a.geometry != b.geometry || a.rows.size() != b.rows.size()) {
    throw Error(Errc::UniverseMismatch, "reports cover different fault universes");
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& ra = a.rows[i];
    const auto& rb = b.rows[i];
    if (ra.fault_id != rb.fault_id || ra.fault_class != rb.fault_class || ra.params != rb.params) {
      throw Error(Errc::UniverseMismatch, "reports disagree on fault " + std::to_string(ra.fault_id));
    }
  }

  ReportDiff diff;
  for (const auto& s : a.summary) diff.classes.push_back({s.fault_class, 0, 0, 0});
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& ra = a.rows[i];
    const auto& rb = b.rows[i];
    auto it = std::find_if(diff.classes.begin(), diff.classes.end(),
                           [&](const ClassDelta& d) { return d.fault_class == ra.fault_class; });
    if (it == diff.classes.end()) it = diff.classes.insert(diff.classes.end(), {ra.fault_class, 0, 0, 0});
    ++it->total;
    it->detected_a += ra.detected ? 1 : 0;
    it->detected_b += rb.detected ? 1 : 0;
    if (ra.detected && !rb.detected) diff.only_a.push_back(ra.fault_id);
    if (rb.detected && !ra.detected) diff.only_b.push_back(ra.fault_id);
  }
  return diff;
}

std::string format_diff(const ReportDiff& diff) {
  std::ostringstream out;
  out << std::left << std::setw(20) << "class" << std::right << std::setw(8) << "total" << std::setw(10) << "det(a)"
      << std::setw(10) << "det(b)" << std::setw(10) << "delta" << '\n';
  for (const auto& d : diff.classes) {
    out << std::left << std::setw(20) << fault_class_name(d.fault_class) << std::right << std::setw(8) << d.total
        << std::setw(10) << d.detected_a << std::setw(10) << d.detected_b << std::setw(10) << std::showpos
        << std::fixed << std::setprecision(4) << d.delta() << std::noshowpos << '\n';
  }
  auto ids = [&](const char* label, const std::vector<std::size_t>& v) {
    out << label << " (" << v.size() << "):";
    for (std::size_t id : v) out << ' ' << id;
    out << '\n';
  };
  ids("only a", diff.only_a);
  ids("only b", diff.only_b);
  return out.str();
}

TdbSearchResult search_tdb(const Schedule& base, const FaultUniverse& universe, TdbSearchOptions options) {
  TdbSearchResult best{base, run_campaign(base, universe, options.campaign), 0};
  std::mt19937_64 rng(options.seed);

  for (std::size_t trial = 1; trial < options.trials; ++trial) {
    Schedule candidate = base;
    for (auto& cfg : candidate) {
      const FieldSpec& field = cfg.field();
      const std::size_t k = cfg.stages();
      if (options.vary_taps && cfg.lane_mode.kind == LaneKind::WholeWord) {
        std::vector<Element> taps(k);
        for (auto& t : taps) t = static_cast<Element>(rng() & field.mask());
        while (taps.front() == 0) taps.front() = static_cast<Element>(rng() & field.mask());
        cfg.lfsr = LfsrDef(field, std::move(taps));
      }
      if (cfg.lane_mode.kind == LaneKind::Random) {
        cfg.lane_mode.seed = rng();
      } else {
        const Element limit = cfg.lane_mode.kind == LaneKind::Parallel ? 1 : field.mask();
        do {
          for (auto& s : cfg.init.stages) s = static_cast<Element>(rng() & limit);
        } while (cfg.init.is_zero());
      }
      cfg.compare = CompareMode::Oracle;
    }
    CoverageReport report = run_campaign(candidate, universe, options.campaign);
    if (report.detected() > best.report.detected()) best = {std::move(candidate), std::move(report), trial};
  }
  return best;
}

}  // namespace prt
