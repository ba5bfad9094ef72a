#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "prt/campaign.hpp"
#include "prt/galois.hpp"
#include "prt/io.hpp"
#include "prt/lfsr.hpp"
#include "prt/march.hpp"
#include "prt/xor_network.hpp"

namespace prt::cli {

namespace {

std::vector<Element> parse_list(const std::string& text) {
  std::vector<Element> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    out.push_back(static_cast<Element>(parse_unsigned(item)));
  }
  return out;
}

std::string join(const std::vector<Element>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

struct FieldArgs {
  unsigned m = 1;
  std::string poly;

  FieldSpec build() const {
    if (poly.empty()) {
      if (m == 1) return FieldSpec::binary();
      throw Error(Errc::InvalidArgument, "--poly is required when --m > 1");
    }
    return FieldSpec(m, static_cast<Poly>(parse_unsigned(poly)));
  }
};

void add_field_options(CLI::App* cmd, FieldArgs& f) {
  cmd->add_option("--m", f.m, "Word width in bits")->check(CLI::Range(1, 16));
  cmd->add_option("--poly", f.poly, "Reduction polynomial as a bitmask, e.g. 0x13");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw Error(Errc::InvalidArgument, "cannot write " + path);
  file << text;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-ring testing laboratory: GF(2^m) tools, March and PRT runs, fault-coverage campaigns",
               "prtlab"};
  app.require_subcommand(1);
  int status = kExitOk;

  // field
  auto* field_cmd = app.add_subcommand("field", "Inspect GF(2^m) fields");
  field_cmd->require_subcommand(1);
  FieldArgs field_args;
  auto* field_info = field_cmd->add_subcommand("info", "Describe a field");
  add_field_options(field_info, field_args);
  field_info->callback([&] {
    const FieldSpec f = field_args.build();
    out << "GF(2^" << f.width() << ") modulo 0x" << std::hex << f.modulus() << std::dec << ", " << f.size()
        << " elements\n";
  });
  auto* mul_table = field_cmd->add_subcommand("mul-table", "Print the multiplication table");
  add_field_options(mul_table, field_args);
  mul_table->callback([&] {
    const FieldSpec f = field_args.build();
    if (f.width() > 8) throw Error(Errc::InvalidArgument, "mul-table is limited to m <= 8");
    const int w = static_cast<int>((f.width() + 3) / 4);
    out << std::hex;
    for (Element a = 0; a < f.size(); ++a) {
      for (Element b = 0; b < f.size(); ++b) out << (b ? " " : "") << std::setw(w) << std::setfill('0') << gf_mul(f, a, b);
      out << '\n';
    }
    out << std::dec << std::setfill(' ');
  });
  std::string irr_poly;
  auto* irreducible = field_cmd->add_subcommand("irreducible", "Test a GF(2) polynomial for irreducibility");
  irreducible->add_option("--poly", irr_poly, "Polynomial bitmask")->required();
  irreducible->callback([&] {
    const bool irr = poly_is_irreducible(static_cast<Poly>(parse_unsigned(irr_poly)));
    out << (irr ? "irreducible" : "reducible") << '\n';
    if (!irr) status = kExitFail;
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize an XOR-only constant multiplier");
  FieldArgs synth_field;
  std::string constant;
  std::string synth_out;
  add_field_options(synth, synth_field);
  synth->add_option("--const", constant, "Constant multiplier c")->required();
  synth->add_option("--out", synth_out, "Write the netlist to a file instead of stdout");
  synth->callback([&] {
    const FieldSpec f = synth_field.build();
    const Element c = static_cast<Element>(parse_unsigned(constant));
    const XorNetwork net = synthesize_multiplier(f, c);
    std::ostringstream text;
    text << "# c=" << c << " m=" << f.width() << " gates=" << net.gate_count()
         << " naive=" << naive_gate_count(mul_by_const_matrix(f, c)) << '\n'
         << to_netlist(net);
    if (synth_out.empty()) {
      out << text.str();
    } else {
      write_text(synth_out, text.str());
    }
  });

  // lfsr
  auto* lfsr_cmd = app.add_subcommand("lfsr", "Virtual LFSR model");
  lfsr_cmd->require_subcommand(1);
  FieldArgs lfsr_field;
  std::string taps_text;
  std::string generator_text;
  std::string init_text;
  std::size_t cells = 0;
  auto lfsr_options = [&](CLI::App* cmd) {
    add_field_options(cmd, lfsr_field);
    auto* t = cmd->add_option("--taps", taps_text, "Normalized taps, comma separated");
    auto* g = cmd->add_option("--generator", generator_text, "Generator coefficients a_0..a_k");
    t->excludes(g);
    cmd->add_option("--init", init_text, "Initial state, comma separated")->required();
  };
  auto build_lfsr = [&] {
    const FieldSpec f = lfsr_field.build();
    if (!taps_text.empty()) return LfsrDef(f, parse_list(taps_text));
    if (!generator_text.empty()) return lfsr_from_generator(f, parse_list(generator_text));
    throw Error(Errc::InvalidArgument, "give --taps or --generator");
  };
  auto* period = lfsr_cmd->add_subcommand("period", "Orbit length of an initial state");
  lfsr_options(period);
  period->callback([&] {
    const LfsrDef def = build_lfsr();
    out << "taps " << join(def.taps()) << " period " << lfsr_period(def, {parse_list(init_text)}) << '\n';
  });
  auto* final_cmd = lfsr_cmd->add_subcommand("expected-final", "Predicted final state after n cells");
  lfsr_options(final_cmd);
  final_cmd->add_option("--n", cells, "Cell count")->required();
  final_cmd->callback([&] {
    const LfsrDef def = build_lfsr();
    out << join(expected_final(def, {parse_list(init_text)}, cells).stages) << '\n';
  });

  // run-march
  auto* run_march = app.add_subcommand("run-march", "Run a March test on a fault-free memory");
  MemoryConfig march_mem{0, 1, 1};
  std::string march_text = format_march(march_a());
  bool trace = false;
  run_march->add_option("--n", march_mem.cells, "Cell count")->required();
  run_march->add_option("--m", march_mem.width, "Bits per cell")->check(CLI::Range(1, 16));
  run_march->add_option("--test", march_text, "March test, e.g. \"{a(w0); u(r0,w1); d(r1,w0)}\"");
  run_march->add_flag("--trace", trace, "Report every mismatch instead of stopping at the first");
  run_march->callback([&] {
    Memory mem(march_mem);
    const MarchTest test = parse_march(march_text);
    const MarchVerdict v = execute_march(test, mem, {.full_trace = trace});
    out << format_march(test) << ": " << (v.pass ? "pass" : "FAIL") << " (reads " << v.stats.reads << ", writes "
        << v.stats.writes << ")\n";
    for (const auto& f : v.failures) {
      out << "  element " << f.element << " op " << f.op << " address " << f.address << ": read " << f.read
          << " expected " << f.expected << '\n';
    }
    if (!v.pass) status = kExitFail;
  });

  // run-prt
  auto* run_prt = app.add_subcommand("run-prt", "Run a PRT schedule on a fault-free memory");
  std::string prt_config;
  std::string prt_out;
  bool run_all = false;
  run_prt->add_option("--config", prt_config, "Campaign config (JSON)")->required();
  run_prt->add_option("--out", prt_out, "Write the JSON verdict to a file");
  run_prt->add_flag("--all", run_all, "Keep running after a failing iteration");
  run_prt->callback([&] {
    const CampaignConfig cfg = load_config(prt_config);
    Memory mem(cfg.memory);
    const ScheduleVerdict v = run_prt_schedule(cfg.schedule, mem, {.stop_on_fail = !run_all});
    const std::string text = schedule_verdict_to_json(v).dump(2) + "\n";
    if (prt_out.empty()) {
      out << text;
    } else {
      write_text(prt_out, text);
      out << (v.pass ? "pass" : "FAIL") << '\n';
    }
    if (!v.pass) status = kExitFail;
  });

  // campaign
  auto* campaign = app.add_subcommand("campaign", "Single-fault coverage campaign");
  std::string camp_config;
  std::string camp_out;
  std::string camp_csv;
  std::string camp_march;
  std::size_t camp_iterations = 0;
  double min_coverage = 0.0;
  unsigned threads = 0;
  campaign->add_option("--config", camp_config, "Campaign config (JSON) with a universe section")->required();
  campaign->add_option("--out", camp_out, "JSON report path");
  campaign->add_option("--csv", camp_csv, "CSV report path");
  campaign->add_option("--march", camp_march, "Evaluate this March test instead of the PRT schedule");
  campaign->add_option("--iterations", camp_iterations, "Use only the first N schedule iterations");
  campaign->add_option("--min-coverage", min_coverage, "Exit 1 if any class falls below this ratio")
      ->check(CLI::Range(0.0, 1.0));
  campaign->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  campaign->callback([&] {
    const CampaignConfig cfg = load_config(camp_config);
    if (!cfg.universe) throw Error(Errc::InvalidConfig, "config has no universe section");
    Schedule schedule = cfg.schedule;
    if (camp_iterations > 0 && camp_iterations < schedule.size()) schedule.erase(schedule.begin() + static_cast<std::ptrdiff_t>(camp_iterations), schedule.end());
    const CampaignTest test = camp_march.empty() ? CampaignTest{schedule} : CampaignTest{parse_march(camp_march)};
    const CoverageReport report = run_campaign(test, *cfg.universe, {threads});
    if (!camp_out.empty()) write_text(camp_out, report_to_json(report).dump(2) + "\n");
    if (!camp_csv.empty()) write_text(camp_csv, report_to_csv(report));
    out << report.test_description << '\n';
    for (const auto& s : report.summary) {
      out << "  " << std::left << std::setw(20) << fault_class_name(s.fault_class) << std::right << s.detected
          << "/" << s.total << "  " << std::fixed << std::setprecision(4) << s.coverage() << '\n';
    }
    out << "  overall " << report.detected() << "/" << report.rows.size() << '\n';
    if (report.min_class_coverage() < min_coverage) status = kExitFail;
  });

  // compare
  auto* compare = app.add_subcommand("compare", "Diff two coverage reports");
  std::string report_a;
  std::string report_b;
  compare->add_option("a", report_a, "Baseline report (JSON)")->required();
  compare->add_option("b", report_b, "Other report (JSON)")->required();
  compare->callback([&] { out << format_diff(compare_reports(load_report(report_a), load_report(report_b))); });

  // tdb-search
  auto* tdb = app.add_subcommand("tdb-search", "Search iteration seeds (and taps) for the best coverage");
  std::string tdb_config;
  std::string tdb_out;
  TdbSearchOptions tdb_options;
  tdb->add_option("--config", tdb_config, "Campaign config (JSON) with a universe section")->required();
  tdb->add_option("--trials", tdb_options.trials, "Candidates to evaluate, including the input schedule");
  tdb->add_option("--seed", tdb_options.seed, "Search seed (std::mt19937_64)");
  tdb->add_flag("--vary-taps", tdb_options.vary_taps, "Also randomize whole-word taps");
  tdb->add_option("--threads", tdb_options.campaign.threads, "Worker threads (0 = hardware concurrency)");
  tdb->add_option("--out", tdb_out, "JSON report of the best schedule");
  tdb->callback([&] {
    const CampaignConfig cfg = load_config(tdb_config);
    if (!cfg.universe) throw Error(Errc::InvalidConfig, "config has no universe section");
    const TdbSearchResult best = search_tdb(cfg.schedule, *cfg.universe, tdb_options);
    out << "best trial " << best.best_trial << ": " << best.report.detected() << "/" << best.report.rows.size()
        << " detected\n";
    for (std::size_t i = 0; i < best.schedule.size(); ++i) {
      out << "  iteration " << i << ": taps " << join(best.schedule[i].lfsr.taps()) << " init "
          << join(best.schedule[i].init.stages) << '\n';
    }
    if (!tdb_out.empty()) write_text(tdb_out, report_to_json(best.report).dump(2) + "\n");
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "prtlab: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "prtlab: " << e.what() << '\n';
    return kExitUsage;
  }
  return status;
}

}  // namespace prt::cli
