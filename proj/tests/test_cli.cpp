#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "prt/io.hpp"
#include "prt/xor_network.hpp"

using namespace prt;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int status = 0;
  std::string out;
  std::string err;
};

Invocation prtlab(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(std::move(args), out, err);
  return {status, out.str(), err.str()};
}

// Scratch directory removed at scope exit.
struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("prtlab_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents = {}) const {
    const fs::path p = path / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kStuckAtConfig = R"({
  "memory": {"n": 16},
  "lfsr": {"taps": [1, 1]},
  "schedule": [{"init": [0, 1]}, {"init": [1, 0]}, {"init": [1, 1]}],
  "universe": {"classes": ["StuckAt"]}
})";

}  // namespace

TEST_CASE("cli: field mul-table matches gf_mul") {
  const Invocation r = prtlab({"field", "mul-table", "--m", "4", "--poly", "0x13"});
  REQUIRE(r.status == cli::kExitOk);
  const FieldSpec f(4, 0x13);
  std::istringstream table(r.out);
  for (Element a = 0; a < 16; ++a) {
    for (Element b = 0; b < 16; ++b) {
      std::string cell;
      table >> cell;
      REQUIRE(std::stoul(cell, nullptr, 16) == gf_mul(f, a, b));
    }
  }
  CHECK(prtlab({"field", "mul-table", "--m", "9", "--poly", "0x211"}).status == cli::kExitUsage);
}

TEST_CASE("cli: field info and irreducible") {
  CHECK(prtlab({"field", "info", "--m", "4", "--poly", "0x13"}).out.find("GF(2^4)") != std::string::npos);
  const Invocation yes = prtlab({"field", "irreducible", "--poly", "0x13"});
  CHECK(yes.status == cli::kExitOk);
  CHECK(yes.out == "irreducible\n");
  const Invocation no = prtlab({"field", "irreducible", "--poly", "0x15"});
  CHECK(no.status == cli::kExitFail);
  CHECK(no.out == "reducible\n");
  CHECK(prtlab({"field", "info", "--m", "4", "--poly", "0x15"}).status == cli::kExitUsage);
}

TEST_CASE("cli: synth writes a parseable netlist") {
  TempDir dir;
  const std::string path = dir.file("mul2.net");
  REQUIRE(prtlab({"synth", "--m", "4", "--poly", "0x13", "--const", "2", "--out", path}).status == cli::kExitOk);
  const XorNetwork net = parse_netlist(slurp(path), 4);
  CHECK(net.gate_count() == 1);
  for (Element x = 0; x < 16; ++x) CHECK(eval_xor_network(net, x) == gf_mul(FieldSpec(4, 0x13), 2, x));
  CHECK(prtlab({"synth", "--m", "4", "--poly", "0x13", "--const", "16"}).status == cli::kExitUsage);
}

TEST_CASE("cli: lfsr subcommands") {
  const Invocation p = prtlab({"lfsr", "period", "--m", "4", "--poly", "0x13", "--generator", "1,2,2", "--init", "1,2"});
  CHECK(p.status == cli::kExitOk);
  CHECK(p.out == "taps 9,1 period 255\n");
  const Invocation f = prtlab({"lfsr", "expected-final", "--taps", "1,1", "--init", "0,1", "--n", "6"});
  CHECK(f.out == "1,1\n");
  CHECK(prtlab({"lfsr", "period", "--taps", "1,1", "--init", "0,0"}).status == cli::kExitUsage);
  CHECK(prtlab({"lfsr", "period", "--taps", "1,1", "--generator", "1,1,1", "--init", "0,1"}).status ==
        cli::kExitUsage);
}

TEST_CASE("cli: run-march") {
  const Invocation ok = prtlab({"run-march", "--n", "16", "--test", "{a(w0); u(r0,w1); d(r1,w0)}"});
  CHECK(ok.status == cli::kExitOk);
  CHECK(ok.out.find("pass") != std::string::npos);
  CHECK(prtlab({"run-march", "--n", "16"}).status == cli::kExitOk);
  const Invocation bad = prtlab({"run-march", "--n", "16", "--test", "{u(x0)}"});
  CHECK(bad.status == cli::kExitUsage);
  CHECK(bad.err.find("offset 3") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(prtlab({}).status == cli::kExitUsage);
  CHECK(prtlab({"bogus"}).status == cli::kExitUsage);
  CHECK(prtlab({"run-march"}).status == cli::kExitUsage);
  CHECK(prtlab({"run-march", "--n", "2"}).status == cli::kExitUsage);
  CHECK(prtlab({"campaign", "--config", "/nonexistent.json"}).status == cli::kExitUsage);
  CHECK(prtlab({"--help"}).status == cli::kExitOk);
}

TEST_CASE("cli: run-prt") {
  TempDir dir;
  const std::string cfg = dir.file("cfg.json", kStuckAtConfig);
  const Invocation r = prtlab({"run-prt", "--config", cfg});
  CHECK(r.status == cli::kExitOk);
  const auto verdict = nlohmann::json::parse(r.out);
  CHECK(verdict["pass"] == true);
  CHECK(verdict["iterations"].size() == 3);

  const std::string out = dir.file("verdict.json");
  CHECK(prtlab({"run-prt", "--config", cfg, "--out", out}).out == "pass\n");
  CHECK(nlohmann::json::parse(slurp(out))["pass"] == true);

  const std::string lanes = dir.file("lanes.json", R"({
    "memory": {"n": 8, "m": 4},
    "field": {"poly": "0x13"},
    "lfsr": {"taps": [1, 1]},
    "schedule": [{"lane_mode": {"kind": "random_lanes", "seed": 5}, "compare": "ring"}]
  })");
  CHECK(prtlab({"run-prt", "--config", lanes}).status == cli::kExitOk);
}

TEST_CASE("cli: campaign, thresholds and compare") {
  TempDir dir;
  const std::string cfg = dir.file("cfg.json", kStuckAtConfig);
  const std::string full = dir.file("full.json");
  const std::string one = dir.file("one.json");
  const std::string csv = dir.file("one.csv");

  const Invocation all = prtlab({"campaign", "--config", cfg, "--out", full, "--min-coverage", "1.0"});
  CHECK(all.status == cli::kExitOk);
  CHECK(all.out.find("overall 32/32") != std::string::npos);

  const Invocation partial =
      prtlab({"campaign", "--config", cfg, "--iterations", "1", "--out", one, "--csv", csv, "--min-coverage", "1.0"});
  CHECK(partial.status == cli::kExitFail);
  CHECK(slurp(csv).rfind("fault_id,class,params,detected,detected_by\n", 0) == 0);
  CHECK(prtlab({"campaign", "--config", cfg, "--iterations", "1"}).status == cli::kExitOk);

  const Invocation diff = prtlab({"compare", one, full});
  CHECK(diff.status == cli::kExitOk);
  CHECK(diff.out.find("StuckAt") != std::string::npos);
  CHECK(diff.out.find("only a (0):") != std::string::npos);

  const Invocation march = prtlab({"campaign", "--config", cfg, "--march", "{a(w0); u(r0,w1); d(r1,w0)}",
                                   "--min-coverage", "1.0", "--threads", "2"});
  CHECK(march.status == cli::kExitOk);

  const std::string no_universe = dir.file("nou.json", R"({"memory": {"n": 8}, "lfsr": {"taps": [1, 1]},
    "schedule": [{"init": [0, 1]}]})");
  CHECK(prtlab({"campaign", "--config", no_universe}).status == cli::kExitUsage);
}

TEST_CASE("cli: tdb-search") {
  TempDir dir;
  const std::string cfg = dir.file("cfg.json", R"({
    "memory": {"n": 12},
    "lfsr": {"taps": [1, 1]},
    "schedule": [{"init": [0, 1]}],
    "universe": {"classes": ["StuckAt", "Transition"]}
  })");
  const std::string out = dir.file("best.json");
  const Invocation r = prtlab({"tdb-search", "--config", cfg, "--trials", "8", "--seed", "3", "--out", out});
  CHECK(r.status == cli::kExitOk);
  CHECK(r.out.find("best trial") != std::string::npos);
  CHECK(load_report(out).rows.size() == 48);
}
