#include "entbroadcast/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace entbroadcast;
using cli::OutputFormat;
using cli::RunConfig;

namespace fs = std::filesystem;

namespace {

struct CaptureStdout {
  std::ostringstream buffer;
  std::streambuf* saved = nullptr;

  CaptureStdout() { saved = std::cout.rdbuf(buffer.rdbuf()); }
  ~CaptureStdout() { std::cout.rdbuf(saved); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / (std::string("entbroadcast_test_") + tag);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("state command prints the reference quantities") {
  RunConfig cfg;
  cfg.command = "state";
  cfg.p = 1.0;
  cfg.alpha2 = 0.5;
  CaptureStdout cap;
  CHECK(cli::run(cfg) == 0);
  const std::string out = cap.buffer.str();
  CHECK(out.find("teleportation fidelity: 1 ") != std::string::npos);
  CHECK(out.find("dense coding capacity (unclamped): 2") != std::string::npos);
  CHECK(out.find("inseparable: yes") != std::string::npos);
}

TEST_CASE("state command on a separable bell-diagonal point") {
  RunConfig cfg;
  cfg.command = "state";
  cfg.family = broadcast::Family::belldiag;
  cfg.c = {0, 0, 0};
  CaptureStdout cap;
  CHECK(cli::run(cfg) == 0);
  const std::string out = cap.buffer.str();
  CHECK(out.find("teleportation fidelity: 0.5") != std::string::npos);
  CHECK(out.find("inseparable: no") != std::string::npos);
}

TEST_CASE("out-of-range parameters exit with code 2") {
  RunConfig cfg;
  cfg.command = "state";
  cfg.p = 1.2;
  cfg.alpha2 = 0.5;
  CaptureStdout cap;
  CHECK(cli::run(cfg) == 2);

  cfg.command = "report";
  cfg.p = 0.9;
  cfg.cloner = cloners::Kind::local;
  cfg.n_copies = 4;
  CHECK(cli::run(cfg) == 2);
}

TEST_CASE("range command emits CSV with the published endpoints") {
  const fs::path dir = temp_dir("range");
  RunConfig cfg;
  cfg.command = "range";
  cfg.alpha2 = 0.4;
  cfg.cloner = cloners::Kind::local;
  cfg.grid = 400;
  cfg.out = (dir / "range.csv").string();
  CaptureStdout cap;
  REQUIRE(cli::run(cfg) == 0);
  CHECK(cap.buffer.str().find("analytic") != std::string::npos);

  const std::string csv = slurp(cfg.out);
  CHECK(csv.rfind("family,cloner,n_copies,swept,range_lo,range_hi", 0) == 0);
  CHECK(csv.find("0.76") != std::string::npos);
}

TEST_CASE("scatter output is deterministic and json mirrors csv fields") {
  const fs::path dir = temp_dir("scatter");
  RunConfig cfg;
  cfg.command = "scatter";
  cfg.samples = 50;
  cfg.seed = 42;
  cfg.out = (dir / "a.csv").string();
  REQUIRE(cli::run(cfg) == 0);
  cfg.out = (dir / "b.csv").string();
  REQUIRE(cli::run(cfg) == 0);
  const std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a.rfind("purity,sum_tf,sum_dc", 0) == 0);

  cfg.format = OutputFormat::json;
  cfg.out = (dir / "a.json").string();
  REQUIRE(cli::run(cfg) == 0);
  const std::string j = slurp(dir / "a.json");
  CHECK(j.find("\"purity\"") != std::string::npos);
  CHECK(j.find("\"sum_tf\"") != std::string::npos);
  CHECK(j.find("\"sum_dc\"") != std::string::npos);
}

TEST_CASE("scatter emit-plot writes a gnuplot script next to the csv") {
  const fs::path dir = temp_dir("plot");
  RunConfig cfg;
  cfg.command = "scatter";
  cfg.samples = 10;
  cfg.out = (dir / "cloud.csv").string();
  cfg.emit_plot = true;
  REQUIRE(cli::run(cfg) == 0);
  const std::string script = slurp(dir / "cloud.gp");
  CHECK(script.find("cloud.csv") != std::string::npos);  // relative reference
  CHECK(script.find("plot") != std::string::npos);
  CHECK(script.find(dir.string()) == std::string::npos);
}

TEST_CASE("tables command writes the mandated schema") {
  const fs::path dir = temp_dir("tables");
  RunConfig cfg;
  cfg.command = "tables";
  cfg.tables = {"5"};
  cfg.grid = 200;
  cfg.out = dir.string();
  CaptureStdout cap;
  REQUIRE(cli::run(cfg) == 0);
  const std::string csv = slurp(dir / "table5.csv");
  CHECK(csv.rfind("family,fixed_param_name,fixed_param_value,n_copies,cloner,"
                  "range_lo,range_hi,paper_range_lo,paper_range_hi,"
                  "sum_tf_max,sum_dc_max,paper_sum_tf,paper_sum_dc,dc_variant",
                  0) == 0);
  CHECK(csv.find("belldiag") != std::string::npos);
  CHECK(slurp(dir / "calibration.csv").find("fb2") != std::string::npos);

  cfg.tables = {"nope"};
  CHECK(cli::run(cfg) == 2);
}

TEST_CASE("table output is independent of the worker count") {
  const fs::path dir = temp_dir("threads");
  RunConfig cfg;
  cfg.command = "tables";
  cfg.tables = {"6"};
  cfg.grid = 150;

  setenv("ENTBROADCAST_THREADS", "1", 1);
  cfg.out = (dir / "serial").string();
  {
    CaptureStdout cap;
    REQUIRE(cli::run(cfg) == 0);
  }
  setenv("ENTBROADCAST_THREADS", "4", 1);
  cfg.out = (dir / "parallel").string();
  {
    CaptureStdout cap;
    REQUIRE(cli::run(cfg) == 0);
  }
  unsetenv("ENTBROADCAST_THREADS");
  const std::string serial = slurp(dir / "serial" / "table6.csv");
  CHECK_FALSE(serial.empty());
  CHECK(serial == slurp(dir / "parallel" / "table6.csv"));
}

TEST_CASE("NA cells appear for empty broadcast ranges") {
  const fs::path dir = temp_dir("na");
  RunConfig cfg;
  cfg.command = "range";
  cfg.family = broadcast::Family::werner;
  cfg.alpha2 = 0.2;
  cfg.cloner = cloners::Kind::nonlocal;
  cfg.n_copies = 5;
  cfg.grid = 300;
  cfg.out = (dir / "na.csv").string();
  CaptureStdout cap;
  REQUIRE(cli::run(cfg) == 0);
  CHECK(cap.buffer.str().find("NA") != std::string::npos);
  CHECK(slurp(cfg.out).find("NA") != std::string::npos);
}
