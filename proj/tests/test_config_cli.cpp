#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "speclab/config.hpp"
#include "speclab/report_io.hpp"

using namespace speclab;
namespace fs = std::filesystem;

namespace {

const char* kDiskConfig =
    "# disk run\n"
    "[domain]\n"
    "preset = \"disk\"\n"
    "radius = 1.0\n"
    "[mesh]\n"
    "levels = [2, 3]\n"
    "order = 2\n"
    "[solver]\n"
    "k_max = 3\n"
    "tol = 1e-9\n"
    "[checks]\n"
    "slack = 0.02\n"
    "[output]\n"
    "dir = \"out\"\n";

fs::path tmp_dir() {
  const fs::path p = SPECLAB_TEST_TMP;
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  const fs::path log = tmp_dir() / "cli_output.txt";
  const std::string cmd = std::string(SPECLAB_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (output != nullptr) {
    std::ifstream f(log);
    std::ostringstream ss;
    ss << f.rdbuf();
    *output = ss.str();
  }
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("config parsing: happy path") {
  const RunConfig cfg = parse_config_text(kDiskConfig);
  CHECK(cfg.preset == "disk");
  CHECK(cfg.levels == std::vector<int>{2, 3});
  CHECK(cfg.k_max == 3);
  CHECK(cfg.slack == 0.02);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.fingerprint().size() == 16);
  CHECK(cfg.make_domain().name.rfind("disk", 0) == 0);
}

TEST_CASE("config parsing: strict schema") {
  CHECK_THROWS_WITH_AS(parse_config_text("[domain]\npreset = \"disk\"\nfoo = 1\n"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[nope]\nx = 1\n"),
                       doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[domain]\npreset = \"dodecagon\"\n"),
                       doctest::Contains("unknown domain preset"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config_text("[domain]\npreset = \"disk\"\nwidth = 2\n"),
      doctest::Contains("does not apply"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[mesh]\nlevels = [1]\nlevels = [2]\n"),
                       doctest::Contains("duplicate"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[mesh]\norder = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[domain]\npreset = \"disk\"\nradius = -2\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("key_outside = 1\n"), ConfigError);
}

TEST_CASE("config parsing: values and lists") {
  const RunConfig cfg = parse_config_text(
      "[domain]\npreset = \"polygon\"\n"
      "vertices = [0,0, 1,0, 1,1, 0,1]\nbase_point = [0.5, 0.5]\n");
  CHECK(cfg.vertices.size() == 8);
  CHECK(cfg.base_point_set);
  const Domain d = cfg.make_domain();
  CHECK(d.boundary.vertices.size() == 4);
  CHECK(d.base_point.x() == 0.5);
}

TEST_CASE("cli: constants command reproduces the flat-case values") {
  std::string out;
  const int rc = run_cli("constants --n 2 --kappa1 0 --kappa2 0 --rmax 1", &out);
  CHECK(rc == 0);
  CHECK(out.find("C0 = 2") != std::string::npos);
  CHECK(out.find("C1 = 2") != std::string::npos);
  CHECK(out.find("C2 = 0") != std::string::npos);
  CHECK(out.find("C3 = 2") != std::string::npos);

  const int rc3 = run_cli("constants --n 3 --kappa1 0 --kappa2 0 --rmax 1 --json", &out);
  CHECK(rc3 == 0);
  CHECK(out.find("\"C2\": 1.0") != std::string::npos);
}

TEST_CASE("cli: invalid input exits with the usage code") {
  std::string out;
  CHECK(run_cli("constants --n 1", &out) == 2);
  CHECK(run_cli("nonsense-command", &out) == 2);

  const fs::path cfg = tmp_dir() / "bad.cfg";
  std::ofstream(cfg) << "[domain]\npreset = \"dodecagon\"\n";
  CHECK(run_cli("check-inequalities --config " + cfg.string(), &out) == 2);
}

TEST_CASE("cli: check-inequalities on the disk exits 0 and writes reports") {
  const fs::path cfg = tmp_dir() / "disk.cfg";
  std::ofstream(cfg) << kDiskConfig;
  const fs::path out_dir = tmp_dir() / "run1";
  std::string out;
  const int rc = run_cli("check-inequalities --config " + cfg.string() + " --levels 2 --out " +
                             out_dir.string(),
                         &out);
  CHECK(rc == 0);
  CHECK(fs::exists(out_dir / "inequalities.json"));
  CHECK(fs::exists(out_dir / "inequalities.csv"));
  CHECK(out.find("0 failed") != std::string::npos);
}

TEST_CASE("cli: fault injection flips the exit code and names the check") {
  const fs::path cfg = tmp_dir() / "disk2.cfg";
  std::ofstream(cfg) << kDiskConfig;
  const fs::path out_dir = tmp_dir() / "run_fault";
  std::string out;
  const int rc = run_cli("check-inequalities --config " + cfg.string() +
                             " --levels 2 --fault-inject corrupt-spectrum --out " +
                             out_dir.string(),
                         &out);
  CHECK(rc == 1);
  CHECK(out.find("FAIL") != std::string::npos);
}

TEST_CASE("cli: spectra writes one table per problem") {
  const fs::path cfg = tmp_dir() / "disk3.cfg";
  std::ofstream(cfg) << kDiskConfig;
  const fs::path out_dir = tmp_dir() / "run_spectra";
  std::string out;
  const int rc =
      run_cli("spectra --config " + cfg.string() + " --levels 2 --out " + out_dir.string(),
              &out);
  CHECK(rc == 0);
  int csv_count = 0;
  for (const auto& e : fs::directory_iterator(out_dir)) {
    if (e.path().extension() == ".csv") ++csv_count;
  }
  CHECK(csv_count == 7);
  CHECK(fs::exists(out_dir / "spectra_summary.json"));
  // the CSV embeds the config fingerprint and tool version
  std::ifstream f(out_dir / "spectra_dirichlet.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header.find("config_fingerprint") != std::string::npos);
  CHECK(header.find("version") != std::string::npos);
}

TEST_CASE("cli: convergence emits Richardson orders with enough levels") {
  const fs::path out_dir = tmp_dir() / "run_conv";
  std::string out;
  const int rc = run_cli("convergence --levels 1 2 3 --out " + out_dir.string() +
                             " --problem dirichlet",
                         &out);
  CHECK(rc == 0);
  std::ifstream f(out_dir / "convergence_dirichlet.csv");
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text.find("richardson_order") != std::string::npos);

  // single level: order column empty, still exits cleanly
  const int rc1 = run_cli("convergence --levels 2 --out " + out_dir.string() +
                              " --problem neumann",
                          &out);
  CHECK(rc1 == 0);
}

TEST_CASE("report serialization conventions") {
  CHECK(format_sig17(1.0) == "1");
  CHECK(format_sig17(M_PI).size() >= 17);
  CHECK(fnv1a_hex("abc") != fnv1a_hex("abd"));
  CsvWriter csv({"a", "b"});
  csv.add_row({"x,y", "plain"});
  CHECK(csv.str().find("\"x,y\"") != std::string::npos);
  CHECK_THROWS_AS(csv.add_row({"only-one"}), Error);
}
