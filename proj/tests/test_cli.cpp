// End-to-end checks of the command-line tool: exit codes, report files,
// reproducibility from recorded manifests, and output formats.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;

// Scratch directory removed when the test finishes.
struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("dpsqm_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Runs the installed tool through the shell; `args` may carry redirections.
int run_cli(const std::string& args) {
  const std::string command = std::string("\"") + DPSQM_CLI_PATH + "\" " + args;
  const int raw = std::system(command.c_str());
  REQUIRE(raw != -1);
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  REQUIRE(bool(is));
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream is(path);
  REQUIRE(bool(is));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("operator checks pass with default settings") {
  TempDir dir("ops");
  const fs::path out = dir.path / "out";
  CHECK(run_cli("ops-check --out " + out.string()) == 0);

  for (const char* name :
       {"operator_delta.txt", "operator_delta_prime.txt",
        "operator_delta_circ.txt", "operator_delta_sharp.txt", "report.json",
        "report.txt", "manifest.txt"}) {
    CAPTURE(name);
    CHECK(fs::exists(out / name));
  }

  const nlohmann::json report = nlohmann::json::parse(slurp(out / "report.json"));
  REQUIRE(report.is_array());
  CHECK(report.size() >= 6);
  for (const auto& entry : report) {
    CAPTURE(entry["test"].get<std::string>());
    CHECK(entry["pass"].get<bool>());
  }

  // The manifest opens with the subcommand and closes with the timestamp.
  const std::string manifest = slurp(out / "manifest.txt");
  CHECK(manifest.rfind("subcommand = ops-check", 0) == 0);
  CHECK(manifest.find("\ntimestamp = ") != std::string::npos);
}

TEST_CASE("a basis too small for the stencils is a usage error") {
  TempDir dir("tiny");
  const fs::path err = dir.path / "stderr.txt";
  CHECK(run_cli("ops-check --nmax 1 --out " + (dir.path / "out").string() +
                " 2> " + err.string()) == 2);
  CHECK(slurp(err).find("usage error") != std::string::npos);
}

TEST_CASE("an unstable time step reports the stability limit") {
  TempDir dir("unstable");
  const fs::path err = dir.path / "stderr.txt";
  CHECK(run_cli("kg --dt 10 --out " + (dir.path / "out").string() + " 2> " +
                err.string()) == 3);
  const std::string message = slurp(err);
  CHECK(message.find("stability error") != std::string::npos);
  CHECK(message.find("suggested dt") != std::string::npos);
}

TEST_CASE("a four-axis request beyond the memory budget is refused") {
  TempDir dir("budget");
  const fs::path err = dir.path / "stderr.txt";
  CHECK(run_cli("poincare --nmax 20 --out " + (dir.path / "out").string() +
                " 2> " + err.string()) == 4);
  const std::string message = slurp(err);
  CHECK(message.find("memory budget error") != std::string::npos);
  // 2 * 21^8 * 8 bytes for the dense stages.
  CHECK(message.find("605165749776") != std::string::npos);
}

TEST_CASE("an empty level list is rejected") {
  TempDir dir("levels");
  CHECK(run_cli("geometry --nlist \"\" --out " +
                (dir.path / "out").string() + " 2> /dev/null") == 2);
}

TEST_CASE("unknown configuration keys are rejected") {
  TempDir dir("badkey");
  const fs::path config = dir.path / "config.txt";
  {
    std::ofstream os(config);
    os << "nmax = 8\n"
       << "bogus = 1\n";
  }
  const fs::path err = dir.path / "stderr.txt";
  CHECK(run_cli("ops-check --config " + config.string() + " --out " +
                (dir.path / "out").string() + " 2> " + err.string()) == 2);
  CHECK(slurp(err).find("unknown configuration key") != std::string::npos);
}

TEST_CASE("recorded manifests reproduce identical outputs") {
  TempDir dir("repro");
  const fs::path first = dir.path / "first";
  const fs::path second = dir.path / "second";
  CHECK(run_cli("kg --nmax 4 --steps 100 --stride 10 --out " +
                first.string()) == 0);
  CHECK(run_cli("kg --config " + (first / "manifest.txt").string() +
                " --out " + second.string()) == 0);
  CHECK(slurp(first / "trajectory.csv") == slurp(second / "trajectory.csv"));
  CHECK(slurp(first / "energy.csv") == slurp(second / "energy.csv"));
}

TEST_CASE("explicit units rescale the reported spectrum") {
  TempDir dir("units");
  const fs::path out = dir.path / "out";
  CHECK(run_cli("oscillator --nmax 8 --units explicit --hbar 2 --nu 3 --out " +
                out.string()) == 0);
  const auto rows = read_csv(out / "spectrum.csv");
  REQUIRE(rows.size() >= 2);
  REQUIRE(rows[0].size() >= 2);
  CHECK(rows[0][0] == "N");
  CHECK(rows[0][1] == "e_discrete");
  // E_0 = (0 + 1/2) hbar nu = 3 in these units.
  CHECK(std::abs(std::strtod(rows[1][1].c_str(), nullptr) - 3.0) <= 1e-9);
}

TEST_CASE("orbit radii follow the odd square-root law") {
  TempDir dir("radii");
  const fs::path out = dir.path / "out";
  CHECK(run_cli("geometry --out " + out.string()) == 0);
  const auto rows = read_csv(out / "radii.csv");
  REQUIRE(rows.size() == 6);  // header + default levels 0..4
  for (int n = 0; n < 5; ++n) {
    const double radius =
        std::strtod(rows[std::size_t(n) + 1][1].c_str(), nullptr);
    CHECK(std::abs(radius - std::sqrt(2.0 * n + 1.0)) <= 1e-12);
  }
}

TEST_CASE("json output parses as structured records") {
  TempDir dir("json");
  const fs::path out = dir.path / "out";
  CHECK(run_cli("geometry --format json --out " + out.string()) == 0);
  const nlohmann::json radii = nlohmann::json::parse(slurp(out / "radii.json"));
  REQUIRE(radii.is_array());
  REQUIRE(radii.size() == 5);
  CHECK(radii[0]["N"].is_number_integer());
  CHECK(radii[0]["radius"].is_number());
  const nlohmann::json report =
      nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report.is_array());
}

TEST_CASE("help succeeds, bad invocations exit with the usage code") {
  CHECK(run_cli("--help > /dev/null") == 0);
  CHECK(run_cli("2> /dev/null") == 2);
  CHECK(run_cli("frobnicate 2> /dev/null") == 2);
  CHECK(run_cli("ops-check --no-such-flag 2> /dev/null") == 2);
}
