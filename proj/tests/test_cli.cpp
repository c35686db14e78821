#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "d4dr/dr_classical.hpp"
#include "d4dr/expr.hpp"
#include "d4dr/jsonio.hpp"

using namespace d4dr;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// the command-line binary is built next to the test executables
fs::path cli_path() {
  return fs::read_symlink("/proc/self/exe").parent_path() / "d4dr";
}

RunResult run_cli(const std::string& args) {
  std::string cmd = cli_path().string() + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
  int status = pclose(p);
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  return r;
}

fs::path scratch_dir() {
  std::string tmpl = (fs::temp_directory_path() / "d4dr-cli-XXXXXX").string();
  char* got = mkdtemp(tmpl.data());
  REQUIRE(got != nullptr);
  return fs::path(got);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> density_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind("h[", 0) == 0) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with code two") {
  REQUIRE(fs::exists(cli_path()));
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  RunResult bad_suite = run_cli("verify --suite nope");
  CHECK(bad_suite.exit_code == 2);
  CHECK(bad_suite.output.find("usage error") != std::string::npos);
  CHECK(run_cli("dr restrict --kill 5").exit_code == 2);
  CHECK(run_cli("dr restrict --kill 1,2,3,4").exit_code == 2);
  CHECK(run_cli("dr restrict").exit_code == 2);
  CHECK(run_cli("export --what nothing --format json").exit_code == 2);
}

TEST_CASE("help lists the subcommands") {
  RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* needle : {"ds", "dr", "verify", "export"})
    CHECK(r.output.find(needle) != std::string::npos);
}

TEST_CASE("polylog and potential exports round-trip through the artifacts") {
  fs::path out = scratch_dir();

  RunResult r = run_cli("--out " + out.string() +
                        " export --what polylog --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("wrote ") != std::string::npos);
  Json tab = Json::parse(slurp(out / "polylog_coeffs.json"));
  bool found11 = false, found1 = false;
  for (const Json& e : tab.at("tables")) {
    if (e.at("indices") == Json::array({1, 1})) {
      found11 = true;
      CHECK(e.at("coeffs") == Json::array({"-1/6", "0", "1/6"}));
    }
    if (e.at("indices") == Json::array({1})) {
      found1 = true;
      CHECK(e.at("coeffs") == Json::array({"1"}));
    }
  }
  CHECK(found11);
  CHECK(found1);

  RunResult r2 = run_cli("--out " + out.string() +
                         " export --what potential --format text");
  CHECK(r2.exit_code == 0);
  std::string body = slurp(out / "potential.txt");
  REQUIRE(body.rfind("F = ", 0) == 0);
  REQUIRE(body.back() == '\n');
  DiffPoly f = parse_poly(body.substr(4, body.size() - 5));
  CHECK(f == frobenius_potential());

  // the manifest accumulates one entry per artifact, without runner flags
  Json man = Json::parse(slurp(out / "manifest.json"));
  CHECK(man.at("polylog_coeffs.json").at("command") ==
        "export --what polylog --format json");
  CHECK(man.at("potential.txt").at("command") ==
        "export --what potential --format text");
  CHECK(man.dump().find("jobs") == std::string::npos);
}

TEST_CASE("artifacts are byte-identical across worker counts") {
  fs::path a = scratch_dir();
  fs::path b = scratch_dir();
  RunResult ra = run_cli("--out " + a.string() +
                         " --jobs 1 ds densities --trunc 11");
  RunResult rb = run_cli("--out " + b.string() +
                         " --jobs 3 ds densities --trunc 11");
  CHECK(ra.exit_code == 0);
  CHECK(rb.exit_code == 0);
  std::vector<std::string> la = density_lines(ra.output);
  std::vector<std::string> lb = density_lines(rb.output);
  CHECK(la.size() == 8);
  CHECK(la == lb);
  CHECK(slurp(a / "densities.json") == slurp(b / "densities.json"));

  Json d = Json::parse(slurp(a / "densities.json"));
  CHECK(d.at("alphabet") == "ut");
  CHECK(d.at("densities").size() == 8);
}
