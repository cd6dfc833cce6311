// End-to-end runs of the command-line tool.
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CWAVE_CLI_PATH
#error "CWAVE_CLI_PATH must name the cwave executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string("\"") + CWAVE_CLI_PATH + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cwave_cli_" + std::to_string(getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("help and usage errors") {
  auto help = run("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("Usage") != std::string::npos);
  CHECK(run("").code == 2);                                  // subcommand required
  CHECK(run("fif example --name bogus").code == 2);          // not a fixture
  CHECK(run("tiles w1 --depth 0").code == 2);                // out of range
  CHECK(run("tiles verify --set /nonexistent.json").code == 2);
  CHECK(run("no-such-command").code == 2);
}

TEST_CASE("fif example prints the knot values") {
  auto r = run("fif example --name ex3.3 --depth 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("knot values 0, 7/10, 0") != std::string::npos);
  auto lit = run("fif example --name ex3.5-reflection-literal --depth 2");
  CHECK(lit.code == 1);  // a discontinuous fixture is reported as a failed check
  CHECK(lit.out.find("continuous no") != std::string::npos);
}

TEST_CASE("outputs are deterministic") {
  TempDir dir;
  for (int k = 0; k < 2; ++k) {
    std::string tag = std::to_string(k);
    CHECK(run("fif example --name ex3.3 --depth 6 --csv " + (dir / ("f" + tag + ".csv"))).code == 0);
    CHECK(run("tiles w1 --depth 3 --verify none --out " + (dir / ("w" + tag + ".json"))).code == 0);
    CHECK(run("mra build --out " + (dir / ("m" + tag + ".json"))).code == 0);
    CHECK(run("surface fixture --depth 3 --csv " + (dir / ("s" + tag + ".csv"))).code == 0);
  }
  for (auto name : {"f", "w", "m", "s"}) {
    std::string ext = std::string(name) == "w" || std::string(name) == "m" ? ".json" : ".csv";
    auto a = slurp(dir / (std::string(name) + "0" + ext)), b = slurp(dir / (std::string(name) + "1" + ext));
    CHECK(!a.empty());
    CHECK(a == b);
  }
  auto csv = slurp(dir / "f0.csv");
  CHECK(csv.rfind("x,y\n", 0) == 0);
}

TEST_CASE("verification exit codes") {
  TempDir dir;
  CHECK(run("tiles w1 --depth 6 --verify all").code == 0);
  CHECK(run("tiles w2 --depth 6 --verify all").code == 0);
  CHECK(run("tiles shannon").code == 0);
  // A truncated set checked against a zero bound fails (exit 1).
  REQUIRE(run("tiles w1 --depth 4 --verify none --out " + (dir / "w1.json")).code == 0);
  auto strict = run("tiles verify --set " + (dir / "w1.json"));
  CHECK(strict.code == 1);
  CHECK(strict.out.find("FAIL") != std::string::npos);
  CHECK(run("tiles verify --set " + (dir / "w1.json") + " --bound 1/1000").code == 0);
  // A malformed set file is rejected as bad input.
  std::ofstream(dir / "bad.json") << "{\"boxes\": 3}";
  CHECK(run("tiles verify --set " + (dir / "bad.json")).code == 2);
}

TEST_CASE("output directory from the environment and from a config file") {
  TempDir dir;
  auto env_dir = dir / "env";
  CHECK(run("tiles w1 --depth 2 --verify none --out w.json", "CWAVE_OUT_DIR=" + env_dir).code == 0);
  CHECK(fs::exists(fs::path(env_dir) / "w.json"));

  auto cfg_dir = dir / "cfg";
  std::ofstream(dir / "c.ini") << "out-dir = \"" << cfg_dir << "\"\n";
  CHECK(run("--config " + (dir / "c.ini") + " tiles w2 --depth 2 --verify none --out w.json").code == 0);
  CHECK(fs::exists(fs::path(cfg_dir) / "w.json"));
}

TEST_CASE("other subcommands run") {
  TempDir dir;
  CHECK(run("fif basis --n 3 --gram moment").code == 0);
  CHECK(run("surface basis --depth 2").code == 0);
  CHECK(run("reflections klein").code == 0);
  auto t = run("reflections tessellate --figure unit-square --radius 2 --svg " + (dir / "t.svg"));
  CHECK(t.code == 0);
  CHECK(slurp(dir / "t.svg").find("<svg") != std::string::npos);
  auto j = run("tiles intersection --member 4,0");
  CHECK(j.code == 0);
  CHECK(j.out.find("(4*pi, 0)") != std::string::npos);
  CHECK(run("tiles construct --dim 1 --epsilon 1e-3").code == 0);
}
