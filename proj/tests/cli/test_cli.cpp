#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int status = -1;
  std::string output;  // stdout only
};

std::string bin_path() {
  const char* bin = std::getenv("POLYTERM_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

std::string examples_dir() {
  const char* dir = std::getenv("POLYTERM_EXAMPLES");
  REQUIRE(dir != nullptr);
  return dir;
}

RunResult run(const std::string& args) {
  std::string cmd = bin_path() + " " + args + " 2>/dev/null";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 1024> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    res.output.append(buf.data(), got);
  }
  int raw = pclose(pipe);
  res.status = WEXITSTATUS(raw);
  return res;
}

std::string write_temp(const std::string& name, const std::string& body) {
  std::string path = "/tmp/polyterm_cli_" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("check parses the bundled files") {
  RunResult r = run("check " + examples_dir() + "/assoc.poly");
  CHECK(r.status == 0);
  CHECK(r.output.find("1 generators") != std::string::npos);
  RunResult r2 = run("check " + examples_dir() + "/lz2.poly");
  CHECK(r2.status == 0);
  CHECK(r2.output.find("6 generators") != std::string::npos);
}

TEST_CASE("verify certifies assoc on the grid and exits 0") {
  RunResult r = run("verify " + examples_dir() + "/assoc.poly --mode grid:4");
  CHECK(r.status == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
  CHECK(r.output.find("certified up to bound 4") != std::string::npos);
  // byte-stable across runs
  RunResult again =
      run("verify " + examples_dir() + "/assoc.poly --mode grid:4");
  CHECK(again.output == r.output);
}

TEST_CASE("verify exits 1 with a counterexample on a looping rule") {
  std::string path = write_temp(
      "loop.poly",
      "gen f : 1 -> 1\n"
      "currents min 1\n"
      "interp f { down: (x1); up: (y1); heat: <x1> }\n"
      "rule loop : f => f\n");
  RunResult r = run("verify " + path + " --mode grid:2");
  CHECK(r.status == 1);
  CHECK(r.output.find("refuted") != std::string::npos);
  CHECK(r.output.find("counterexample") != std::string::npos);
}

TEST_CASE("verify --format records emits one json record per rule") {
  RunResult r = run("verify " + examples_dir() +
                    "/assoc.poly --mode grid:4 --format records");
  CHECK(r.status == 0);
  CHECK(r.output.find("\"rule\":\"assoc\"") != std::string::npos);
  CHECK(r.output.find("\"overall\":\"certified-up-to-bound\"") !=
        std::string::npos);
}

TEST_CASE("verify --jobs matches the serial output") {
  RunResult serial =
      run("verify " + examples_dir() + "/lz2.poly --mode grid:2");
  RunResult parallel =
      run("verify " + examples_dir() + "/lz2.poly --mode grid:2 --jobs 4");
  CHECK(serial.status == parallel.status);
  CHECK(serial.output == parallel.output);
}

TEST_CASE("normalize prints a trace") {
  RunResult r = run("normalize " + examples_dir() +
                    "/assoc.poly --term \"(mu * id:2) ; (mu * id:1) ; mu\" "
                    "--budget 16");
  CHECK(r.status == 0);
  CHECK(r.output.find("status: normalized") != std::string::npos);
}

TEST_CASE("malformed terms exit 2 with a diagnostic") {
  RunResult r = run("normalize " + examples_dir() +
                    "/assoc.poly --term \"(mu * id:1\" --budget 4");
  CHECK(r.status == 2);
}

TEST_CASE("match lists occurrences") {
  RunResult r = run("match " + examples_dir() +
                    "/assoc.poly --term \"(mu * id:2) ; (mu * id:1) ; mu\" "
                    "--rule assoc");
  CHECK(r.status == 0);
  CHECK(r.output.find("2 occurrences") != std::string::npos);
}

TEST_CASE("missing files exit 2") {
  RunResult r = run("check /tmp/definitely_not_here.poly");
  CHECK(r.status == 2);
}

TEST_CASE("emit-dot dumps graphviz") {
  RunResult r = run("check " + examples_dir() +
                    "/assoc.poly --term \"(mu * id:1) ; mu\" --emit-dot");
  CHECK(r.status == 0);
  CHECK(r.output.find("digraph circuit") != std::string::npos);
}
