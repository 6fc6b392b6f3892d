#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lhasimoto/brackets.hpp"
#include "lhasimoto/cli.hpp"
#include "lhasimoto/serialize.hpp"

namespace fs = std::filesystem;
using lh::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "lattice-hasimoto");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "lh_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(call({"--seed", "1", "verify", "--suite", "jacobi", "--window", "1"}).code == 0);
  CHECK(call({"--seed", "1", "sample", "--beta", "0"}).code == 2);
  CHECK(call({"--seed", "1", "sample", "--no-such-flag"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"--seed", "1", "sample", "--window", "5..2"}).code == 2);
  for (const char* sub :
       {"sample", "transform", "evolve", "verify", "invariance", "converge", "spectrum"}) {
    CAPTURE(sub);
    const auto r = call({sub, "--help"});
    CHECK(r.code == 0);
    CHECK_FALSE(r.out.empty());
  }
}

TEST_CASE("version reports the table hash") {
  const auto r = call({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find(lh::brackets::table_hash()) != std::string::npos);
}

TEST_CASE("seed is printed when omitted and fixes the output") {
  const auto a = call({"sample", "--window", "3"});
  REQUIRE(a.code == 0);
  const auto pos = a.err.find("seed: ");
  REQUIRE(pos != std::string::npos);
  const std::string seed = a.err.substr(pos + 6, a.err.find('\n', pos) - pos - 6);
  const auto b = call({"--seed", seed, "sample", "--window", "3"});
  CHECK(b.out == a.out);
  CHECK(b.err.find("seed: ") == std::string::npos);
}

TEST_CASE("sample, transform and evolve pipeline") {
  const auto dir = scratch();
  const auto wn = dir / "wn.jsonl", spins = dir / "s.jsonl", back = dir / "a.jsonl";
  REQUIRE(call({"--seed", "3", "sample", "--measure", "wn", "--window", "-6..6", "--out",
                wn.string()})
              .code == 0);
  REQUIRE(call({"--seed", "3", "transform", "--direction", "a2s", "--gauge", "haar", "--in",
                wn.string(), "--out", spins.string()})
              .code == 0);
  REQUIRE(call({"--seed", "3", "transform", "--direction", "s2a", "--in", spins.string(),
                "--out", back.string()})
              .code == 0);
  {
    std::ifstream fa(wn), fb(back);
    const auto ra = lh::io::read_records(fa);
    const auto rb = lh::io::read_records(fb);
    REQUIRE(ra.size() == 1);
    REQUIRE(rb.size() == 1);
    const auto& a0 = std::get<lh::ALField>(ra[0].state);
    const auto& b0 = std::get<lh::ALField>(rb[0].state);
    CHECK(b0.window() == a0.window());
    for (long n = a0.window().lo; n <= a0.window().hi; ++n) {
      CHECK(std::abs(a0.at(n)) == doctest::Approx(std::abs(b0.at(n))).epsilon(1e-9));
    }
  }

  const auto t1 = dir / "t1.jsonl", t2 = dir / "t2.jsonl", csv = dir / "c.csv";
  const std::vector<std::string> ev{"--seed", "3", "evolve", "--model", "al", "--tfinal", "0.5",
                                    "--samples", "5", "--in", wn.string()};
  auto a = ev, b = ev;
  a.insert(a.end(), {"--out", t1.string(), "--conserved", csv.string()});
  b.insert(b.end(), {"--out", t2.string()});
  REQUIRE(call(a).code == 0);
  REQUIRE(call(b).code == 0);
  CHECK(slurp(t1) == slurp(t2));
  CHECK(slurp(csv).rfind("t,name,value", 0) == 0);
  CHECK(call({"--seed", "3", "evolve", "--in", (dir / "missing.jsonl").string()}).code != 0);
}

TEST_CASE("config file supplies defaults and flags win") {
  const auto dir = scratch();
  const auto cfg = dir / "cfg.toml";
  {
    std::ofstream f(cfg);
    f << "seed = 7\n[sample]\nbeta = 2.0\ncount = 2\n";
  }
  const auto from_cfg = call({"--config", cfg.string(), "sample", "--window", "3"});
  const auto direct =
      call({"--seed", "7", "sample", "--beta", "2.0", "--count", "2", "--window", "3"});
  REQUIRE(from_cfg.code == 0);
  CHECK(from_cfg.out == direct.out);
  const auto overridden = call({"--config", cfg.string(), "sample", "--window", "3", "--count", "1"});
  CHECK(std::count(overridden.out.begin(), overridden.out.end(), '\n') == 1);
}

TEST_CASE("installed binary behaves like the library entry point") {
  const std::string bin = LH_CLI_PATH;
  CHECK(shell(bin + " --seed 1 verify --suite compat --window 1 > /dev/null") == 0);
  const int bad = shell(bin + " --seed 1 sample --beta -1 > /dev/null 2>&1");
  CHECK(WEXITSTATUS(bad) == 2);
}

TEST_CASE("spectrum and verify json") {
  const auto r = call({"spectrum", "--beta", "1", "--lmax", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("eigenvalues") != std::string::npos);
  const auto out = scratch() / "v.json";
  CHECK(call({"--seed", "2", "verify", "--suite", "hamilton", "--window", "3", "--json",
              out.string()})
            .code == 0);
  CHECK(slurp(out).find("pass") != std::string::npos);
}
