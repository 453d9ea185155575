#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#ifndef LEGRIP_CLI_PATH
#error "LEGRIP_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(LEGRIP_CLI_PATH) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("plan emits a config record and the planned values") {
  RunResult r = run("plan --n 1000 --k 5 --delta 0.5");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "check=config"));
  CHECK(contains(r.output, "command=plan"));
  CHECK(contains(r.output, "log=natural"));
  CHECK(contains(r.output, "check=plan"));
  CHECK(contains(r.output, "m=2061284215"));
  CHECK(contains(r.output, "h=46641"));
  CHECK(contains(r.output, "logk_clamped=false"));
}

TEST_CASE("identical invocations are byte identical; json mode parses") {
  RunResult a = run("plan --n 100 --k 2 --delta 0.5");
  RunResult b = run("plan --n 100 --k 2 --delta 0.5");
  CHECK(a.output == b.output);
  CHECK(contains(a.output, "m=212206243"));
  CHECK(contains(a.output, "h=10246"));
  CHECK(contains(a.output, "logk_clamped=true"));

  RunResult j = run("--json plan --n 100 --k 2 --delta 0.5");
  CHECK(j.exit_code == 0);
  CHECK(contains(j.output, "\"m\":212206243"));
  CHECK(contains(j.output, "\"logk_clamped\":true"));
  CHECK(j.output.substr(0, 1) == "{");
}

TEST_CASE("gen writes a parseable deterministic matrix that verify accepts") {
  RunResult g = run("gen --deterministic --m 4 --n 6 --prime 29 --out cli_det.ripm");
  CHECK(g.exit_code == 0);
  CHECK(contains(g.output, "p=29"));
  CHECK(contains(g.output, "prime_method=deterministic-small"));
  CHECK(slurp("cli_det.ripm").substr(0, 33) == "RIPM 1 4 6 legendre-deterministic");

  RunResult v = run("verify --matrix cli_det.ripm --checks rip,fro,coherence --k 2");
  CHECK(v.exit_code == 0);
  CHECK(contains(v.output, "check=rip"));
  CHECK(contains(v.output, "delta_exact="));
  CHECK(contains(v.output, "check=fro"));
  CHECK(contains(v.output, "check=coherence"));
  CHECK(contains(v.output, "pass=true"));
}

TEST_CASE("seeded gen round trips through a fixed hex seed") {
  RunResult g = run("gen --m 2 --n 2 --h 4 --x 0 --prime 23 --out cli_seed.ripm");
  CHECK(g.exit_code == 0);
  const std::string text = slurp("cli_seed.ripm");
  CHECK(text.substr(0, 26) == "RIPM 1 2 2 legendre-seeded");
  // X=0, p=23: arguments 1..4 are all quadratic residues
  CHECK(contains(text, "+ +"));
  RunResult again = run("gen --m 2 --n 2 --h 4 --x 0 --prime 23 --out cli_seed2.ripm");
  CHECK(slurp("cli_seed2.ripm") == text);
}

TEST_CASE("the thread count never changes output bytes") {
  run("gen --deterministic --m 8 --n 12 --prime auto --out cli_thr.ripm");
  RunResult one = run("--threads 1 verify --matrix cli_thr.ripm --checks rip --k 3");
  RunResult two = run("--threads 2 verify --matrix cli_thr.ripm --checks rip --k 3");
  CHECK(one.exit_code == 0);
  CHECK(one.output == two.output);
  CHECK_FALSE(contains(one.output, "threads"));  // excluded from the config record

  RunResult s1 = run("--threads 1 sweep --ensemble bernoulli --m 6 --n 8 --k-range 1:2 --trials 4 --rng-seed 3");
  RunResult s2 = run("--threads 2 sweep --ensemble bernoulli --m 6 --n 8 --k-range 1:2 --trials 4 --rng-seed 3");
  CHECK(s1.output == s2.output);
}

TEST_CASE("a composite prime is rejected with a hard failure") {
  RunResult r = run("gen --deterministic --m 2 --n 3 --prime 22 --out cli_bad.ripm");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "not a prime"));
}

TEST_CASE("unknown checks are usage errors") {
  RunResult r = run("verify --matrix cli_det.ripm --checks bogus --k 2");
  CHECK(r.exit_code != 0);
  CHECK(contains(r.output, "unknown check"));
}

TEST_CASE("short flags stay disabled") {
  RunResult r = run("plan -h");
  CHECK(r.exit_code != 0);
  RunResult help = run("plan --help");
  CHECK(help.exit_code == 0);
  CHECK(contains(help.output, "--delta"));
}

TEST_CASE("charsum below the cutoff is informational") {
  RunResult r = run("charsum --p 23 --offsets 1,2 --t 21");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "soft=true"));
  CHECK(contains(r.output, "sum="));
}

TEST_CASE("bias exact matches the library value through the CLI") {
  RunResult r = run("bias --p 23 --h 4 --index-set 1,2");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "numerator=-2"));
  CHECK(contains(r.output, "bias=-0.125"));
  CHECK(contains(r.output, "soft=true"));
}

TEST_CASE("code-convert round trip canonicalizes and a degenerate set hard-fails") {
  {
    std::ofstream f("cli_g.code");
    f << "CODE v1 2 4\n0011\n0101\n";
  }
  RunResult to_set = run("code-convert --in cli_g.code --direction code-to-set --eps 0 --out cli_g.set");
  CHECK(to_set.exit_code == 0);
  CHECK(contains(to_set.output, "exact_bias=0"));
  CHECK(slurp("cli_g.set").substr(0, 10) == "SET v1 2 4");

  RunResult back = run("code-convert --in cli_g.set --direction set-to-code --out cli_g2.code");
  CHECK(back.exit_code == 0);
  CHECK(slurp("cli_g2.code") == "CODE v1 2 4\n0101\n0011\n");

  {
    std::ofstream f("cli_dup.set");
    f << "SET v1 2 2\n++\n++\n";
  }
  RunResult degen = run("code-convert --in cli_dup.set --direction set-to-code --out cli_dup.code");
  CHECK(degen.exit_code == 1);
  CHECK(contains(degen.output, "degenerate=true"));
  CHECK(contains(degen.output, "correlated_index_set=1"));
}

TEST_CASE("recover reports an empty support for zero measurements") {
  RunResult r = run("recover --matrix cli_det.ripm --y 0,0,0,0 --k 2");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "tol_reached=true"));
  CHECK(contains(r.output, "failed=false"));
  CHECK(contains(r.output, "iterations=0"));
}

TEST_CASE("sweep prints the fixed CSV header") {
  RunResult r = run("sweep --ensemble legendre-deterministic --m 6 --n 8 --k-range 1,2,9 --trials 3 --rng-seed 1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "ensemble,k,trials,successes,success_rate,note"));
  CHECK(contains(r.output, "skipped: K exceeds M=6"));

  RunResult f = run("sweep --ensemble legendre-deterministic --m 6 --n 8 --k-range 1 --trials 3 --rng-seed 1 --out cli_sweep.csv");
  CHECK(f.exit_code == 0);
  CHECK(slurp("cli_sweep.csv").rfind("ensemble,k,trials,successes,success_rate,note\n", 0) == 0);
}

TEST_CASE("version flag") {
  RunResult r = run("--version");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "0.1.0"));
}
